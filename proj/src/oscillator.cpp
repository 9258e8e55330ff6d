#include "reslab/oscillator.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "reslab/errors.hpp"

namespace reslab {

void OscillatorProblem::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("oscillator: lambda must be positive");
  }
  if (!(delta >= 0.0) || !(sigma >= 0.0 && 2.0 * sigma < 1.0)) {
    throw InvalidInput("oscillator: need delta >= 0 and 0 <= sigma < 1/2");
  }
  if (!speed) throw InvalidInput("oscillator: no speed given");
  if (admissible_class) admissible_class->validate();
  if (!(speed_ceiling() > 0.0) || !std::isfinite(speed_ceiling())) {
    throw InvalidInput("oscillator: a positive speed upper bound is required");
  }
  if (!std::isfinite(u0) || !std::isfinite(u1) || (u0 == 0.0 && u1 == 0.0)) {
    throw InvalidInput("oscillator: initial data must be finite and nonzero");
  }
}

double OscillatorProblem::damping_rate() const {
  return delta * std::pow(lambda, 2.0 * sigma);
}

double OscillatorProblem::speed_ceiling() const {
  return admissible_class ? admissible_class->mu2 : speed_upper;
}

namespace {

using State = std::array<double, 2>;

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output weights (Hairer, Norsett and Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

class Rhs {
 public:
  explicit Rhs(const OscillatorProblem& p)
      : prob_(p), lambda_(p.lambda), damping_(p.damping_rate()) {}

  State operator()(double t, const State& y) const {
    const double c = prob_.speed(t);
    if (prob_.admissible_class) {
      const auto& cls = *prob_.admissible_class;
      if (!(c >= cls.mu1 && c <= cls.mu2)) {
        throw AdmissibilityViolation(
            "oscillator: speed left [mu1, mu2] at t = " + std::to_string(t), t,
            c);
      }
    }
    return {lambda_ * y[1], -2.0 * damping_ * y[1] - lambda_ * c * y[0]};
  }

 private:
  const OscillatorProblem& prob_;
  double lambda_;
  double damping_;
};

State axpy(const State& y, double h,
           std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [w, k] : terms) {
    out[0] += h * w * (*k)[0];
    out[1] += h * w * (*k)[1];
  }
  return out;
}

double norm(const State& y) { return std::hypot(y[0], y[1]); }

}  // namespace

IntegrationResult integrate_renormalized(const OscillatorProblem& prob,
                                         std::span<const double> output_times,
                                         const IntegrationOptions& options) {
  prob.validate();
  if (!(options.rel_tol >= 1e-12 && options.rel_tol <= 1e-3)) {
    throw InvalidInput("oscillator: rel_tol must lie in [1e-12, 1e-3]");
  }
  if (!(options.renorm_threshold > 1.0)) {
    throw InvalidInput("oscillator: renormalization threshold must exceed 1");
  }
  if (output_times.empty()) throw InvalidInput("oscillator: no output times");
  for (std::size_t j = 0; j < output_times.size(); ++j) {
    if (!(output_times[j] >= 0.0) || !std::isfinite(output_times[j]) ||
        (j > 0 && !(output_times[j] > output_times[j - 1]))) {
      throw InvalidInput(
          "oscillator: output times must be finite, nonnegative and "
          "increasing");
    }
  }
  const double t_end = output_times.back();
  if (!(t_end > 0.0)) throw InvalidInput("oscillator: t_end must be positive");

  const Rhs f(prob);
  const double ceiling =
      2.0 * std::numbers::pi / (16.0 * prob.lambda * std::sqrt(prob.speed_ceiling()));
  const double ln2 = std::numbers::ln2;

  IntegrationResult result;
  auto& trace = result.trace;
  trace.times.assign(output_times.begin(), output_times.end());
  trace.log_energy.reserve(output_times.size());
  trace.ledger.reserve(output_times.size());

  long long exponent = 0;
  const auto record = [&](const State& y) {
    const double e = y[0] * y[0] + y[1] * y[1];
    const double shift = 2.0 * static_cast<double>(exponent) * ln2;
    trace.log_energy.push_back(std::log(e) + shift);
    trace.ledger.push_back(static_cast<double>(exponent) * ln2);
  };

  State y{prob.lambda * prob.u0, prob.u1};
  {
    int e = 0;
    std::frexp(norm(y), &e);
    y = {std::ldexp(y[0], -e), std::ldexp(y[1], -e)};
    exponent = e;
  }
  double t = 0.0;
  std::size_t next = 0;
  while (next < output_times.size() && output_times[next] == 0.0) {
    record(y);
    ++next;
  }

  State k1 = f(t, y);
  double h = std::min(ceiling, t_end) / 4.0;
  const double low = 1.0 / options.renorm_threshold;

  while (t < t_end) {
    if (result.accepted_steps + result.rejected_steps >= options.max_steps) {
      throw IntegrationFailure("oscillator: step limit reached", t);
    }
    h = std::min({h, ceiling, t_end - t});
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;

    const State k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 =
        f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(t + c5 * h, axpy(y, h,
                                        {{a51, &k1}, {a52, &k2}, {a53, &k3},
                                         {a54, &k4}}));
    const State k6 = f(t + h, axpy(y, h,
                                   {{a61, &k1}, {a62, &k2}, {a63, &k3},
                                    {a64, &k4}, {a65, &k5}}));
    const State y1 = axpy(y, h,
                          {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5},
                           {a76, &k6}});
    const State k7 = f(t + h, y1);
    if (!std::isfinite(y1[0]) || !std::isfinite(y1[1])) {
      throw IntegrationFailure("oscillator: non-finite state", t);
    }
    const State err = axpy(State{0.0, 0.0}, h,
                           {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5},
                            {e6, &k6}, {e7, &k7}});
    const double scale = options.rel_tol * std::max(norm(y), norm(y1));
    const double ratio = norm(err) / scale;

    if (!(ratio <= 1.0)) {
      ++result.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(std::max(ratio, 1e-300), -0.2));
      if (!std::isfinite(ratio) || h < 1e-14 * std::max(1.0, t)) {
        throw IntegrationFailure("oscillator: step size underflow", t);
      }
      continue;
    }
    ++result.accepted_steps;
    const double t1 = last ? t_end : t + h;

    // Dense output for the requested times inside (t, t1].
    if (next < output_times.size() && output_times[next] <= t1) {
      const State dy{y1[0] - y[0], y1[1] - y[1]};
      State r3{}, r4{}, r5{};
      for (int i = 0; i < 2; ++i) {
        r3[i] = h * k1[i] - dy[i];
        r4[i] = dy[i] - h * k7[i] - r3[i];
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                     d6 * k6[i] + d7 * k7[i]);
      }
      while (next < output_times.size() && output_times[next] <= t1) {
        const double tq = output_times[next];
        if (tq == t1) {
          record(y1);
        } else {
          const double th = (tq - t) / h;
          const double th1 = 1.0 - th;
          State yq;
          for (int i = 0; i < 2; ++i) {
            yq[i] = y[i] + th * (dy[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
          }
          record(yq);
        }
        ++next;
      }
    }

    t = t1;
    y = y1;
    k1 = k7;
    const double n = norm(y);
    if (n > options.renorm_threshold || n < low) {
      int e = 0;
      std::frexp(n, &e);
      y = {std::ldexp(y[0], -e), std::ldexp(y[1], -e)};
      k1 = {std::ldexp(k1[0], -e), std::ldexp(k1[1], -e)};
      exponent += e;
      ++result.renormalizations;
    }
    h *= std::min(5.0, 0.9 * std::pow(std::max(ratio, 1e-300), -0.2));
  }

  result.scaled_v = y[0];
  result.scaled_p = y[1];
  result.exponent = exponent;
  for (double v : trace.log_energy) {
    if (!std::isfinite(v)) {
      throw IntegrationFailure("oscillator: non-finite energy", t);
    }
  }
  return result;
}

IntegrationResult integrate_renormalized(const OscillatorProblem& prob,
                                         double t_end, std::size_t points,
                                         const IntegrationOptions& options) {
  if (!(t_end > 0.0) || points < 2) {
    throw InvalidInput("oscillator: need t_end > 0 and at least 2 points");
  }
  std::vector<double> times(points);
  const double step = t_end / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) times[j] = step * static_cast<double>(j);
  times.back() = t_end;
  return integrate_renormalized(prob, times, options);
}

double growth_exponent_fit(const EnergyTrace& trace, double t_lo, double t_hi) {
  if (trace.times.empty() || !(t_hi > t_lo) || t_lo < trace.times.front() ||
      t_hi > trace.times.back()) {
    throw InvalidInput("growth_exponent_fit: window outside the trace");
  }
  double n = 0.0, st = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < trace.times.size(); ++j) {
    const double t = trace.times[j];
    if (t < t_lo || t > t_hi) continue;
    n += 1.0;
    st += t;
    sy += trace.log_energy[j];
  }
  if (n < 10.0) {
    throw InvalidInput("growth_exponent_fit: fewer than 10 points in window");
  }
  const double tm = st / n;
  const double ym = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < trace.times.size(); ++j) {
    const double t = trace.times[j];
    if (t < t_lo || t > t_hi) continue;
    sxx += (t - tm) * (t - tm);
    sxy += (t - tm) * (trace.log_energy[j] - ym);
  }
  return sxy / sxx;
}

double constant_speed_log_energy(double c, double lambda, double damping,
                                 double u0, double u1, double t) {
  if (!(c > 0.0) || !(lambda > 0.0) || !(damping >= 0.0) || !(t >= 0.0)) {
    throw InvalidInput("constant_speed_log_energy: invalid arguments");
  }
  const double D = damping;
  const double k2 = lambda * lambda * c;
  const double disc = D * D - k2;
  double u = 0.0;
  double du = 0.0;
  double log_scale = 0.0;  // the pair (u, du) is scaled by exp(-log_scale)
  if (std::abs(disc) <= 1e-12 * std::max(D * D, k2)) {
    const double B = u1 + D * u0;
    u = u0 + B * t;
    du = B - D * u;
    log_scale = -D * t;
  } else if (disc < 0.0) {
    const double w = std::sqrt(-disc);
    const double B = (u1 + D * u0) / w;
    const double cs = std::cos(w * t);
    const double sn = std::sin(w * t);
    u = u0 * cs + B * sn;
    du = (-D * u0 + B * w) * cs + (-D * B - u0 * w) * sn;
    log_scale = -D * t;
  } else {
    // cosh and sinh with the growing exponential factored out.
    const double kappa = std::sqrt(disc);
    const double B = (u1 + D * u0) / kappa;
    const double decay = std::exp(-2.0 * kappa * t);
    const double ch = 0.5 * (1.0 + decay);
    const double sh = 0.5 * (1.0 - decay);
    u = u0 * ch + B * sh;
    du = (-D * u0 + B * kappa) * ch + (-D * B + u0 * kappa) * sh;
    log_scale = (kappa - D) * t;
  }
  return std::log(du * du + lambda * lambda * u * u) + 2.0 * log_scale;
}

}  // namespace reslab
