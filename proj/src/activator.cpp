#include "reslab/activator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reslab/errors.hpp"
#include "reslab/quadrature.hpp"

namespace reslab {

void ActivatorParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("activator: lambda must be positive");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("activator: epsilon must be nonnegative");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidInput("activator: delta must be nonnegative");
  }
  if (!(sigma >= 0.0 && 2.0 * sigma < 1.0)) {
    throw InvalidInput("activator: sigma must lie in [0, 1/2)");
  }
}

double ActivatorParams::damping_rate() const {
  return delta * std::pow(lambda, 2.0 * sigma);
}

DerivedConstants derived_constants(const SpeedClassParams& cls) {
  cls.validate();
  DerivedConstants k;
  k.mu3 = cls.mu1 * std::min(1.0, cls.mu1) / (2.0 * cls.mu2 * cls.mu2);
  k.mu4 = 1.0 / (4.0 * std::sqrt(cls.mu2));
  k.mu5 = cls.holder_bound * k.mu4 / (4.0 * std::pow(cls.mu2, cls.alpha / 2.0));
  k.mu5_direct =
      cls.holder_bound / (16.0 * std::pow(cls.mu2, (1.0 + cls.alpha) / 2.0));
  return k;
}

double epsilon_for_frequency(const SpeedClassParams& cls, double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidInput("epsilon_for_frequency: lambda must be positive");
  }
  return cls.holder_bound / (4.0 * std::pow(cls.mu2, cls.alpha / 2.0)) *
         std::pow(lambda, -cls.alpha);
}

ActivatorParams rescaled_params(const SpeedClassParams& cls, double lambda) {
  return {lambda, epsilon_for_frequency(cls, lambda), cls.delta, cls.sigma};
}

double speed_grid_step(double mu2, double lambda) {
  return 2.0 * std::numbers::pi / (32.0 * lambda * std::sqrt(mu2));
}

double ClosedFormState::w() const {
  if (b > 500.0) throw InvalidInput("closed form: e^b would overflow");
  return sin_a * std::exp(b);
}

double ClosedFormState::dw() const {
  if (b > 500.0) throw InvalidInput("closed form: e^b would overflow");
  return (a_rate * cos_a + b_rate * sin_a) * std::exp(b);
}

namespace detail {

// Cumulative phase a and J(t) = int_0^t sin^2(a) / c0^{1/2} on panels narrow
// enough to resolve sin^2(a) with 16 panels (80 nodes) per period.
class PhaseTable {
 public:
  static constexpr std::size_t kMaxPanels = std::size_t{1} << 23;

  PhaseTable(const SmoothBaseSpeed& base, double lambda, double t_max)
      : base_(base), lambda_(lambda) {
    const double nominal = speed_grid_step(base.max_value(), lambda);
    const double panels_f = std::ceil(t_max / nominal);
    if (panels_f > static_cast<double>(kMaxPanels)) {
      throw InvalidInput(
          "activator: phase table would exceed its panel cap; shorten t_max "
          "or lower lambda");
    }
    const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(panels_f));
    width_ = t_max > 0.0 ? t_max / static_cast<double>(panels) : nominal;
    phase_.resize(panels + 1);
    sin2_.resize(panels + 1);
    quad::CompensatedSum a_sum;
    quad::CompensatedSum j_sum;
    phase_[0] = 0.0;
    sin2_[0] = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
      const double lo = width_ * static_cast<double>(k);
      const double hi = lo + width_;
      const double a_lo = phase_[k];
      a_sum.add(lambda_ * quad::gauss5(root(), lo, hi));
      j_sum.add(sin2_partial(lo, a_lo, hi));
      phase_[k + 1] = a_sum.value();
      sin2_[k + 1] = j_sum.value();
    }
  }

  double phase(double t) const {
    const auto k = panel(t);
    const double lo = width_ * static_cast<double>(k);
    return phase_[k] + lambda_ * quad::gauss5(root(), lo, t);
  }

  double sin2_integral(double t) const {
    const auto k = panel(t);
    const double lo = width_ * static_cast<double>(k);
    return sin2_[k] + sin2_partial(lo, phase_[k], t);
  }

 private:
  struct Root {
    const SmoothBaseSpeed* base;
    double operator()(double s) const { return std::sqrt(base->value(s)); }
  };
  Root root() const { return Root{&base_}; }

  std::size_t panel(double t) const {
    const auto k = static_cast<std::size_t>(std::max(0.0, t / width_));
    return std::min(k, phase_.size() - 2);
  }

  // int_lo^hi sin^2(a(s)) / c0(s)^{1/2} ds given a(lo).
  double sin2_partial(double lo, double a_lo, double hi) const {
    return quad::gauss5(
        [&](double s) {
          const double a = a_lo + lambda_ * quad::gauss5(root(), lo, s);
          const double sa = std::sin(a);
          return sa * sa / std::sqrt(base_.value(s));
        },
        lo, hi);
  }

  SmoothBaseSpeed base_;
  double lambda_;
  double width_ = 0.0;
  std::vector<double> phase_;
  std::vector<double> sin2_;
};

}  // namespace detail

LocalFrame::LocalFrame(const SmoothBaseSpeed& base, const ActivatorParams& p,
                       double t0, double a0)
    : base_(base),
      params_(p),
      t0_(t0),
      sin_a0_(std::sin(a0)),
      cos_a0_(std::cos(a0)) {}

double LocalFrame::delta_phase(double tau) const {
  if (base_.is_constant()) {
    return params_.lambda * std::sqrt(base_.mean()) * tau;
  }
  return params_.lambda *
         quad::gauss5([&](double s) { return std::sqrt(base_.value(s)); }, t0_,
                      t0_ + tau);
}

double LocalFrame::delta_exponent(double tau) const {
  const double half_el = 0.5 * params_.epsilon * params_.lambda;
  const double damping = params_.damping_rate();
  return quad::gauss5(
      [&](double s) {
        const double da = delta_phase(s - t0_);
        const double sa = sin_a0_ * std::cos(da) + cos_a0_ * std::sin(da);
        const double c = base_.value(s);
        return half_el * sa * sa / std::sqrt(c) - base_.d1(s) / (4.0 * c) -
               damping;
      },
      t0_, t0_ + tau);
}

double LocalFrame::scaled_w_increment(double tau) const {
  // e^{db} sin(a0 + da) - sin(a0), arranged so that every term is O(tau).
  const double da = delta_phase(tau);
  const double em = std::expm1(delta_exponent(tau));
  const double half_sin = std::sin(0.5 * da);
  const double cos_minus_one = -2.0 * half_sin * half_sin;
  const double sin_da = std::sin(da);
  return sin_a0_ * (em * std::cos(da) + cos_minus_one) +
         cos_a0_ * sin_da * (1.0 + em);
}

ActivatorSpeed::ActivatorSpeed(SmoothBaseSpeed base, ActivatorParams params,
                               double t_max)
    : base_(base), params_(params), t_max_(t_max) {
  params_.validate();
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw InvalidInput("activator: t_max must be finite and nonnegative");
  }
  if (!base_.is_constant()) {
    table_ = std::make_shared<const detail::PhaseTable>(base_, params_.lambda,
                                                        t_max_);
  }
}

void ActivatorSpeed::check_time(double t) const {
  if (!(t >= 0.0)) throw InvalidInput("activator: time must be nonnegative");
  if (table_ && t > t_max_ * (1.0 + 1e-12)) {
    throw InvalidInput("activator: time beyond the tabulated window");
  }
}

double ActivatorSpeed::phase(double t) const {
  check_time(t);
  if (!table_) return params_.lambda * std::sqrt(base_.mean()) * t;
  return table_->phase(t);
}

double ActivatorSpeed::phase_rate(double t) const {
  return params_.lambda * std::sqrt(base_.value(t));
}

double ActivatorSpeed::exponent(double t) const {
  check_time(t);
  const double el = params_.epsilon * params_.lambda;
  const double damping = params_.damping_rate() * t;
  if (!table_) {
    const double m = std::sqrt(base_.mean());
    const double lm = params_.lambda * m;
    return el / (2.0 * m) * (0.5 * t - std::sin(2.0 * lm * t) / (4.0 * lm)) -
           damping;
  }
  return 0.5 * el * table_->sin2_integral(t) -
         0.25 * std::log(base_.value(t) / base_.value(0.0)) - damping;
}

double ActivatorSpeed::exponent_rate(double t) const {
  const double sa = std::sin(phase(t));
  const double c = base_.value(t);
  return 0.5 * params_.epsilon * params_.lambda * sa * sa / std::sqrt(c) -
         base_.d1(t) / (4.0 * c) - params_.damping_rate();
}

double ActivatorSpeed::smooth_part(double t) const {
  const double lam = params_.lambda;
  const double c = base_.value(t);
  const double ratio = base_.d1(t) / c;
  const double damping_term =
      params_.delta * params_.delta / std::pow(lam, 2.0 - 4.0 * params_.sigma);
  return c - 5.0 / 16.0 / (lam * lam) * ratio * ratio +
         base_.d2(t) / (4.0 * lam * lam * c) + damping_term;
}

double ActivatorSpeed::oscillatory_part(double t) const {
  const double a = phase(t);
  const double eps = params_.epsilon;
  const double c = base_.value(t);
  const double sa = std::sin(a);
  const double s2 = sa * sa;
  return -eps * std::sin(2.0 * a) - eps * eps / 4.0 * s2 * s2 / c +
         eps / (2.0 * params_.lambda) * base_.d1(t) / (c * std::sqrt(c)) * s2;
}

double ActivatorSpeed::operator()(double t) const {
  return smooth_part(t) + oscillatory_part(t);
}

ClosedFormState ActivatorSpeed::solution(double t) const {
  ClosedFormState st;
  const double a = phase(t);
  st.sin_a = std::sin(a);
  st.cos_a = std::cos(a);
  st.b = exponent(t);
  st.a_rate = phase_rate(t);
  const double c = base_.value(t);
  st.b_rate = 0.5 * params_.epsilon * params_.lambda * st.sin_a * st.sin_a /
                  std::sqrt(c) -
              base_.d1(t) / (4.0 * c) - params_.damping_rate();
  return st;
}

double ActivatorSpeed::log_energy(double t) const {
  const ClosedFormState st = solution(t);
  const double lam = params_.lambda;
  const double velocity = st.a_rate * st.cos_a + st.b_rate * st.sin_a;
  const double r = (velocity * velocity + lam * lam * st.sin_a * st.sin_a) /
                   (lam * lam * base_.value(0.0));
  return std::log(r) + 2.0 * st.b;
}

LocalFrame ActivatorSpeed::local(double t0) const {
  return LocalFrame(base_, params_, t0, phase(t0));
}

SampledSpeed ActivatorSpeed::sample(double t_end, double max_step) const {
  return SampledSpeed::from_function([this](double t) { return (*this)(t); },
                                     t_end, max_step);
}

double phase(const SmoothBaseSpeed& base, double lambda, double t,
             double rel_tol) {
  if (!(t >= 0.0)) throw InvalidInput("phase: time must be nonnegative");
  if (!(lambda > 0.0)) throw InvalidInput("phase: lambda must be positive");
  if (base.is_constant()) return lambda * std::sqrt(base.mean()) * t;
  if (t == 0.0) return 0.0;
  const auto initial =
      static_cast<std::size_t>(std::ceil(t * base.omega() / std::numbers::pi)) + 1;
  const auto result = quad::adaptive_gauss5(
      [&](double s) { return std::sqrt(base.value(s)); }, 0.0, t, rel_tol,
      initial);
  return lambda * result.value;
}

double exponent_b(const SmoothBaseSpeed& base, const ActivatorParams& p,
                  double t) {
  if (!(t >= 0.0)) throw InvalidInput("exponent_b: time must be nonnegative");
  return ActivatorSpeed(base, p, t).exponent(t);
}

double b_lower_bound(const SpeedClassParams& cls, double L0,
                     const ActivatorParams& p, double t) {
  if (!(cls.mu1 > 0.0 && cls.mu1 <= cls.mu2)) {
    throw InvalidInput("b_lower_bound: need 0 < mu1 <= mu2");
  }
  if (!(L0 >= 0.0)) throw InvalidInput("b_lower_bound: L0 must be nonnegative");
  if (!(t >= 0.0)) throw InvalidInput("b_lower_bound: time must be nonnegative");
  p.validate();
  const double el = p.epsilon * p.lambda;
  const double growth = el / (4.0 * std::sqrt(cls.mu2)) *
                        (1.0 - L0 / (4.0 * std::pow(cls.mu1, 1.5) * p.lambda));
  return growth * t - p.damping_rate() * t -
         p.epsilon / (8.0 * std::sqrt(cls.mu1 * cls.mu2)) -
         0.25 * std::log(cls.mu2 / cls.mu1);
}

double activator_speed(const SmoothBaseSpeed& base, const ActivatorParams& p,
                       double t) {
  if (!(t >= 0.0)) throw InvalidInput("activator_speed: negative time");
  return ActivatorSpeed(base, p, t)(t);
}

ClosedFormState activator_solution(const SmoothBaseSpeed& base,
                                   const ActivatorParams& p, double t) {
  if (!(t >= 0.0)) throw InvalidInput("activator_solution: negative time");
  return ActivatorSpeed(base, p, t).solution(t);
}

double log_energy_closed_form(const SmoothBaseSpeed& base,
                              const ActivatorParams& p, double t) {
  if (!(t >= 0.0)) throw InvalidInput("log_energy_closed_form: negative time");
  return ActivatorSpeed(base, p, t).log_energy(t);
}

namespace {

double min_spacing(std::span<const double> grid) {
  if (grid.size() < 2) {
    throw InvalidInput("grid must contain at least two times");
  }
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double d = grid[j + 1] - grid[j];
    if (!(d > 0.0)) throw InvalidInput("grid times must increase strictly");
    h = std::min(h, d);
  }
  if (!(grid.front() >= 0.0)) throw InvalidInput("grid starts before t = 0");
  return h;
}

}  // namespace

ResidualReport closed_form_residual(const ActivatorSpeed& speed,
                                    std::span<const double> grid) {
  const double h_grid = min_spacing(grid);
  const auto& p = speed.params();
  const double lam = p.lambda;
  const double h = std::min(1e-4 / lam, h_grid / 8.0);
  if (!(h > 0.0) || 3.0 * h <= 0.0) {
    throw InvalidInput("closed_form_residual: grid too fine for the stencil");
  }
  const double damping = p.damping_rate();
  ResidualReport report;
  report.fd_step = h;
  for (double t : grid) {
    const LocalFrame frame = speed.local(t);
    double g[7];
    for (int j = -3; j <= 3; ++j) {
      g[j + 3] = j == 0 ? 0.0 : frame.scaled_w_increment(j * h);
    }
    // sin(a0) drops out: the stencil weights sum to zero.
    const double w2 = ((g[0] + g[6]) / 90.0 - 3.0 / 20.0 * (g[1] + g[5]) +
                       1.5 * (g[2] + g[4]) - 49.0 / 18.0 * g[3]) /
                      (h * h);
    const ClosedFormState st = speed.solution(t);
    // Everything below is measured in units of e^{b(t)}.
    const double w = st.sin_a;
    const double w1 = st.a_rate * st.cos_a + st.b_rate * st.sin_a;
    const double r = w2 + 2.0 * damping * w1 + lam * lam * speed(t) * w;
    const double scale = lam * lam * std::max(std::abs(w), 1.0 / lam);
    const double rel = std::abs(r) / scale;
    if (rel > report.max_residual || !std::isfinite(rel)) {
      report.max_residual = rel;
      report.worst_time = t;
    }
  }
  return report;
}

ResidualReport closed_form_residual(const SmoothBaseSpeed& base,
                                    const ActivatorParams& p,
                                    std::span<const double> grid) {
  min_spacing(grid);
  return closed_form_residual(ActivatorSpeed(base, p, grid.back()), grid);
}

double ansatz_residual(const ActivatorSpeed& speed,
                       std::span<const double> grid) {
  min_spacing(grid);
  const auto& p = speed.params();
  const double h = 1e-2 / p.lambda;
  const double lo = 3.0 * h;
  const double hi = speed.base().is_constant()
                        ? std::numeric_limits<double>::infinity()
                        : speed.t_max() - 3.0 * h;
  if (!(hi > lo)) throw InvalidInput("ansatz_residual: window too short");
  const auto d1 = [h](auto&& f, double t) {
    return (-(f(t - 3 * h) - f(t + 3 * h)) / 60.0 +
            3.0 / 20.0 * (f(t - 2 * h) - f(t + 2 * h)) -
            0.75 * (f(t - h) - f(t + h))) /
           h;
  };
  const double damping = p.damping_rate();
  double worst = 0.0;
  for (double t0 : grid) {
    const double t = std::clamp(t0, lo, hi);
    const double a2 = d1([&](double s) { return speed.phase_rate(s); }, t);
    const double beta1 =
        d1([&](double s) { return speed.exponent(s); }, t) + damping;
    const double a1 = speed.phase_rate(t);
    const double sa = std::sin(speed.phase(t));
    const double rhs = p.epsilon * p.lambda * p.lambda * sa * sa;
    const double lhs_cross = 2.0 * a1 * beta1;
    const double scale = std::abs(a2) + std::abs(lhs_cross) + std::abs(rhs);
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(a2 + lhs_cross - rhs) / scale);
  }
  return worst;
}

double cos_phase_integral(const SmoothBaseSpeed& base, double lambda,
                          double t) {
  if (!(t >= 0.0)) throw InvalidInput("cos_phase_integral: negative time");
  if (!(lambda > 0.0)) throw InvalidInput("cos_phase_integral: bad lambda");
  if (t == 0.0) return 0.0;
  const auto root = [&](double s) { return std::sqrt(base.value(s)); };
  const double nominal = speed_grid_step(base.max_value(), lambda);
  const auto panels = static_cast<std::size_t>(std::ceil(t / nominal));
  const double width = t / static_cast<double>(panels);
  quad::CompensatedSum a_sum;
  quad::CompensatedSum integral;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = width * static_cast<double>(k);
    const double hi = lo + width;
    const double a_lo = a_sum.value();
    integral.add(quad::gauss5(
        [&](double s) {
          return std::cos(2.0 * (a_lo + lambda * quad::gauss5(root, lo, s)));
        },
        lo, hi));
    a_sum.add(lambda * quad::gauss5(root, lo, hi));
  }
  return integral.value();
}

double cos_phase_integral_bound(const SpeedClassParams& cls, double L0,
                                double lambda, double t) {
  return 1.0 / (2.0 * std::sqrt(cls.mu1) * lambda) +
         L0 * t / (4.0 * std::pow(cls.mu1, 1.5) * lambda);
}

std::vector<double> uniform_grid(double t_end, std::size_t points) {
  if (points < 2 || !(t_end > 0.0)) {
    throw InvalidInput("uniform_grid: need t_end > 0 and at least 2 points");
  }
  std::vector<double> grid(points);
  const double h = t_end / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) grid[j] = h * static_cast<double>(j);
  grid.back() = t_end;
  return grid;
}

}  // namespace reslab
