#include "reslab/speeds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "reslab/errors.hpp"
#include "reslab/io.hpp"

namespace reslab {

void SpeedClassParams::validate() const {
  const auto require = [](bool cond, const char* msg) {
    if (!cond) throw InvalidInput(msg);
  };
  require(std::isfinite(mu1) && std::isfinite(mu2) && std::isfinite(alpha) &&
              std::isfinite(holder_bound) && std::isfinite(delta) &&
              std::isfinite(sigma),
          "speed class: non-finite parameter");
  require(mu1 > 0.0, "speed class: mu1 must be positive");
  require(mu1 < mu2, "speed class: mu1 must be smaller than mu2");
  require(alpha > 0.0 && alpha < 1.0, "speed class: alpha must lie in (0,1)");
  require(holder_bound > 0.0, "speed class: H must be positive");
  require(delta >= 0.0, "speed class: delta must be nonnegative");
  require(sigma >= 0.0 && 2.0 * sigma < 1.0,
          "speed class: sigma must lie in [0, 1/2)");
}

SampledSpeed::SampledSpeed(double step, std::vector<double> values)
    : step_(step), values_(std::move(values)) {
  if (!(step_ > 0.0) || !std::isfinite(step_)) {
    throw InvalidInput("sampled speed: step must be positive and finite");
  }
  if (values_.size() < 2) {
    throw InvalidInput("sampled speed: at least 2 samples required");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InvalidInput("sampled speed: non-finite sample");
    }
  }
}

SampledSpeed SampledSpeed::from_function(
    const std::function<double(double)>& f, double t_end, double max_step) {
  if (!(t_end > 0.0) || !(max_step > 0.0)) {
    throw InvalidInput("sampled speed: t_end and max_step must be positive");
  }
  const auto intervals =
      static_cast<std::size_t>(std::ceil(t_end / max_step - 1e-12));
  const std::size_t n = std::max<std::size_t>(intervals, 1);
  const double h = t_end / static_cast<double>(n);
  std::vector<double> values(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    values[j] = f(h * static_cast<double>(j));
  }
  return SampledSpeed(h, std::move(values));
}

double SampledSpeed::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double SampledSpeed::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double SampledSpeed::operator()(double t) const {
  if (t <= 0.0) return values_.front();
  const double x = t / step_;
  const auto last = values_.size() - 1;
  if (x >= static_cast<double>(last)) return values_.back();
  const auto j = static_cast<std::size_t>(x);
  const double frac = x - static_cast<double>(j);
  return values_[j] + frac * (values_[j + 1] - values_[j]);
}

SmoothBaseSpeed::SmoothBaseSpeed(Form form, double mean, double amplitude,
                                 double omega, double phase)
    : form_(form),
      mean_(mean),
      amplitude_(amplitude),
      omega_(omega),
      phase_(phase) {}

SmoothBaseSpeed SmoothBaseSpeed::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidInput("base speed: constant value must be positive");
  }
  return SmoothBaseSpeed(Form::constant, value, 0.0, 0.0, 0.0);
}

SmoothBaseSpeed SmoothBaseSpeed::sinusoidal(double mean, double amplitude,
                                            double omega, double phase) {
  if (!std::isfinite(mean) || !std::isfinite(amplitude) ||
      !std::isfinite(omega) || !std::isfinite(phase)) {
    throw InvalidInput("base speed: non-finite sinusoid parameter");
  }
  if (!(omega > 0.0)) {
    throw InvalidInput("base speed: omega must be positive");
  }
  if (!(mean - std::abs(amplitude) > 0.0)) {
    throw InvalidInput("base speed: sinusoid must stay positive");
  }
  if (amplitude == 0.0) return constant(mean);
  return SmoothBaseSpeed(Form::sinusoidal, mean, amplitude, omega, phase);
}

SmoothBaseSpeed SmoothBaseSpeed::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("base speed: expected const:V or sin:m,A,omega,phi");
  }
  const auto kind = text.substr(0, colon);
  std::vector<double> args;
  std::string_view rest = text.substr(colon + 1);
  while (true) {
    const auto comma = rest.find(',');
    args.push_back(io::parse_double(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (kind == "const") {
    if (args.size() != 1) throw InvalidInput("base speed: const takes 1 value");
    return constant(args[0]);
  }
  if (kind == "sin") {
    if (args.size() != 4) {
      throw InvalidInput("base speed: sin takes m,A,omega,phi");
    }
    return sinusoidal(args[0], args[1], args[2], args[3]);
  }
  throw InvalidInput("base speed: unknown form '" + std::string(kind) + "'");
}

std::string SmoothBaseSpeed::describe() const {
  std::ostringstream out;
  if (is_constant()) {
    out << "const:" << io::format_double(mean_);
  } else {
    out << "sin:" << io::format_double(mean_) << ','
        << io::format_double(amplitude_) << ',' << io::format_double(omega_)
        << ',' << io::format_double(phase_);
  }
  return out.str();
}

double SmoothBaseSpeed::value(double t) const {
  if (is_constant()) return mean_;
  return mean_ + amplitude_ * std::sin(omega_ * t + phase_);
}

double SmoothBaseSpeed::d1(double t) const {
  if (is_constant()) return 0.0;
  return amplitude_ * omega_ * std::cos(omega_ * t + phase_);
}

double SmoothBaseSpeed::d2(double t) const {
  if (is_constant()) return 0.0;
  return -amplitude_ * omega_ * omega_ * std::sin(omega_ * t + phase_);
}

double SmoothBaseSpeed::d3(double t) const {
  if (is_constant()) return 0.0;
  return -amplitude_ * omega_ * omega_ * omega_ * std::cos(omega_ * t + phase_);
}

double SmoothBaseSpeed::min_value() const noexcept {
  return mean_ - std::abs(amplitude_);
}

double SmoothBaseSpeed::max_value() const noexcept {
  return mean_ + std::abs(amplitude_);
}

double SmoothBaseSpeed::lipschitz_bound() const noexcept {
  return std::abs(amplitude_) * omega_;
}

double SmoothBaseSpeed::c3_bound() const noexcept {
  // |A| w (|cos| + w |sin| + w^2 |cos|) peaks where the phase makes
  // (1 + w^2) |cos x| + w |sin x| largest.
  if (is_constant()) return 0.0;
  const double w = omega_;
  return std::abs(amplitude_) * w * std::hypot(1.0 + w * w, w);
}

double SmoothBaseSpeed::holder_constant(double alpha) const {
  if (is_constant()) return 0.0;
  // |sin(w t + p) - sin(w s + p)| <= 2 |sin(w d / 2)| with equality for a
  // suitable midpoint, so the sup reduces to 2 (w/2)^alpha max sin(x)/x^alpha.
  return std::abs(amplitude_) * 2.0 * std::pow(0.5 * omega_, alpha) *
         sine_holder_ratio(alpha);
}

double SmoothBaseSpeed::margin(const SpeedClassParams& cls) const {
  const double lower = min_value() - cls.mu1;
  const double upper = cls.mu2 - max_value();
  const double holder = 1.0 - holder_constant(cls.alpha) / cls.holder_bound;
  return std::min({lower, upper, holder});
}

double sine_holder_ratio(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput("sine_holder_ratio: alpha must lie in (0,1)");
  }
  // The maximiser solves x cos x = alpha sin x on (0, pi/2).
  double lo = 0.0;
  double hi = std::numbers::pi / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::cos(mid) - alpha * std::sin(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double x = 0.5 * (lo + hi);
  return std::sin(x) / std::pow(x, alpha);
}

std::size_t tail_length(std::size_t n) { return (n + 2) / 3; }

}  // namespace reslab
