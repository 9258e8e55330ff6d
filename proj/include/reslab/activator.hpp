#pragma once

#include <memory>
#include <span>
#include <vector>

#include "reslab/speeds.hpp"

namespace reslab {

/// Frequency lambda, perturbation amplitude epsilon and damping pair.
struct ActivatorParams {
  double lambda = 1.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double sigma = 0.0;

  /// lambda > 0, epsilon >= 0, delta >= 0, 0 <= sigma < 1/2.
  void validate() const;
  /// delta * lambda^{2 sigma}.
  double damping_rate() const;
};

struct DerivedConstants {
  double mu3 = 0.0;
  double mu4 = 0.0;
  double mu5 = 0.0;
  /// mu5 through the closed expression H / (16 mu2^{(1+alpha)/2}).
  double mu5_direct = 0.0;
};

DerivedConstants derived_constants(const SpeedClassParams& cls);

/// epsilon_n = H / (4 mu2^{alpha/2}) * lambda^{-alpha}.
double epsilon_for_frequency(const SpeedClassParams& cls, double lambda);

/// Activator parameters for frequency lambda with the rescaled amplitude and
/// the class damping pair.
ActivatorParams rescaled_params(const SpeedClassParams& cls, double lambda);

/// Largest sampling step resolving a speed that oscillates at frequency
/// lambda: 2 pi / (32 lambda sqrt(mu2)).
double speed_grid_step(double mu2, double lambda);

/// Closed-form solution w = sin(a) e^b in log-magnitude form.
struct ClosedFormState {
  double sin_a = 0.0;
  double cos_a = 1.0;
  double b = 0.0;
  double a_rate = 0.0;  // a' = lambda c0^{1/2}
  double b_rate = 0.0;  // b'

  /// w and w'; throws InvalidInput when b > 500.
  double w() const;
  double dw() const;
};

namespace detail {
class PhaseTable;
}

/// Increments of the phase and exponent around a fixed time t0, computed
/// without forming a(t0 + tau) or b(t0 + tau) themselves.
class LocalFrame {
 public:
  double t0() const noexcept { return t0_; }
  double sin_a0() const noexcept { return sin_a0_; }
  double cos_a0() const noexcept { return cos_a0_; }
  double delta_phase(double tau) const;
  double delta_exponent(double tau) const;
  /// w(t0 + tau) e^{-b(t0)} - sin a(t0).
  double scaled_w_increment(double tau) const;

 private:
  friend class ActivatorSpeed;
  LocalFrame(const SmoothBaseSpeed& base, const ActivatorParams& p, double t0,
             double a0);

  SmoothBaseSpeed base_;
  ActivatorParams params_;
  double t0_;
  double sin_a0_;
  double cos_a0_;
};

/// gamma(eps, lambda, t): the base speed modified so that
/// sin(a) e^b solves the damped spectral equation at frequency lambda.
/// Immutable; for non-constant bases the phase and exponent integrals are
/// tabulated on [0, t_max] at construction.
class ActivatorSpeed {
 public:
  ActivatorSpeed(SmoothBaseSpeed base, ActivatorParams params, double t_max);

  const SmoothBaseSpeed& base() const noexcept { return base_; }
  const ActivatorParams& params() const noexcept { return params_; }
  double t_max() const noexcept { return t_max_; }

  double phase(double t) const;
  double phase_rate(double t) const;
  double exponent(double t) const;
  double exponent_rate(double t) const;

  double operator()(double t) const;
  /// c0 and the lambda^{-2} corrections: the equi-Lipschitz part.
  double smooth_part(double t) const;
  /// The three terms carrying sin(a): the part that tends to 0 uniformly.
  double oscillatory_part(double t) const;

  ClosedFormState solution(double t) const;
  /// log(|w_n'|^2 + lambda^2 |w_n|^2) for w_n = w / (lambda c0(0)^{1/2}).
  double log_energy(double t) const;

  LocalFrame local(double t0) const;

  /// Samples gamma on [0, t_end] with step at most max_step.
  SampledSpeed sample(double t_end, double max_step) const;

 private:
  void check_time(double t) const;

  SmoothBaseSpeed base_;
  ActivatorParams params_;
  double t_max_;
  std::shared_ptr<const detail::PhaseTable> table_;
};

/// a(lambda, t) = lambda * int_0^t c0^{1/2}; closed form for constant
/// bases, adaptive composite Gauss-Legendre otherwise.
double phase(const SmoothBaseSpeed& base, double lambda, double t,
             double rel_tol = 1e-12);

/// b(eps, lambda, t).
double exponent_b(const SmoothBaseSpeed& base, const ActivatorParams& p,
                  double t);

/// Lower bound for b(eps, lambda, t) valid when |c0'| <= L0 and c0 takes
/// values in [mu1, mu2].
double b_lower_bound(const SpeedClassParams& cls, double L0,
                     const ActivatorParams& p, double t);

double activator_speed(const SmoothBaseSpeed& base, const ActivatorParams& p,
                       double t);

ClosedFormState activator_solution(const SmoothBaseSpeed& base,
                                   const ActivatorParams& p, double t);

double log_energy_closed_form(const SmoothBaseSpeed& base,
                              const ActivatorParams& p, double t);

struct ResidualReport {
  double max_residual = 0.0;
  double worst_time = 0.0;
  double fd_step = 0.0;
};

/// max over the grid of |w'' + 2 delta lambda^{2 sigma} w' + lambda^2 gamma w|
/// / (lambda^2 max(|w|, e^b / lambda)), with w'' from the 6th-order central
/// difference at step min(1e-4 / lambda, h_grid / 8).
ResidualReport closed_form_residual(const ActivatorSpeed& speed,
                                    std::span<const double> grid);
ResidualReport closed_form_residual(const SmoothBaseSpeed& base,
                                    const ActivatorParams& p,
                                    std::span<const double> grid);

/// max over the grid of |a'' + 2 a' (b' + delta lambda^{2 sigma}) -
/// eps lambda^2 sin^2 a| / (|a''| + |2 a' b'| + |eps lambda^2 sin^2 a|), with a'' and b'
/// differentiated numerically from the evaluated phase rate and exponent.
double ansatz_residual(const ActivatorSpeed& speed,
                       std::span<const double> grid);

/// int_0^t cos(2 a(lambda, s)) ds by oscillation-resolving quadrature.
double cos_phase_integral(const SmoothBaseSpeed& base, double lambda,
                          double t);
/// 1 / (2 mu1^{1/2} lambda) + L0 t / (4 mu1^{3/2} lambda).
double cos_phase_integral_bound(const SpeedClassParams& cls, double L0,
                                double lambda, double t);

/// Uniform time grid with `points` nodes on [0, t_end].
std::vector<double> uniform_grid(double t_end, std::size_t points);

}  // namespace reslab
