#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "reslab/speeds.hpp"

namespace reslab {

/// u'' + 2 delta lambda^{2 sigma} u' + lambda^2 c(t) u = 0 with u(0) = u0,
/// u'(0) = u1.
struct OscillatorProblem {
  double lambda = 1.0;
  double delta = 0.0;
  double sigma = 0.0;
  std::function<double(double)> speed;
  /// Upper bound for c used for the step ceiling. Ignored when a class is
  /// attached (mu2 is used instead).
  double speed_upper = 0.0;
  /// When set, every speed evaluation must lie in [mu1, mu2].
  std::optional<SpeedClassParams> admissible_class;
  double u0 = 0.0;
  double u1 = 1.0;

  void validate() const;
  double damping_rate() const;
  /// sup c assumed by the integrator.
  double speed_ceiling() const;
};

struct IntegrationOptions {
  double rel_tol = 1e-9;
  /// The state is rescaled by a power of two whenever its norm leaves
  /// [1 / threshold, threshold].
  double renorm_threshold = 1e20;
  std::size_t max_steps = 200'000'000;
};

/// log(|u'|^2 + lambda^2 |u|^2) on a time grid.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> log_energy;
  /// Cumulative log scale factor removed from the stored state at each time.
  std::vector<double> ledger;
};

struct IntegrationResult {
  EnergyTrace trace;
  /// Final state (lambda u, u') divided by 2^exponent.
  double scaled_v = 0.0;
  double scaled_p = 0.0;
  long long exponent = 0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t renormalizations = 0;
};

/// Dormand-Prince 5(4) on (v, p) = (lambda u, u') with dense output at the
/// requested times and power-of-two renormalization. Throws
/// IntegrationFailure on a non-finite state and AdmissibilityViolation when
/// an attached class is left.
IntegrationResult integrate_renormalized(const OscillatorProblem& prob,
                                         std::span<const double> output_times,
                                         const IntegrationOptions& options = {});

/// Same on a uniform grid of `points` times over [0, t_end].
IntegrationResult integrate_renormalized(const OscillatorProblem& prob,
                                         double t_end, std::size_t points,
                                         const IntegrationOptions& options = {});

/// Least-squares slope of log_energy against t over [t_lo, t_hi].
double growth_exponent_fit(const EnergyTrace& trace, double t_lo, double t_hi);

/// Exact log energy of the constant-speed damped problem.
double constant_speed_log_energy(double c, double lambda, double damping,
                                 double u0, double u1, double t);

}  // namespace reslab
