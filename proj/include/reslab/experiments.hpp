#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reslab/activator.hpp"
#include "reslab/gevrey.hpp"
#include "reslab/speeds.hpp"

namespace reslab {

/// t0 = 32 mu2^{(1+alpha)/2} r0 / H; checked against 2 r0 / mu5.
double blowup_time(const SpeedClassParams& cls, double r0);

/// Largest admissible damping coefficient mu5 / 2 in the critical case.
double damping_threshold(const SpeedClassParams& cls);

/// Exponent of the activator growth after damping:
/// mu5 lambda^{1-alpha} - 2 delta lambda^{2 sigma}.
double net_growth_rate(const SpeedClassParams& cls, double lambda);

/// log Psi_i(t) for the critical Gevrey case:
/// -2 log lambda - 2 r0 lambda^{1/s} + rate t - 2 lambda^{1/S} / log(2+lambda).
double log_psi_gevrey(const SpeedClassParams& cls, double r0, double lambda,
                      double t);
/// log Psi_i(t) for critical damping, 2 sigma = 1 - alpha:
/// -2 log lambda - 4 lambda^{1-alpha} / log(2+lambda) + rate t. No threshold
/// check, so supercritical damping can be explored.
double log_psi_damping(const SpeedClassParams& cls, double lambda, double t);

/// Settings shared by both loss experiments.
struct LossConfig {
  SpeedClassParams cls;
  double r0 = 1.0;
  SmoothBaseSpeed base = SmoothBaseSpeed::constant(2.5);
  /// lambda_i = lambda0 * 2^i, i = 0..num_frequencies-1.
  double lambda0 = 64.0;
  std::size_t num_frequencies = 15;
  double t_max = 24.0;
  std::size_t grid_points = 241;
  std::uint64_t seed = kDefaultPairSeed;
  double divergence_threshold = kDefaultDivergenceThreshold;
  /// Times within split_margin * t0 of t0 are not judged.
  double split_margin = 0.2;
  std::size_t pair_budget = 0;
  unsigned threads = 1;

  EigenvalueSequence eigenvalues() const;
  std::vector<double> times() const;
};

/// 2 sigma < 1 - alpha; s = S = 1 / (1 - alpha); t_max >= 2 t0.
struct CriticalGevreyConfig : LossConfig {
  double order() const { return 1.0 / (1.0 - cls.alpha); }
  void validate() const;
};

/// 2 sigma = 1 - alpha and delta < mu5 / 2.
struct CriticalDampingConfig : LossConfig {
  double order() const { return 1.0 / (1.0 - cls.alpha); }
  void validate() const;
};

/// Checks carried out for one frequency with its own activator speed.
struct FrequencyCertificate {
  std::size_t index = 0;
  double lambda = 0.0;
  double epsilon = 0.0;
  AdmissibilityReport admissibility;
  /// Length of the window on which admissibility was sampled.
  double admissibility_window = 0.0;
  double sup_distance = 0.0;
  double residual = 0.0;
  bool residual_ok = false;
  /// min over the grid of log Phi_i - log mu3.
  double activation_margin = 0.0;
  bool activation_ok = false;
  std::string error;
  bool ok() const {
    return error.empty() && admissibility.ok() && residual_ok && activation_ok;
  }
};

enum class Expectation { divergence, decay, none };

struct TimeVerdict {
  double t = 0.0;
  Expectation expected = Expectation::none;
  Trend trend = Trend::inconclusive;
  /// log Psi at the largest frequency.
  double last_log_psi = 0.0;
  /// log of the product-series partial sum over all frequencies.
  double log_partial_sum = 0.0;
  bool ok = true;
};

struct LossReport {
  std::string suite;
  double t0 = 0.0;
  double growth_threshold = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> times;
  std::vector<double> lambdas;
  /// [frequency][time]
  std::vector<std::vector<double>> log_phi;
  std::vector<std::vector<double>> log_psi;
  std::vector<FrequencyCertificate> frequencies;
  Trend data_trend = Trend::inconclusive;
  bool data_ok = false;
  std::vector<TimeVerdict> verdicts;

  bool activation_ok() const;
  bool loss_ok() const;
  bool ok() const;

  double log_term(std::size_t i, std::size_t j) const {
    return log_phi[i][j] + log_psi[i][j];
  }
  void write_csv(std::ostream& out) const;
  std::string certificates() const;
  /// report.csv and certificates.txt under dir.
  void write(const std::filesystem::path& dir) const;
};

LossReport run_gevrey_critical(const CriticalGevreyConfig& cfg);
LossReport run_damping_critical(const CriticalDampingConfig& cfg);

/// Frequencies lambda_i for i = first_index, first_index + 1, ...
struct IndexedEigenvalues {
  std::size_t first_index = 0;
  EigenvalueSequence seq;

  double lambda(std::size_t i) const;
  std::size_t last_index() const { return first_index + seq.size() - 1; }
};

/// A speed tested for membership in C_k, with the cheapest energy source
/// for each frequency.
class CkSpeed {
 public:
  static CkSpeed constant(double c);
  static CkSpeed activator(ActivatorSpeed s);
  static CkSpeed general(std::function<double(double)> c, std::string label);

  /// log E_lambda at the given times for data (0, 1).
  std::vector<double> log_energy(double lambda, const SpeedClassParams& cls,
                                 std::span<const double> times) const;
  /// Frequency whose row is evaluated first.
  std::optional<double> priority_lambda() const;
  std::string describe() const;

 private:
  CkSpeed() = default;

  std::optional<double> constant_;
  std::optional<ActivatorSpeed> activator_;
  std::function<double(double)> general_;
  std::string label_;
};

struct Violation {
  double t = 0.0;
  std::size_t i = 0;
  double log_energy = 0.0;
  double log_bound = 0.0;
};

struct NonActivatorResult {
  bool member = false;
  double witness_t = std::numeric_limits<double>::quiet_NaN();
  std::size_t k = 0;
  std::size_t imax = 0;
  /// First violation that eliminated each rejected grid time.
  std::vector<Violation> violations;
  std::size_t rows_evaluated = 0;
};

/// Whether some grid t in [0, k] satisfies log E_i(t) <= log(mu3 - 1/k) +
/// rate_i t for every k <= i <= imax. Rows are evaluated lazily, the
/// priority frequency first, and stop once every grid time is rejected.
NonActivatorResult nonactivator_test(const CkSpeed& c, std::size_t k,
                                     const IndexedEigenvalues& eig,
                                     std::size_t imax,
                                     const SpeedClassParams& cls,
                                     std::span<const double> times);

/// Grid on [0, k] with `points` nodes.
std::vector<double> ck_grid(std::size_t k, std::size_t points);

struct EmptyInteriorConfig {
  SmoothBaseSpeed base = SmoothBaseSpeed::constant(2.5);
  double eps0 = 0.5;
  std::size_t k0 = 40;
  SpeedClassParams cls;
  /// Candidates use lambda_n = lambda0 * 2^n, n = first_n..max_n.
  double lambda0 = 1.0;
  std::size_t first_n = 1;
  std::size_t max_n = 20;
  std::size_t grid_points = 401;
  std::uint64_t seed = kDefaultPairSeed;
  std::size_t pair_budget = 0;

  void validate() const;
};

struct EmptyInteriorCandidate {
  std::size_t n = 0;
  double lambda = 0.0;
  double epsilon = 0.0;
  double sup_distance = 0.0;
  bool distance_ok = false;
  AdmissibilityReport admissibility;
  NonActivatorResult nonactivator;
  bool escapes = false;  // member == false through frequency lambda_n
  std::string reason;
  bool ok() const { return distance_ok && admissibility.ok() && escapes; }
};

struct EmptyInteriorResult {
  bool found = false;
  std::size_t n_found = 0;
  std::vector<EmptyInteriorCandidate> candidates;
  std::string certificates() const;
};

/// Searches n upward for c_n in the eps0-ball around the base, admissible,
/// and outside C_{k0}. The C_{k0} rows are indexed so that row k0 + n
/// carries lambda_n.
EmptyInteriorResult empty_interior_probe(const EmptyInteriorConfig& cfg);

/// Sampling window used for per-frequency admissibility checks: at most
/// 2^17 samples at the resolving step, and never beyond t_end.
double admissibility_window(double mu2, double lambda, double t_end);

}  // namespace reslab
