#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reslab {

/// Admissibility class PS(mu1, mu2, alpha, H) together with the damping pair
/// (delta, sigma) of u'' + 2 delta lambda^{2 sigma} u' + lambda^2 c(t) u = 0.
struct SpeedClassParams {
  double mu1 = 1.0;
  double mu2 = 4.0;
  double alpha = 0.5;
  double holder_bound = 8.0;
  double delta = 0.0;
  double sigma = 0.0;

  /// Throws InvalidInput unless 0 < mu1 < mu2, alpha in (0,1), H > 0,
  /// delta >= 0 and 0 <= sigma < 1/2.
  void validate() const;
};

/// Uniformly sampled speed c_j = c(j h), j = 0..N, starting at t = 0.
class SampledSpeed {
 public:
  SampledSpeed(double step, std::vector<double> values);

  /// Samples f on [0, t_end] with the largest uniform step not above max_step.
  static SampledSpeed from_function(const std::function<double(double)>& f,
                                    double t_end, double max_step);

  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double time(std::size_t j) const noexcept {
    return step_ * static_cast<double>(j);
  }
  double t_end() const noexcept { return time(values_.size() - 1); }
  double min_value() const;
  double max_value() const;

  /// Piecewise-linear interpolation; constant extension beyond the end.
  double operator()(double t) const;

 private:
  double step_;
  std::vector<double> values_;
};

/// C^3 base speed c0 with analytic derivatives: either a constant or
/// mean + amplitude * sin(omega t + phase).
class SmoothBaseSpeed {
 public:
  enum class Form { constant, sinusoidal };

  static SmoothBaseSpeed constant(double value);
  static SmoothBaseSpeed sinusoidal(double mean, double amplitude,
                                    double omega, double phase);
  /// Parses "const:V" or "sin:m,A,omega,phi".
  static SmoothBaseSpeed parse(std::string_view text);

  Form form() const noexcept { return form_; }
  bool is_constant() const noexcept { return form_ == Form::constant; }
  double mean() const noexcept { return mean_; }
  double amplitude() const noexcept { return amplitude_; }
  double omega() const noexcept { return omega_; }
  double phase() const noexcept { return phase_; }
  std::string describe() const;

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;

  double min_value() const noexcept;
  double max_value() const noexcept;
  /// L0 = sup |c0'|.
  double lipschitz_bound() const noexcept;
  /// sup (|c0'| + |c0''| + |c0'''|).
  double c3_bound() const noexcept;
  /// Exact Hold_alpha(c0) over [0, inf)^2.
  double holder_constant(double alpha) const;
  /// Largest eps1 with mu1 + eps1 <= c0 <= mu2 - eps1 and
  /// Hold_alpha(c0) <= (1 - eps1) H. Non-positive when a margin fails.
  double margin(const SpeedClassParams& cls) const;
  bool satisfies_margins(const SpeedClassParams& cls) const {
    return margin(cls) > 0.0;
  }

 private:
  SmoothBaseSpeed(Form form, double mean, double amplitude, double omega,
                  double phase);

  Form form_;
  double mean_;
  double amplitude_;
  double omega_;
  double phase_;
};

/// max over x > 0 of sin(x) / x^alpha, for alpha in (0, 1).
double sine_holder_ratio(double alpha);

struct HolderEstimate {
  double alpha = 0.0;
  double value = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  /// Grid step the estimate was computed on.
  double resolution = 0.0;
  std::size_t pairs_examined = 0;
  /// True when every pair of the grid was examined.
  bool exhaustive = false;
};

inline constexpr std::size_t kExactPairLimit = 4096;
inline constexpr std::uint64_t kDefaultPairSeed = 0x5eed5eedULL;

/// Number of pairs at separations h, 2h, 4h, ... on an n-point grid.
std::size_t dyadic_pair_count(std::size_t n);
inline constexpr std::size_t kRandomPairsPerSample = 32;
/// Dyadic pairs plus 32 n pseudorandom pairs.
std::size_t default_pair_budget(std::size_t n);

/// Grid lower bound for Hold_alpha(f): exhaustive for n <= 4096 samples,
/// otherwise all dyadic separations plus seeded pseudorandom pairs (uniform
/// start, log-uniform separation) up to pair_budget in total, followed by
/// full rows at the best separation and its four neighbours. A zero budget
/// selects default_pair_budget.
HolderEstimate holder_constant_on_grid(const SampledSpeed& f, double alpha,
                                       std::size_t pair_budget,
                                       std::uint64_t seed = kDefaultPairSeed);

struct AdmissibilityReport {
  bool hyperbolicity_ok = false;
  bool holder_ok = false;
  double min_value = 0.0;
  double max_value = 0.0;
  HolderEstimate holder;
  bool ok() const noexcept { return hyperbolicity_ok && holder_ok; }
};

AdmissibilityReport verify_admissible(const SampledSpeed& f,
                                      const SpeedClassParams& cls,
                                      std::size_t pair_budget,
                                      std::uint64_t seed = kDefaultPairSeed);

struct SumHolderOptions {
  double tolerance = 1e-2;
  /// Zero selects default_pair_budget for each grid.
  std::size_t pair_budget = 0;
  std::uint64_t seed = kDefaultPairSeed;
};

struct SumHolderReport {
  bool precondition_ok = true;
  std::string precondition_message;
  std::vector<double> holder_sum;
  std::vector<double> holder_f;
  std::vector<double> holder_g;
  double limsup_sum = 0.0;
  double limsup_f = 0.0;
  double limsup_g = 0.0;
  bool inequality_ok = false;
};

/// Finite-n check of limsup Hold(f_n + g_n) <= max(limsup Hold f_n,
/// limsup Hold g_n), with limsup read as the max over the last third of the
/// sequence. f_n must be L-Lipschitz on its grid and sup |g_n| must not grow;
/// failures are reported, not thrown.
SumHolderReport sum_holder_probe(std::span<const SampledSpeed> f_seq,
                                 std::span<const SampledSpeed> g_seq,
                                 double alpha, double lipschitz,
                                 const SumHolderOptions& options = {});

/// Number of trailing entries treated as the tail of a length-n sequence.
std::size_t tail_length(std::size_t n);

}  // namespace reslab
