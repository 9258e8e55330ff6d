#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reslab/io.hpp"

namespace reslab {

/// Square roots lambda_i of the eigenvalues of the multiplication operator.
class EigenvalueSequence {
 public:
  /// Positive, nondecreasing values. Summability of sum lambda_i^{-2} is not
  /// certified for arbitrary input.
  explicit EigenvalueSequence(std::vector<double> lambdas);
  /// lambda_i = lambda0 * ratio^i for i = 0..count-1; summable when ratio > 1.
  static EigenvalueSequence geometric(double lambda0, double ratio,
                                      std::size_t count);

  std::span<const double> values() const noexcept { return lambdas_; }
  std::size_t size() const noexcept { return lambdas_.size(); }
  double operator[](std::size_t i) const { return lambdas_.at(i); }
  bool summable() const noexcept { return summable_; }

 private:
  std::vector<double> lambdas_;
  bool summable_ = false;
};

/// Coefficients a_i of one vector in the eigenbasis.
struct SpectralCoefficients {
  std::vector<double> values;
  /// Optional log|a_i|; when non-empty it replaces `values`, so coefficients
  /// far below the double range (e.g. exp(-2^10)) keep full precision.
  std::vector<double> log_abs;

  static SpectralCoefficients from_log_abs(std::vector<double> logs) {
    SpectralCoefficients c;
    c.log_abs = std::move(logs);
    return c;
  }
  std::size_t size() const { return log_abs.empty() ? values.size() : log_abs.size(); }
  /// log|a_i|, -inf for a zero coefficient.
  double log_magnitude(std::size_t i) const;
};

enum class ScaleKind { sobolev, gevrey, hyper, gevrey_log, hyper_log };

/// Divergent function placed in the denominator of the log-variant weights.
enum class SlowGrowth {
  log,           // log(2 + lambda)
  iterated_log,  // log(2 + log(2 + lambda))
};

/// One weight family. `order` is s (gevrey kinds) or S (hyper kinds);
/// `radius` is r or R and is unused for sobolev and the log kinds.
struct SpectralScale {
  ScaleKind kind = ScaleKind::sobolev;
  double beta = 0.0;
  double order = 1.0;
  double radius = 0.0;
  SlowGrowth growth = SlowGrowth::log;

  static SpectralScale sobolev(double beta);
  static SpectralScale gevrey(double s, double r, double beta);
  static SpectralScale hyper(double S, double R, double beta);
  static SpectralScale gevrey_log(double s, double beta,
                                  SlowGrowth g = SlowGrowth::log);
  static SpectralScale hyper_log(double S, double beta,
                                 SlowGrowth g = SlowGrowth::log);
  /// "sobolev:beta", "gevrey:s,r,beta", "hyper:S,R,beta", "gevrey_log:s,beta",
  /// "hyper_log:S,beta".
  static SpectralScale parse(std::string_view text);

  void validate() const;
  std::string describe() const;
};

/// Natural log of the weight multiplying a_i^2.
double log_weight(const SpectralScale& scale, double lambda);

/// log of a nonnegative quantity, with an explicit marker for log 0.
class LogValue {
 public:
  static LogValue zero() noexcept { return LogValue(); }
  static LogValue of_log(double x);

  bool is_zero() const noexcept { return zero_; }
  /// Throws std::domain_error for the zero marker.
  double log() const;
  std::string str() const;

  /// log(exp(*this) + exp(x)).
  void accumulate(double x);

 private:
  LogValue() = default;
  bool zero_ = true;
  double max_ = 0.0;
  double scaled_sum_ = 0.0;  // sum of exp(x_k - max_)
};

/// log sum_{i <= N} a_i^2 w(lambda_i).
LogValue log_squared_norm_partial(const SpectralCoefficients& coeffs,
                                  const EigenvalueSequence& eig,
                                  const SpectralScale& scale, std::size_t N);

/// All partial sums for N = 0..size-1.
std::vector<LogValue> log_squared_norm_partials(
    const SpectralCoefficients& coeffs, const EigenvalueSequence& eig,
    const SpectralScale& scale);

/// log(sum_k exp(x_k)) for finite inputs; zero marker for an empty range.
LogValue log_sum_exp(std::span<const double> xs);

enum class Trend { convergent_trend, divergent_trend, inconclusive };
std::string to_string(Trend t);

inline constexpr double kDefaultDivergenceThreshold = 50.0;

/// Classifies a sequence of log partial sums (at least 8 finite values).
Trend divergence_probe(std::span<const double> log_partial_sums,
                       double threshold = kDefaultDivergenceThreshold);
/// Convenience overload; a zero marker anywhere yields inconclusive.
Trend divergence_probe(std::span<const LogValue> log_partial_sums,
                       double threshold = kDefaultDivergenceThreshold);

class UnsupportedComparison : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// True iff log_weight(to) - log_weight(from) -> -inf, i.e. the `from`
/// space embeds into the `to` space with a vanishing weight ratio. Decided
/// from the leading term of the weight difference. Throws
/// UnsupportedComparison when two growth exponents are too close to be
/// ordered reliably in floating point.
bool embedding_check(const SpectralScale& from, const SpectralScale& to);

/// "lambda,a" CSV.
void write_coefficients_csv(std::ostream& out, const EigenvalueSequence& eig,
                            const SpectralCoefficients& coeffs);
std::pair<EigenvalueSequence, SpectralCoefficients> read_coefficients_csv(
    std::istream& in);

/// key=value report: scale, N, log partial sum and trend.
io::KeyValueReport norm_report(const SpectralCoefficients& coeffs,
                               const EigenvalueSequence& eig,
                               const SpectralScale& scale,
                               double threshold = kDefaultDivergenceThreshold);

}  // namespace reslab
