#include "reslab/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "reslab/errors.hpp"
#include "reslab/speeds.hpp"

namespace reslab {

EigenvalueSequence::EigenvalueSequence(std::vector<double> lambdas)
    : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) throw InvalidInput("eigenvalues: empty sequence");
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    if (!(lambdas_[i] > 0.0) || !std::isfinite(lambdas_[i])) {
      throw InvalidInput("eigenvalues: values must be positive and finite");
    }
    if (i > 0 && lambdas_[i] < lambdas_[i - 1]) {
      throw InvalidInput("eigenvalues: sequence must be nondecreasing");
    }
  }
}

EigenvalueSequence EigenvalueSequence::geometric(double lambda0, double ratio,
                                                 std::size_t count) {
  if (!(lambda0 > 0.0) || !(ratio >= 1.0) || count == 0) {
    throw InvalidInput(
        "eigenvalues: geometric sequence needs lambda0 > 0, ratio >= 1, "
        "count > 0");
  }
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = lambda0 * std::pow(ratio, static_cast<double>(i));
  }
  EigenvalueSequence seq(std::move(v));
  seq.summable_ = ratio > 1.0;
  return seq;
}

SpectralScale SpectralScale::sobolev(double beta) {
  SpectralScale s{ScaleKind::sobolev, beta, 1.0, 0.0, SlowGrowth::log};
  s.validate();
  return s;
}

SpectralScale SpectralScale::gevrey(double order, double r, double beta) {
  SpectralScale s{ScaleKind::gevrey, beta, order, r, SlowGrowth::log};
  s.validate();
  return s;
}

SpectralScale SpectralScale::hyper(double order, double R, double beta) {
  SpectralScale s{ScaleKind::hyper, beta, order, R, SlowGrowth::log};
  s.validate();
  return s;
}

SpectralScale SpectralScale::gevrey_log(double order, double beta,
                                        SlowGrowth g) {
  SpectralScale s{ScaleKind::gevrey_log, beta, order, 0.0, g};
  s.validate();
  return s;
}

SpectralScale SpectralScale::hyper_log(double order, double beta,
                                       SlowGrowth g) {
  SpectralScale s{ScaleKind::hyper_log, beta, order, 0.0, g};
  s.validate();
  return s;
}

namespace {

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(io::parse_double(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

}  // namespace

SpectralScale SpectralScale::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("scale: expected kind:parameters, got '" +
                       std::string(text) + "'");
  }
  const auto kind = text.substr(0, colon);
  const auto args = parse_list(text.substr(colon + 1));
  const auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw InvalidInput("scale: '" + std::string(kind) + "' takes " +
                         std::to_string(n) + " parameters");
    }
  };
  if (kind == "sobolev") {
    need(1);
    return sobolev(args[0]);
  }
  if (kind == "gevrey") {
    need(3);
    return gevrey(args[0], args[1], args[2]);
  }
  if (kind == "hyper") {
    need(3);
    return hyper(args[0], args[1], args[2]);
  }
  if (kind == "gevrey_log") {
    need(2);
    return gevrey_log(args[0], args[1]);
  }
  if (kind == "hyper_log") {
    need(2);
    return hyper_log(args[0], args[1]);
  }
  throw InvalidInput("scale: unknown kind '" + std::string(kind) + "'");
}

void SpectralScale::validate() const {
  if (!std::isfinite(beta)) throw InvalidInput("scale: beta must be finite");
  if (kind == ScaleKind::sobolev) return;
  if (!(order > 0.0) || !std::isfinite(order)) {
    throw InvalidInput("scale: order must be positive");
  }
  if ((kind == ScaleKind::gevrey || kind == ScaleKind::hyper) &&
      (!(radius > 0.0) || !std::isfinite(radius))) {
    throw InvalidInput("scale: radius must be positive");
  }
}

std::string SpectralScale::describe() const {
  const auto f = io::format_double;
  switch (kind) {
    case ScaleKind::sobolev:
      return "sobolev:" + f(beta);
    case ScaleKind::gevrey:
      return "gevrey:" + f(order) + "," + f(radius) + "," + f(beta);
    case ScaleKind::hyper:
      return "hyper:" + f(order) + "," + f(radius) + "," + f(beta);
    case ScaleKind::gevrey_log:
      return "gevrey_log:" + f(order) + "," + f(beta);
    case ScaleKind::hyper_log:
      return "hyper_log:" + f(order) + "," + f(beta);
  }
  return {};
}

namespace {

double slow(SlowGrowth g, double lambda) {
  const double l = std::log(2.0 + lambda);
  return g == SlowGrowth::log ? l : std::log(2.0 + l);
}

}  // namespace

double log_weight(const SpectralScale& scale, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidInput("log_weight: lambda must be >= 0");
  double w = 4.0 * scale.beta * std::log1p(lambda);
  switch (scale.kind) {
    case ScaleKind::sobolev:
      break;
    case ScaleKind::gevrey:
      w += 2.0 * scale.radius * std::pow(lambda, 1.0 / scale.order);
      break;
    case ScaleKind::hyper:
      w -= 2.0 * scale.radius * std::pow(lambda, 1.0 / scale.order);
      break;
    case ScaleKind::gevrey_log:
      w += 2.0 * std::pow(lambda, 1.0 / scale.order) / slow(scale.growth, lambda);
      break;
    case ScaleKind::hyper_log:
      w -= 2.0 * std::pow(lambda, 1.0 / scale.order) / slow(scale.growth, lambda);
      break;
  }
  return w;
}

LogValue LogValue::of_log(double x) {
  LogValue v;
  v.accumulate(x);
  return v;
}

double LogValue::log() const {
  if (zero_) throw std::domain_error("log of zero");
  return max_ + std::log(scaled_sum_);
}

std::string LogValue::str() const {
  return zero_ ? std::string("-inf") : io::format_double(log());
}

void LogValue::accumulate(double x) {
  if (std::isinf(x) && x < 0.0) return;
  if (!std::isfinite(x)) throw InvalidInput("log-sum-exp: non-finite term");
  if (zero_) {
    zero_ = false;
    max_ = x;
    scaled_sum_ = 1.0;
  } else if (x <= max_) {
    scaled_sum_ += std::exp(x - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  }
}

LogValue log_sum_exp(std::span<const double> xs) {
  LogValue v = LogValue::zero();
  for (double x : xs) v.accumulate(x);
  return v;
}

double SpectralCoefficients::log_magnitude(std::size_t i) const {
  if (!log_abs.empty()) return log_abs.at(i);
  const double a = values.at(i);
  return a == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(a));
}

namespace {

void check_aligned(const SpectralCoefficients& coeffs,
                   const EigenvalueSequence& eig) {
  if (coeffs.size() != eig.size()) {
    throw InvalidInput("coefficients and eigenvalues differ in length");
  }
  for (double a : coeffs.values) {
    if (!std::isfinite(a)) throw InvalidInput("coefficients must be finite");
  }
  for (double l : coeffs.log_abs) {
    if (std::isnan(l) || l == std::numeric_limits<double>::infinity()) {
      throw InvalidInput("log coefficients must be finite or -inf");
    }
  }
}

double log_term(const SpectralCoefficients& coeffs, std::size_t i, double lambda,
                const SpectralScale& scale) {
  const double la = coeffs.log_magnitude(i);
  if (std::isinf(la)) return la;
  return 2.0 * la + log_weight(scale, lambda);
}

}  // namespace

LogValue log_squared_norm_partial(const SpectralCoefficients& coeffs,
                                  const EigenvalueSequence& eig,
                                  const SpectralScale& scale, std::size_t N) {
  check_aligned(coeffs, eig);
  scale.validate();
  if (N >= eig.size()) {
    throw InvalidInput("log_squared_norm_partial: truncation beyond sequence");
  }
  LogValue v = LogValue::zero();
  for (std::size_t i = 0; i <= N; ++i) {
    v.accumulate(log_term(coeffs, i, eig[i], scale));
  }
  return v;
}

std::vector<LogValue> log_squared_norm_partials(
    const SpectralCoefficients& coeffs, const EigenvalueSequence& eig,
    const SpectralScale& scale) {
  check_aligned(coeffs, eig);
  scale.validate();
  std::vector<LogValue> out;
  out.reserve(eig.size());
  LogValue v = LogValue::zero();
  for (std::size_t i = 0; i < eig.size(); ++i) {
    v.accumulate(log_term(coeffs, i, eig[i], scale));
    out.push_back(v);
  }
  return out;
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::convergent_trend:
      return "convergent_trend";
    case Trend::divergent_trend:
      return "divergent_trend";
    case Trend::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Trend divergence_probe(std::span<const double> xs, double threshold) {
  if (xs.size() < 8) {
    throw InvalidInput("divergence_probe: at least 8 partial sums required");
  }
  double scale = 1.0;
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw InvalidInput("divergence_probe: partial sums must be finite");
    }
    scale = std::max(scale, std::abs(x));
  }
  const double negligible = 1e-15 * scale;
  std::vector<double> d(xs.size() - 1);
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) d[j] = xs[j + 1] - xs[j];
  const std::size_t tail = std::max<std::size_t>(2, tail_length(d.size()));
  const std::span<const double> td(d.data() + d.size() - tail, tail);

  bool divergent = xs.back() > threshold;
  for (std::size_t j = 0; divergent && j < td.size(); ++j) {
    divergent = td[j] > negligible && (j == 0 || td[j] >= td[j - 1] - negligible);
  }
  if (divergent) return Trend::divergent_trend;

  bool convergent = std::abs(td.back()) < 1e-6;
  for (std::size_t j = 1; convergent && j < td.size(); ++j) {
    const double cur = std::abs(td[j]);
    convergent = cur <= negligible || cur < 0.9 * std::abs(td[j - 1]);
  }
  return convergent ? Trend::convergent_trend : Trend::inconclusive;
}

Trend divergence_probe(std::span<const LogValue> sums, double threshold) {
  std::vector<double> xs;
  xs.reserve(sums.size());
  for (const auto& s : sums) {
    if (s.is_zero()) {
      if (sums.size() < 8) break;
      return Trend::inconclusive;
    }
    xs.push_back(s.log());
  }
  return divergence_probe(std::span<const double>(xs), threshold);
}

namespace {

// A term c * lambda^p * (log lambda)^q * (log log lambda)^r of an asymptotic
// expansion of a log weight, keyed by its growth (p, q, r).
using GrowthKey = std::tuple<double, int, int>;

void add_terms(std::map<GrowthKey, double>& terms, const SpectralScale& s,
               double sign) {
  if (s.beta != 0.0) terms[{0.0, 1, 0}] += sign * 4.0 * s.beta;
  const double p = s.kind == ScaleKind::sobolev ? 0.0 : 1.0 / s.order;
  const GrowthKey slow_key = s.growth == SlowGrowth::log
                                 ? GrowthKey{p, -1, 0}
                                 : GrowthKey{p, 0, -1};
  switch (s.kind) {
    case ScaleKind::sobolev:
      break;
    case ScaleKind::gevrey:
      terms[{p, 0, 0}] += sign * 2.0 * s.radius;
      break;
    case ScaleKind::hyper:
      terms[{p, 0, 0}] -= sign * 2.0 * s.radius;
      break;
    case ScaleKind::gevrey_log:
      terms[slow_key] += sign * 2.0;
      break;
    case ScaleKind::hyper_log:
      terms[slow_key] -= sign * 2.0;
      break;
  }
}

}  // namespace

bool embedding_check(const SpectralScale& from, const SpectralScale& to) {
  from.validate();
  to.validate();
  std::map<GrowthKey, double> terms;
  add_terms(terms, to, 1.0);
  add_terms(terms, from, -1.0);

  double previous_p = -1.0;
  for (const auto& [key, coeff] : terms) {
    const double p = std::get<0>(key);
    if (previous_p >= 0.0 && p != previous_p &&
        std::abs(p - previous_p) <= 1e-12 * std::max(1.0, p)) {
      throw UnsupportedComparison(
          "embedding_check: growth exponents " + io::format_double(previous_p) +
          " and " + io::format_double(p) + " cannot be ordered reliably");
    }
    previous_p = p;
  }
  // The map is ordered by growth; scan from the fastest term down.
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (it->second != 0.0) return it->second < 0.0;
  }
  return false;
}

void write_coefficients_csv(std::ostream& out, const EigenvalueSequence& eig,
                            const SpectralCoefficients& coeffs) {
  check_aligned(coeffs, eig);
  io::write_csv_header(out, {"lambda", "a"});
  for (std::size_t i = 0; i < eig.size(); ++i) {
    io::write_csv_row(out, {eig[i], coeffs.log_abs.empty() ? coeffs.values[i]
                                                       : std::exp(coeffs.log_abs[i])});
  }
}

std::pair<EigenvalueSequence, SpectralCoefficients> read_coefficients_csv(
    std::istream& in) {
  const auto rows = io::read_numeric_csv(in, {"lambda", "a"});
  if (rows.empty()) throw InvalidInput("coefficient csv: no rows");
  std::vector<double> lambdas;
  SpectralCoefficients coeffs;
  for (const auto& r : rows) {
    lambdas.push_back(r[0]);
    coeffs.values.push_back(r[1]);
  }
  return {EigenvalueSequence(std::move(lambdas)), std::move(coeffs)};
}

io::KeyValueReport norm_report(const SpectralCoefficients& coeffs,
                               const EigenvalueSequence& eig,
                               const SpectralScale& scale, double threshold) {
  const auto partials = log_squared_norm_partials(coeffs, eig, scale);
  io::KeyValueReport report;
  report.add("scale", scale.describe());
  report.add("N", partials.size() - 1);
  report.add("log_partial_sum", partials.back().str());
  report.add("trend", partials.size() >= 8
                          ? to_string(divergence_probe(
                                std::span<const LogValue>(partials), threshold))
                          : std::string("inconclusive"));
  return report;
}

}  // namespace reslab
