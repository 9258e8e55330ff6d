#include <algorithm>
#include <cmath>
#include <random>

#include "reslab/errors.hpp"
#include "reslab/speeds.hpp"

namespace reslab {
namespace {

// Unbiased enough for sampling and identical on every platform, unlike
// std::uniform_int_distribution.
__extension__ typedef unsigned __int128 uint128;

std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<uint128>(rng()) * n) >> 64);
}

class PairScanner {
 public:
  PairScanner(std::span<const double> v, double h, double alpha)
      : v_(v), h_(h), alpha_(alpha) {}

  void visit(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    const double ratio =
        std::abs(v_[j] - v_[i]) / separation_power(j - i);
    ++count_;
    if (ratio > best_ || !have_best_) {
      best_ = ratio;
      bi_ = i;
      bj_ = j;
      have_best_ = true;
    }
  }

  std::size_t best_separation() const { return bj_ - bi_; }

  HolderEstimate result(bool exhaustive) const {
    HolderEstimate est;
    est.alpha = alpha_;
    est.value = best_;
    est.t1 = h_ * static_cast<double>(bi_);
    est.t2 = h_ * static_cast<double>(bj_);
    est.resolution = h_;
    est.pairs_examined = count_;
    est.exhaustive = exhaustive;
    return est;
  }

 private:
  double separation_power(std::size_t d) const {
    return std::pow(h_ * static_cast<double>(d), alpha_);
  }

  std::span<const double> v_;
  double h_;
  double alpha_;
  double best_ = 0.0;
  std::size_t bi_ = 0;
  std::size_t bj_ = 1;
  std::size_t count_ = 0;
  bool have_best_ = false;
};

}  // namespace

std::size_t dyadic_pair_count(std::size_t n) {
  std::size_t count = 0;
  for (std::size_t d = 1; d < n; d *= 2) count += n - d;
  return count;
}

std::size_t default_pair_budget(std::size_t n) {
  return dyadic_pair_count(n) + kRandomPairsPerSample * n;
}

HolderEstimate holder_constant_on_grid(const SampledSpeed& f, double alpha,
                                       std::size_t pair_budget,
                                       std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput("holder_constant_on_grid: alpha must lie in (0,1)");
  }
  const auto v = f.values();
  const std::size_t n = v.size();
  if (pair_budget == 0) pair_budget = default_pair_budget(n);
  if (n > kExactPairLimit && pair_budget < n - 1) {
    throw InvalidInput(
        "holder_constant_on_grid: pair budget below the number of adjacent "
        "pairs");
  }
  const double h = f.step();
  PairScanner scan(v, h, alpha);

  if (n <= kExactPairLimit) {
    // Exhaustive. At a fixed separation the ratio is largest where the
    // difference is, so only one candidate per separation reaches the scanner.
    for (std::size_t d = 1; d < n; ++d) {
      double best = -1.0;
      std::size_t arg = 0;
      for (std::size_t i = 0; i + d < n; ++i) {
        const double diff = std::abs(v[i + d] - v[i]);
        if (diff > best) {
          best = diff;
          arg = i;
        }
      }
      scan.visit(arg, arg + d);
    }
    HolderEstimate est = scan.result(true);
    est.pairs_examined = n * (n - 1) / 2;
    return est;
  }

  const auto scan_row = [&](std::size_t d) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i + d < n; ++i) {
      const double diff = std::abs(v[i + d] - v[i]);
      if (diff > best) {
        best = diff;
        arg = i;
      }
    }
    scan.visit(arg, arg + d);
  };
  for (std::size_t d = 1; d < n; d *= 2) scan_row(d);
  const std::size_t dyadic = dyadic_pair_count(n);

  // Separations are drawn log-uniformly so that short and long scales get
  // comparable attention; oscillatory speeds peak at a few samples.
  std::mt19937_64 rng(seed);
  const double log_span = std::log(static_cast<double>(n - 1));
  std::size_t examined = dyadic;
  for (; examined < pair_budget; ++examined) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto d = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::exp(u * log_span)), 1, n - 1);
    const std::size_t i = draw_index(rng, n - d);
    scan.visit(i, i + d);
  }

  // Whole rows at and next to the best separation found.
  const std::size_t best_d = scan.best_separation();
  for (std::size_t d = best_d > 2 ? best_d - 2 : 1; d <= best_d + 2 && d < n; ++d) {
    scan_row(d);
    examined += n - d;
  }
  HolderEstimate est = scan.result(false);
  est.pairs_examined = examined;
  return est;
}

AdmissibilityReport verify_admissible(const SampledSpeed& f,
                                      const SpeedClassParams& cls,
                                      std::size_t pair_budget,
                                      std::uint64_t seed) {
  cls.validate();
  AdmissibilityReport report;
  report.min_value = f.min_value();
  report.max_value = f.max_value();
  report.hyperbolicity_ok =
      report.min_value >= cls.mu1 && report.max_value <= cls.mu2;
  report.holder = holder_constant_on_grid(f, cls.alpha, pair_budget, seed);
  report.holder_ok = report.holder.value <= cls.holder_bound;
  return report;
}

SumHolderReport sum_holder_probe(std::span<const SampledSpeed> f_seq,
                                 std::span<const SampledSpeed> g_seq,
                                 double alpha, double lipschitz,
                                 const SumHolderOptions& options) {
  if (f_seq.size() != g_seq.size() || f_seq.size() < 3) {
    throw InvalidInput(
        "sum_holder_probe: sequences must have equal length of at least 3");
  }
  SumHolderReport report;
  const std::size_t count = f_seq.size();

  for (std::size_t n = 0; n < count; ++n) {
    const auto& f = f_seq[n];
    const auto& g = g_seq[n];
    if (f.size() != g.size() || f.step() != g.step()) {
      throw InvalidInput("sum_holder_probe: f_n and g_n must share a grid");
    }
    const auto fv = f.values();
    double slope = 0.0;
    for (std::size_t j = 0; j + 1 < fv.size(); ++j) {
      slope = std::max(slope, std::abs(fv[j + 1] - fv[j]) / f.step());
    }
    if (slope > lipschitz * (1.0 + 1e-12)) {
      report.precondition_ok = false;
      report.precondition_message = "f_" + std::to_string(n) +
                                    " exceeds the Lipschitz bound on its grid";
      return report;
    }
  }

  std::vector<double> sup_g(count);
  for (std::size_t n = 0; n < count; ++n) {
    double s = 0.0;
    for (double x : g_seq[n].values()) s = std::max(s, std::abs(x));
    sup_g[n] = s;
    if (n > 0 && sup_g[n] > sup_g[n - 1] + options.tolerance) {
      report.precondition_ok = false;
      report.precondition_message =
          "sup |g_n| increases at n = " + std::to_string(n);
      return report;
    }
  }

  for (std::size_t n = 0; n < count; ++n) {
    const auto& f = f_seq[n];
    const auto& g = g_seq[n];
    const std::size_t budget = options.pair_budget
                                   ? options.pair_budget
                                   : default_pair_budget(f.size());
    std::vector<double> sum(f.size());
    for (std::size_t j = 0; j < sum.size(); ++j) {
      sum[j] = f.values()[j] + g.values()[j];
    }
    const SampledSpeed fg(f.step(), std::move(sum));
    report.holder_sum.push_back(
        holder_constant_on_grid(fg, alpha, budget, options.seed).value);
    report.holder_f.push_back(
        holder_constant_on_grid(f, alpha, budget, options.seed).value);
    report.holder_g.push_back(
        holder_constant_on_grid(g, alpha, budget, options.seed).value);
  }

  const std::size_t tail = tail_length(count);
  const auto tail_max = [&](const std::vector<double>& xs) {
    return *std::max_element(xs.end() - static_cast<std::ptrdiff_t>(tail),
                             xs.end());
  };
  report.limsup_sum = tail_max(report.holder_sum);
  report.limsup_f = tail_max(report.holder_f);
  report.limsup_g = tail_max(report.holder_g);
  report.inequality_ok =
      report.limsup_sum <=
      std::max(report.limsup_f, report.limsup_g) + options.tolerance;
  return report;
}

}  // namespace reslab
