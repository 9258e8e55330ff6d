#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "reslab/errors.hpp"
#include "reslab/gevrey.hpp"

using namespace reslab;

namespace {

EigenvalueSequence powers_of_two(std::size_t count) {
  return EigenvalueSequence::geometric(1.0, 2.0, count);
}

// a_i = lambda_i^{-1} exp(-r lambda_i^{1/s}), kept as logs: exp(-2^10) underflows.
SpectralCoefficients gevrey_data(const EigenvalueSequence& eig, double s, double r) {
  std::vector<double> logs;
  for (double l : eig.values()) logs.push_back(-r * std::pow(l, 1 / s) - std::log(l));
  return SpectralCoefficients::from_log_abs(std::move(logs));
}

std::vector<double> cumulative_logs(const std::vector<double>& terms) {
  std::vector<double> out;
  double s = 0.0;
  for (double t : terms) out.push_back(std::log(s += t));
  return out;
}

}  // namespace

TEST_CASE("weights") {
  CHECK(log_weight(SpectralScale::sobolev(0.0), 123.0) == 0.0);
  CHECK(log_weight(SpectralScale::sobolev(0.5), 1.0) == doctest::Approx(2 * std::log(2.0)));
  CHECK(log_weight(SpectralScale::gevrey(2, 1, 0), 4.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(log_weight(SpectralScale::hyper_log(2, 0), 4.0) == doctest::Approx(-4 / std::log(6.0)).epsilon(1e-15));
  CHECK(log_weight(SpectralScale::hyper_log(2, 0), 4.0) == doctest::Approx(-2.23244).epsilon(1e-5));
  CHECK(log_weight(SpectralScale::hyper(3, 0.5, 1), 8.0) ==
        doctest::Approx(4 * std::log(9.0) - 2 * 0.5 * 2).epsilon(1e-14));
  CHECK(log_weight(SpectralScale::gevrey_log(2, 0, SlowGrowth::iterated_log), 9.0) ==
        doctest::Approx(2 * 3 / std::log(2 + std::log(11.0))).epsilon(1e-14));
}

TEST_CASE("weights are monotone in their parameters") {
  for (double l : {0.5, 3.0, 1e4}) {
    CHECK(log_weight(SpectralScale::gevrey(2, 1.0, 0), l) < log_weight(SpectralScale::gevrey(2, 1.5, 0), l));
    CHECK(log_weight(SpectralScale::sobolev(0.1), l) < log_weight(SpectralScale::sobolev(0.7), l));
    CHECK(log_weight(SpectralScale::hyper(2, 1.5, 0), l) < log_weight(SpectralScale::hyper(2, 1.0, 0), l));
    CHECK(log_weight(SpectralScale::gevrey_log(2, -1), l) < log_weight(SpectralScale::gevrey_log(2, 1), l));
  }
}

TEST_CASE("scale parsing and validation") {
  const auto g = SpectralScale::parse("gevrey:2,1.5,0.25");
  CHECK(g.kind == ScaleKind::gevrey);
  CHECK(g.order == 2.0);
  CHECK(g.radius == 1.5);
  CHECK(g.beta == 0.25);
  CHECK(SpectralScale::parse(g.describe()).radius == 1.5);
  CHECK(SpectralScale::parse("hyper_log:3,-1").kind == ScaleKind::hyper_log);
  CHECK_THROWS_AS(SpectralScale::parse("gevrey:0,1,0"), InvalidInput);
  CHECK_THROWS_AS(SpectralScale::parse("gevrey:2,-1,0"), InvalidInput);
  CHECK_THROWS_AS(SpectralScale::parse("besov:1"), InvalidInput);
}

TEST_CASE("eigenvalue sequences") {
  CHECK(powers_of_two(5).summable());
  CHECK(powers_of_two(5)[4] == 16.0);
  CHECK_FALSE(EigenvalueSequence::geometric(1.0, 1.0, 5).summable());
  CHECK_THROWS_AS(EigenvalueSequence({1.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(EigenvalueSequence({0.0, 1.0}), InvalidInput);
}

TEST_CASE("geometric data in its own Gevrey scale") {
  const auto eig = powers_of_two(21);
  const auto a = gevrey_data(eig, 2, 1);
  const auto v = log_squared_norm_partial(a, eig, SpectralScale::gevrey(2, 1, 0), 20);
  // sum_{i<=20} 4^{-i} = (4/3)(1 - 4^{-21})
  CHECK(std::abs(v.log() - std::log(4.0 / 3.0)) < 1e-9);
  // Each log term is a difference of numbers near 2^11, so a few ulps there.
  CHECK(std::abs(v.log() - std::log(4.0 / 3.0 * (1 - std::pow(4.0, -21)))) < 2e-12);

  const auto partials = log_squared_norm_partials(a, eig, SpectralScale::gevrey(2, 1, 0));
  CHECK(divergence_probe(partials) == Trend::convergent_trend);
}

TEST_CASE("larger radius makes the same data diverge") {
  const auto eig = powers_of_two(21);
  const auto a = gevrey_data(eig, 2, 1);
  const auto v = log_squared_norm_partial(a, eig, SpectralScale::gevrey(2, 1.1, 0), 20);
  // Terms are 4^{-i} exp(0.2 * 2^{i/2}); add them up directly in long double.
  long double direct = 0;
  for (int i = 0; i <= 20; ++i) direct += std::pow(4.0L, -i) * std::exp(0.2L * std::pow(2.0L, i / 2.0L));
  CHECK(v.log() == doctest::Approx(static_cast<double>(std::log(direct))).epsilon(1e-12));
  CHECK(v.log() > 175.0);
  const auto partials = log_squared_norm_partials(a, eig, SpectralScale::gevrey(2, 1.1, 0));
  CHECK(divergence_probe(partials) == Trend::divergent_trend);
}

TEST_CASE("single term and zero data") {
  const EigenvalueSequence eig({1.0, 2.0, 3.0});
  const SpectralCoefficients one{{1.0, 0.0, 0.0}};
  CHECK(log_squared_norm_partial(one, eig, SpectralScale::sobolev(0.5), 2).log() ==
        doctest::Approx(2 * std::log(2.0)).epsilon(1e-15));
  const SpectralCoefficients zero{{0.0, 0.0, 0.0}};
  const auto z = log_squared_norm_partial(zero, eig, SpectralScale::sobolev(0.5), 2);
  CHECK(z.is_zero());
  CHECK(z.str() == "-inf");
  CHECK_THROWS_AS(static_cast<void>(z.log()), std::domain_error);
  CHECK_THROWS_AS(log_squared_norm_partial(one, eig, SpectralScale::sobolev(0.5), 3), InvalidInput);
}

TEST_CASE("log-sum-exp agrees with direct summation") {
  const std::vector<double> xs{-3.2, 0.1, 4.5, 7.0, -20.0, 2.2, 11.3, 0.0, -1.0, 5.5,
                               3.3, 9.9, -7.7, 6.1, 1.4, 8.8, -0.4, 2.9, 10.1, 4.0};
  double direct = 0.0;
  for (double x : xs) direct += std::exp(x);
  CHECK(log_sum_exp(xs).log() == doctest::Approx(std::log(direct)).epsilon(1e-12));
  CHECK(log_sum_exp(std::span<const double>{}).is_zero());

  // Terms far beyond the double range.
  const std::vector<double> big{1000.0, 1000.0};
  CHECK(log_sum_exp(big).log() == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));

  auto acc = LogValue::zero();
  for (double x : xs) acc.accumulate(x);
  CHECK(acc.log() == doctest::Approx(std::log(direct)).epsilon(1e-12));
}

TEST_CASE("divergence probe classification") {
  std::vector<double> geometric;
  for (int i = 0; i < 20; ++i) geometric.push_back(std::pow(4.0, -i));
  CHECK(divergence_probe(cumulative_logs(geometric)) == Trend::convergent_trend);

  std::vector<double> doubling{10.0};
  for (int k = 0; k < 9; ++k) doubling.push_back(doubling.back() + 20.0 * std::pow(2.0, k));
  CHECK(divergence_probe(doubling) == Trend::divergent_trend);

  std::vector<double> alternating{1.0};
  for (int k = 0; k < 11; ++k) alternating.push_back(alternating.back() + (k % 2 ? -0.5 : 1.0));
  CHECK(divergence_probe(alternating) == Trend::inconclusive);

  // Growing but still below the threshold.
  std::vector<double> small{0.0};
  for (int k = 0; k < 9; ++k) small.push_back(small.back() + 0.1 * (k + 1));
  CHECK(divergence_probe(small) == Trend::inconclusive);
  CHECK(divergence_probe(small, 1.0) == Trend::divergent_trend);

  CHECK_THROWS_AS(divergence_probe(std::vector<double>{1, 2, 3}), InvalidInput);
  CHECK(to_string(Trend::divergent_trend) == "divergent_trend");
}

TEST_CASE("embedding truth table") {
  struct Row {
    SpectralScale from, to;
    bool expected;
  };
  for (auto g : {SlowGrowth::log, SlowGrowth::iterated_log}) {
    const std::vector<Row> rows{
        {SpectralScale::gevrey_log(2, 0, g), SpectralScale::gevrey(2.5, 3, 7), true},
        {SpectralScale::gevrey_log(2, 0, g), SpectralScale::gevrey(2.5, 0.01, -4), true},
        {SpectralScale::gevrey_log(2, 0, g), SpectralScale::gevrey(2, 0.5, 0), false},
        {SpectralScale::gevrey(2, 0.5, 0), SpectralScale::gevrey_log(2, 0, g), true},
        {SpectralScale::gevrey_log(2, 0, g), SpectralScale::sobolev(10), true},
        {SpectralScale::hyper(2.5, 0.1, -3), SpectralScale::hyper_log(2, 0, g), true},
        {SpectralScale::hyper(2.5, 5, 4), SpectralScale::hyper_log(2, 0, g), true},
        {SpectralScale::hyper_log(2, 0, g), SpectralScale::hyper(2, 1, 0), true},
        {SpectralScale::hyper_log(2, 0, g), SpectralScale::hyper(2.5, 1, 0), false},
        {SpectralScale::sobolev(3), SpectralScale::hyper_log(2, 0, g), true},
        {SpectralScale::gevrey(2, 1, 0), SpectralScale::gevrey(2, 2, 0), false},
        {SpectralScale::gevrey(2, 2, 0), SpectralScale::gevrey(2, 1, 0), true},
        {SpectralScale::sobolev(1), SpectralScale::sobolev(0), true},
        {SpectralScale::sobolev(0), SpectralScale::sobolev(1), false},
    };
    for (const auto& r : rows) {
      CAPTURE(r.from.describe());
      CAPTURE(r.to.describe());
      CHECK(embedding_check(r.from, r.to) == r.expected);
      // Numerical sanity of the symbolic verdict: the weight difference keeps
      // falling (true) or does not go to -inf (false) far out.
      const double d1 = log_weight(r.to, 1e30) - log_weight(r.from, 1e30);
      const double d2 = log_weight(r.to, 1e60) - log_weight(r.from, 1e60);
      if (r.expected) {
        CHECK(d2 < d1);
        CHECK(d2 < 0.0);
      } else {
        CHECK(d2 >= d1);
      }
    }
  }
  CHECK_THROWS_AS(embedding_check(SpectralScale::gevrey(2, 1, 0),
                                  SpectralScale::gevrey(2 + 1e-13, 1, 0)),
                  UnsupportedComparison);
}

TEST_CASE("coefficient CSV round trip and report") {
  const auto eig = powers_of_two(12);
  const auto a = gevrey_data(eig, 2, 1);
  std::stringstream s;
  write_coefficients_csv(s, eig, a);
  const auto [eig2, a2] = read_coefficients_csv(s);
  REQUIRE(eig2.size() == eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) {
    CHECK(eig2[i] == eig[i]);
    CHECK(a2.log_magnitude(i) == doctest::Approx(a.log_magnitude(i)).epsilon(1e-15));
  }
  // Linear and log storage give the same norm.
  const auto v1 = log_squared_norm_partial(a, eig, SpectralScale::sobolev(1), 11);
  const auto v2 = log_squared_norm_partial(a2, eig, SpectralScale::sobolev(1), 11);
  CHECK(v1.log() == doctest::Approx(v2.log()).epsilon(1e-14));
  const auto rep = norm_report(a, eig, SpectralScale::gevrey(2, 1, 0)).str();
  CHECK(rep.find("trend=convergent_trend") != std::string::npos);
  CHECK(rep.find("N=11") != std::string::npos);

  std::stringstream bad("lambda,a\n2,1\n1,1\n");
  CHECK_THROWS_AS(read_coefficients_csv(bad), InvalidInput);
}
