#include <cmath>

#include "doctest.h"
#include "reslab/activator.hpp"
#include "reslab/errors.hpp"
#include "reslab/oscillator.hpp"
#include "reslab/parallel.hpp"

using namespace reslab;

namespace {

OscillatorProblem constant_problem(double c, double lambda, double delta = 0.0,
                                   double sigma = 0.0) {
  OscillatorProblem p;
  p.lambda = lambda;
  p.delta = delta;
  p.sigma = sigma;
  p.speed = [c](double) { return c; };
  p.speed_upper = c;
  return p;
}

OscillatorProblem activator_problem(const ActivatorSpeed& sp) {
  OscillatorProblem p;
  p.lambda = sp.params().lambda;
  p.delta = sp.params().delta;
  p.sigma = sp.params().sigma;
  p.speed = [&sp](double t) { return sp(t); };
  p.admissible_class = SpeedClassParams{};
  // Activator data: w(0) = 0, w'(0) = lambda c0(0)^{1/2}, scaled to (0, 1).
  return p;
}

}  // namespace

TEST_CASE("unit speed conserves energy") {
  const auto r = integrate_renormalized(constant_problem(1.0, 32.0), 10.0, 1001);
  for (double v : r.trace.log_energy) CHECK(std::abs(v) < 1e-6);
  CHECK(std::abs(growth_exponent_fit(r.trace, 0.0, 10.0)) < 1e-3);
}

TEST_CASE("speed four oscillates between a quarter and one") {
  const double lambda = 32.0;
  const auto r = integrate_renormalized(constant_problem(4.0, lambda), 10.0, 1001);
  for (std::size_t j = 0; j < r.trace.times.size(); ++j) {
    const double t = r.trace.times[j];
    const double e = std::pow(std::cos(2 * lambda * t), 2) + 0.25 * std::pow(std::sin(2 * lambda * t), 2);
    CHECK(r.trace.log_energy[j] == doctest::Approx(std::log(e)).epsilon(1e-6));
    CHECK(r.trace.log_energy[j] >= std::log(0.25) - 1e-6);
    CHECK(r.trace.log_energy[j] <= 1e-6);
  }
}

TEST_CASE("constant speeds keep the energy between 1 and 1/c") {
  // u = sin(l c^{1/2} t) / (l c^{1/2}) gives E = cos^2 + sin^2 / c.
  for (double c : {0.6, 1.3, 2.5, 3.9}) {
    const auto r = integrate_renormalized(constant_problem(c, 50.0), 5.0, 501);
    double lo = 1e300, hi = -1e300;
    for (double v : r.trace.log_energy) {
      CHECK(v >= std::log(std::min(1.0, 1 / c)) - 1e-6);
      CHECK(v <= std::log(std::max(1.0, 1 / c)) + 1e-6);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi - lo > 0.9 * std::abs(std::log(c)));
  }
}

TEST_CASE("damped constant speed against the exact solution") {
  // Under-, critically and over-damped regimes.
  for (const auto& [c, lambda, delta] :
       {std::tuple{2.0, 16.0, 0.1}, std::tuple{1.0, 4.0, 1.0}, std::tuple{1.0, 4.0, 3.0}}) {
    const auto prob = constant_problem(c, lambda, delta, 0.25);
    const auto r = integrate_renormalized(prob, 3.0, 301);
    const double d = prob.damping_rate();
    for (std::size_t j = 0; j < r.trace.times.size(); ++j) {
      const double t = r.trace.times[j];
      // Direct evaluation of the exact solution.
      double u, du;
      const double disc = d * d - lambda * lambda * c;
      if (disc < 0) {
        const double w = std::sqrt(-disc);
        u = std::exp(-d * t) * std::sin(w * t) / w;
        du = std::exp(-d * t) * (std::cos(w * t) - d * std::sin(w * t) / w);
      } else if (disc == 0) {
        u = t * std::exp(-d * t);
        du = (1 - d * t) * std::exp(-d * t);
      } else {
        const double s = std::sqrt(disc);
        u = (std::exp((-d + s) * t) - std::exp((-d - s) * t)) / (2 * s);
        du = ((-d + s) * std::exp((-d + s) * t) - (-d - s) * std::exp((-d - s) * t)) / (2 * s);
      }
      const double oracle = std::log(du * du + lambda * lambda * u * u);
      CHECK(r.trace.log_energy[j] == doctest::Approx(oracle).epsilon(1e-6));
      CHECK(constant_speed_log_energy(c, lambda, d, 0.0, 1.0, t) == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
}

TEST_CASE("damped decay rate") {
  const auto prob = constant_problem(1.0, 16.0, 0.1, 0.25);
  const auto r = integrate_renormalized(prob, 10.0, 1001);
  const double slope = growth_exponent_fit(r.trace, 0.0, 10.0);
  CHECK(slope == doctest::Approx(-0.8).epsilon(0.15));
}

TEST_CASE("integrator reproduces the activator closed form") {
  const SpeedClassParams ref;
  const double lambda = 256.0;
  for (const auto& base : {SmoothBaseSpeed::constant(2.5), SmoothBaseSpeed::constant(1.0),
                           SmoothBaseSpeed::sinusoidal(2.5, 0.5, 1.0, 0.0)}) {
    const ActivatorSpeed sp(base, rescaled_params(ref, lambda), 2.0);
    auto prob = activator_problem(sp);
    if (base.min_value() < 1.0 + 0.1) prob.admissible_class.reset();
    prob.speed_upper = 4.0;
    const auto r = integrate_renormalized(prob, 2.0, 201);
    for (std::size_t j = 0; j < r.trace.times.size(); ++j) {
      CHECK(std::abs(r.trace.log_energy[j] - sp.log_energy(r.trace.times[j])) < 1e-3);
    }
  }
}

TEST_CASE("activator growth exponent") {
  const SpeedClassParams ref;
  const double lambda = 256.0;
  for (double c0 : {1.0, 2.5, 3.9}) {
    const ActivatorSpeed sp(SmoothBaseSpeed::constant(c0), rescaled_params(ref, lambda), 2.0);
    auto prob = activator_problem(sp);
    prob.admissible_class.reset();
    prob.speed_upper = 4.0;
    const auto r = integrate_renormalized(prob, 2.0, 401);
    const double slope = growth_exponent_fit(r.trace, 0.5, 2.0);
    // Guaranteed exponent, and the mean of 2 b' for a constant base.
    const double guaranteed = derived_constants(ref).mu4 * sp.params().epsilon * lambda;
    const double mean_rate = sp.params().epsilon * lambda / (2 * std::sqrt(c0));
    CHECK(slope >= guaranteed);
    CHECK(slope == doctest::Approx(mean_rate).epsilon(0.02));
  }
}

TEST_CASE("renormalization is transparent") {
  const SpeedClassParams ref;
  const double lambda = 4096.0;
  const ActivatorSpeed sp(SmoothBaseSpeed::constant(2.5), rescaled_params(ref, lambda), 6.0);
  const auto prob = activator_problem(sp);
  IntegrationOptions coarse, fine;
  fine.renorm_threshold = 1e10;
  const auto a = integrate_renormalized(prob, 6.0, 61, coarse);
  const auto b = integrate_renormalized(prob, 6.0, 61, fine);
  CHECK(b.renormalizations > a.renormalizations);
  CHECK(a.trace.log_energy.back() > 50.0);
  for (std::size_t j = 0; j < a.trace.times.size(); ++j) {
    CHECK(std::abs(a.trace.log_energy[j] - b.trace.log_energy[j]) < 1e-9);
  }
}

TEST_CASE("integrator input errors") {
  auto prob = constant_problem(5.0, 8.0);
  prob.admissible_class = SpeedClassParams{};
  CHECK_THROWS_AS(integrate_renormalized(prob, 1.0, 11), AdmissibilityViolation);

  IntegrationOptions opt;
  opt.rel_tol = 1e-14;
  CHECK_THROWS_AS(integrate_renormalized(constant_problem(1.0, 8.0), 1.0, 11, opt), InvalidInput);
  CHECK_THROWS_AS(integrate_renormalized(constant_problem(1.0, 8.0), -1.0, 11), InvalidInput);

  auto nan_speed = constant_problem(1.0, 8.0);
  nan_speed.speed = [](double t) { return t < 0.5 ? 1.0 : std::nan(""); };
  try {
    integrate_renormalized(nan_speed, 1.0, 11);
    FAIL("expected an integration failure");
  } catch (const IntegrationFailure& e) {
    CHECK(e.last_good_time() <= 0.5);
  }

  const auto r = integrate_renormalized(constant_problem(1.0, 8.0), 1.0, 5);
  CHECK_THROWS_AS(growth_exponent_fit(r.trace, 0.0, 1.0), InvalidInput);
}

TEST_CASE("parallel map output does not depend on the thread count") {
  const auto f = [](std::size_t j) {
    const auto r = integrate_renormalized(constant_problem(1.0 + 0.1 * j, 16.0, 0.05, 0.1), 2.0, 21);
    return r.trace.log_energy.back();
  };
  const auto serial = parallel_map<double>(8, 1, f);
  const auto threaded = parallel_map<double>(8, 4, f);
  CHECK(serial == threaded);
  CHECK_THROWS_AS(parallel_map<int>(4, 2, [](std::size_t j) -> int {
                    if (j == 2) throw InvalidInput("boom");
                    return 0;
                  }),
                  InvalidInput);
}
