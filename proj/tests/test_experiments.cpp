#include <cmath>
#include <sstream>

#include "doctest.h"
#include "reslab/errors.hpp"
#include "reslab/experiments.hpp"

using namespace reslab;

namespace {

const SpeedClassParams ref{};

CriticalGevreyConfig gevrey_reference() {
  CriticalGevreyConfig cfg;
  cfg.cls = ref;
  return cfg;
}

CriticalDampingConfig damping_reference(double delta) {
  CriticalDampingConfig cfg;
  cfg.cls = ref;
  cfg.cls.delta = delta;
  cfg.cls.sigma = 0.25;
  cfg.t_max = 4.0;
  cfg.grid_points = 17;
  return cfg;
}

// -2 log lambda - 2 r0 lambda^{1/2} + mu5 lambda^{1/2} t - 2 lambda^{1/2} / log(2 + lambda)
double psi_oracle(double lambda, double t) {
  const double root = std::sqrt(lambda);
  const double mu5 = 8.0 / (16.0 * std::pow(4.0, 0.75));
  return -2 * std::log(lambda) - 2 * root + mu5 * root * t - 2 * root / std::log(2 + lambda);
}

}  // namespace

TEST_CASE("blow-up time and damping threshold") {
  CHECK(blowup_time(ref, 1.0) == doctest::Approx(11.3137085).epsilon(1e-9));
  CHECK(blowup_time(ref, 2.0) == doctest::Approx(2 * blowup_time(ref, 1.0)).epsilon(1e-15));
  SpeedClassParams unit = ref;
  unit.mu1 = 0.5;
  unit.mu2 = 1.0;
  unit.holder_bound = 32.0;
  unit.alpha = 0.3;
  CHECK(blowup_time(unit, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(damping_threshold(ref) == doctest::Approx(0.0883883476).epsilon(1e-9));
  CHECK_THROWS_AS(blowup_time(ref, 0.0), InvalidInput);
}

TEST_CASE("loss factor for the critical Gevrey order") {
  const double t0 = blowup_time(ref, 1.0);
  const double lambda = std::ldexp(1.0, 20);
  CHECK(log_psi_gevrey(ref, 1.0, lambda, 1.2 * t0) == doctest::Approx(psi_oracle(lambda, 1.2 * t0)).epsilon(1e-12));
  CHECK(log_psi_gevrey(ref, 1.0, lambda, 1.2 * t0) > 100.0);
  CHECK(log_psi_gevrey(ref, 1.0, lambda, 0.8 * t0) < -100.0);
  CHECK(log_psi_gevrey(ref, 1.0, lambda, 1.2 * t0) == doctest::Approx(234.2).epsilon(1e-3));
  CHECK(log_psi_gevrey(ref, 1.0, lambda, 0.8 * t0) == doctest::Approx(-585.0).epsilon(1e-3));
}

TEST_CASE("loss factor splits monotonically around the blow-up time") {
  const double t0 = blowup_time(ref, 1.0);
  for (double t : {1.1 * t0, 1.3 * t0, 2.0 * t0}) {
    std::vector<double> psi;
    for (int i = 6; i <= 20; ++i) psi.push_back(log_psi_gevrey(ref, 1.0, std::ldexp(1.0, i), t));
    for (std::size_t j = psi.size() - 5; j < psi.size(); ++j) CHECK(psi[j] > psi[j - 1]);
  }
  for (double t : {0.0, 0.5 * t0, 0.9 * t0}) {
    std::vector<double> psi;
    for (int i = 6; i <= 20; ++i) psi.push_back(log_psi_gevrey(ref, 1.0, std::ldexp(1.0, i), t));
    for (std::size_t j = psi.size() - 5; j < psi.size(); ++j) CHECK(psi[j] < psi[j - 1]);
  }
}

TEST_CASE("loss factor under critical damping") {
  SpeedClassParams cls = ref;
  cls.delta = 0.04;
  cls.sigma = 0.25;
  const double lambda = std::ldexp(1.0, 20);
  const double mu5 = derived_constants(cls).mu5;
  const double expected = (mu5 - 0.08) * 1024 - 4 * 1024 / std::log(2 + lambda) - 2 * std::log(lambda);
  CHECK(log_psi_damping(cls, lambda, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(log_psi_damping(cls, lambda, 1.0) == doctest::Approx(-224.1).epsilon(1e-3));
  // Less damping, more growth.
  SpeedClassParams free = cls;
  free.delta = 0.0;
  CHECK(log_psi_damping(free, lambda, 1.0) > log_psi_damping(cls, lambda, 1.0));
}

TEST_CASE("critical configurations are validated") {
  CHECK_NOTHROW(gevrey_reference().validate());
  auto short_grid = gevrey_reference();
  short_grid.t_max = 20.0;
  CHECK_THROWS_AS(short_grid.validate(), InvalidInput);
  auto critical = gevrey_reference();
  critical.cls.sigma = 0.25;
  CHECK_THROWS_AS(critical.validate(), InvalidInput);

  CHECK_NOTHROW(damping_reference(0.04).validate());
  try {
    damping_reference(0.09).validate();
    FAIL("supercritical damping accepted");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("0.08838") != std::string::npos);
  }
  CHECK_THROWS_AS(damping_reference(damping_threshold(ref)).validate(), InvalidInput);
  auto off = damping_reference(0.04);
  off.cls.sigma = 0.2;
  CHECK_THROWS_AS(off.validate(), InvalidInput);
}

TEST_CASE("critical Gevrey experiment on the reference set") {
  const auto cfg = gevrey_reference();
  const auto report = run_gevrey_critical(cfg);
  CHECK(report.data_ok);
  CHECK(report.data_trend == Trend::convergent_trend);
  CHECK(report.activation_ok());
  CHECK(report.loss_ok());
  CHECK(report.ok());
  CHECK(report.t0 == doctest::Approx(11.3137085).epsilon(1e-9));

  const double log_mu3 = std::log(derived_constants(ref).mu3);
  for (std::size_t i = 0; i < report.lambdas.size(); ++i) {
    const double lambda = report.lambdas[i];
    const ActivatorSpeed sp(cfg.base, rescaled_params(ref, lambda), cfg.t_max);
    for (std::size_t j = 0; j < report.times.size(); ++j) {
      const double t = report.times[j];
      // Factorization: log Phi + log Psi is the log general term
      // 2 log a_i + log E_i(t) + log weight of the ultradistribution scale.
      const double log_a = -std::log(lambda) - std::sqrt(lambda);
      const double term = 2 * log_a + sp.log_energy(t) - 2 * std::sqrt(lambda) / std::log(2 + lambda);
      CHECK(std::abs(report.log_term(i, j) - term) <= 1e-9 * std::max(1.0, std::abs(term)));
      if (lambda >= 256.0 && t <= 2 * report.t0) CHECK(report.log_phi[i][j] >= log_mu3);
    }
  }
}

TEST_CASE("experiments do not depend on the thread count") {
  auto cfg = gevrey_reference();
  cfg.num_frequencies = 9;
  cfg.grid_points = 61;
  const auto serial = run_gevrey_critical(cfg);
  cfg.threads = 4;
  const auto threaded = run_gevrey_critical(cfg);
  std::ostringstream a, b;
  serial.write_csv(a);
  threaded.write_csv(b);
  CHECK(a.str() == b.str());
  CHECK(serial.certificates() == threaded.certificates());
}

TEST_CASE("critical damping experiment certifies data and activation") {
  const auto report = run_damping_critical(damping_reference(0.04));
  CHECK(report.data_ok);
  CHECK(report.activation_ok());
  CHECK(report.growth_threshold == doctest::Approx(damping_threshold(ref)));
  std::ostringstream csv;
  report.write_csv(csv);
  CHECK(csv.str().rfind("i,lambda,t,log_phi,log_psi,log_term\n", 0) == 0);
}

TEST_CASE("constant unit speed is a quantitative non-activator") {
  const IndexedEigenvalues eig{33, EigenvalueSequence::geometric(std::ldexp(1.0, 33), 2.0, 9)};
  const auto r = nonactivator_test(CkSpeed::constant(1.0), 33, eig, 41, ref, ck_grid(33, 331));
  CHECK(r.member);
  CHECK(r.witness_t == 33.0);
  // E = 1 exceeds mu3 - 1/33 = 1/1056 only before rate_33 t reaches log 1056,
  // about 4e-4 here, so t = 0 is the single rejected grid time.
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].t == 0.0);
  CHECK(r.violations[0].i == 33);
  CHECK(r.violations[0].log_bound == doctest::Approx(-std::log(1056.0)).epsilon(1e-12));
  CHECK_THROWS_AS(nonactivator_test(CkSpeed::constant(1.0), 32, eig, 41, ref, ck_grid(32, 33)),
                  InvalidInput);
}

TEST_CASE("activator speeds leave C_k through their own frequency") {
  const std::size_t k = 33;
  for (std::size_t n : {33u, 35u, 40u}) {
    const double lambda = std::ldexp(1.0, static_cast<int>(n));
    const ActivatorSpeed sp(SmoothBaseSpeed::constant(2.5), rescaled_params(ref, lambda), 33.0);
    const IndexedEigenvalues eig{k, EigenvalueSequence::geometric(std::ldexp(1.0, 33), 2.0, 9)};
    const auto r = nonactivator_test(CkSpeed::activator(sp), k, eig, 41, ref, ck_grid(k, 331));
    CHECK_FALSE(r.member);
    CHECK(r.rows_evaluated == 1);
    for (const auto& v : r.violations) CHECK(v.i == n);
  }
  // Single row: imax = k with the activator for exactly lambda_k.
  const ActivatorSpeed sp(SmoothBaseSpeed::constant(2.5), rescaled_params(ref, std::ldexp(1.0, 33)), 33.0);
  const IndexedEigenvalues one{33, EigenvalueSequence({std::ldexp(1.0, 33)})};
  CHECK_FALSE(nonactivator_test(CkSpeed::activator(sp), 33, one, 33, ref, ck_grid(33, 331)).member);
}

TEST_CASE("integrated and closed-form energy sources agree on membership") {
  const IndexedEigenvalues eig{33, EigenvalueSequence::geometric(8.0, 2.0, 3)};
  const auto grid = ck_grid(33, 67);
  const auto closed = nonactivator_test(CkSpeed::constant(1.5), 33, eig, 35, ref, grid);
  const auto ode = nonactivator_test(
      CkSpeed::general([](double) { return 1.5; }, "const 1.5"), 33, eig, 35, ref, grid);
  CHECK(closed.member == ode.member);
  CHECK(closed.witness_t == ode.witness_t);
  const auto a = CkSpeed::constant(1.5).log_energy(8.0, ref, grid);
  const auto b = CkSpeed::general([](double) { return 1.5; }, "c").log_energy(8.0, ref, grid);
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) < 1e-6);
}

TEST_CASE("empty-interior probe") {
  EmptyInteriorConfig cfg;
  const auto r = empty_interior_probe(cfg);
  REQUIRE(r.found);
  CHECK(r.n_found <= 20);
  const auto& c = r.candidates.back();
  CHECK(c.distance_ok);
  CHECK(c.sup_distance < 0.5);
  CHECK(c.admissibility.ok());
  CHECK(c.escapes);
  CHECK_FALSE(c.nonactivator.member);
  for (std::size_t j = 0; j + 1 < r.candidates.size(); ++j) CHECK_FALSE(r.candidates[j].reason.empty());

  cfg.eps0 = 10.0;
  const auto wide = empty_interior_probe(cfg);
  CHECK(wide.found);
  CHECK(wide.n_found == cfg.first_n);

  cfg.base = SmoothBaseSpeed::constant(4.0);
  CHECK_THROWS_AS(empty_interior_probe(cfg), InvalidInput);

  EmptyInteriorConfig capped;
  capped.eps0 = 0.01;
  capped.max_n = 3;
  const auto none = empty_interior_probe(capped);
  CHECK_FALSE(none.found);
  CHECK(none.candidates.size() == 3);
  CHECK(none.certificates().find("found=false") != std::string::npos);
}
