#include "reslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "reslab/errors.hpp"
#include "reslab/io.hpp"
#include "reslab/oscillator.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

double blowup_time(const SpeedClassParams& cls, double r0) {
  cls.validate();
  if (!(r0 > 0.0) || !std::isfinite(r0)) {
    throw InvalidInput("blowup_time: r0 must be positive");
  }
  const double t0 =
      32.0 * std::pow(cls.mu2, (1.0 + cls.alpha) / 2.0) * r0 / cls.holder_bound;
  const double check = 2.0 * r0 / derived_constants(cls).mu5;
  if (std::abs(t0 - check) > 1e-12 * t0) {
    throw std::logic_error("blowup_time: the two expressions for t0 disagree");
  }
  return t0;
}

double damping_threshold(const SpeedClassParams& cls) {
  return derived_constants(cls).mu5 / 2.0;
}

double net_growth_rate(const SpeedClassParams& cls, double lambda) {
  const double mu5 = derived_constants(cls).mu5;
  return mu5 * std::pow(lambda, 1.0 - cls.alpha) -
         2.0 * cls.delta * std::pow(lambda, 2.0 * cls.sigma);
}

double log_psi_gevrey(const SpeedClassParams& cls, double r0, double lambda,
                      double t) {
  const double root = std::pow(lambda, 1.0 - cls.alpha);  // lambda^{1/s}
  return -2.0 * std::log(lambda) - 2.0 * r0 * root +
         net_growth_rate(cls, lambda) * t -
         2.0 * root / std::log(2.0 + lambda);
}

double log_psi_damping(const SpeedClassParams& cls, double lambda, double t) {
  const double root = std::pow(lambda, 1.0 - cls.alpha);
  return -2.0 * std::log(lambda) - 4.0 * root / std::log(2.0 + lambda) +
         net_growth_rate(cls, lambda) * t;
}

EigenvalueSequence LossConfig::eigenvalues() const {
  return EigenvalueSequence::geometric(lambda0, 2.0, num_frequencies);
}

std::vector<double> LossConfig::times() const {
  return uniform_grid(t_max, grid_points);
}

namespace {

void validate_common(const LossConfig& cfg) {
  cfg.cls.validate();
  if (!(cfg.r0 > 0.0) || !std::isfinite(cfg.r0)) {
    throw InvalidInput("r0 must be positive");
  }
  if (!(cfg.lambda0 > 0.0) || !std::isfinite(cfg.lambda0)) {
    throw InvalidInput("lambda0 must be positive");
  }
  if (cfg.num_frequencies < 8) {
    throw InvalidInput(
        "num_frequencies must be at least 8 for the trend classification");
  }
  if (cfg.grid_points < 2) throw InvalidInput("grid_points must be at least 2");
  if (!(cfg.divergence_threshold > 0.0)) {
    throw InvalidInput("divergence_threshold must be positive");
  }
  if (!(cfg.split_margin > 0.0 && cfg.split_margin < 1.0)) {
    throw InvalidInput("split_margin must lie in (0, 1)");
  }
}

}  // namespace

void CriticalGevreyConfig::validate() const {
  validate_common(*this);
  if (!(2.0 * cls.sigma < 1.0 - cls.alpha)) {
    throw InvalidInput(
        "gevrey-critical needs 2 sigma < 1 - alpha (damping below critical)");
  }
  const double t0 = blowup_time(cls, r0);
  if (!(t_max >= 2.0 * t0)) {
    throw InvalidInput("t_max must be at least 2 t0 = " +
                       io::format_double(2.0 * t0));
  }
}

void CriticalDampingConfig::validate() const {
  validate_common(*this);
  if (std::abs(2.0 * cls.sigma - (1.0 - cls.alpha)) > 1e-12) {
    throw InvalidInput("damping-critical needs 2 sigma = 1 - alpha");
  }
  const double threshold = damping_threshold(cls);
  if (!(cls.delta < threshold)) {
    throw InvalidInput("delta = " + io::format_double(cls.delta) +
                       " is not below the damping threshold mu5/2 = " +
                       io::format_double(threshold));
  }
  if (!(t_max > 0.0)) throw InvalidInput("t_max must be positive");
}

double admissibility_window(double mu2, double lambda, double t_end) {
  const double h = speed_grid_step(mu2, lambda);
  return std::min(t_end, h * static_cast<double>(std::size_t{1} << 17));
}

namespace {

struct FrequencyRow {
  FrequencyCertificate cert;
  std::vector<double> log_phi;
  std::vector<double> log_psi;
};

struct SampledCheck {
  AdmissibilityReport admissibility;
  double window = 0.0;
  double sup_distance = 0.0;
};

SampledCheck sample_and_check(const ActivatorSpeed& sp,
                              const SpeedClassParams& cls, double t_end,
                              std::size_t pair_budget, std::uint64_t seed) {
  SampledCheck out;
  const double lambda = sp.params().lambda;
  out.window = admissibility_window(cls.mu2, lambda, t_end);
  const SampledSpeed sampled =
      sp.sample(out.window, speed_grid_step(cls.mu2, lambda));
  const auto values = sampled.values();
  for (std::size_t j = 0; j < values.size(); ++j) {
    out.sup_distance =
        std::max(out.sup_distance,
                 std::abs(values[j] - sp.base().value(sampled.time(j))));
  }
  const std::size_t budget =
      pair_budget ? pair_budget : default_pair_budget(sampled.size());
  out.admissibility = verify_admissible(sampled, cls, budget, seed);
  return out;
}

FrequencyRow compute_frequency(const LossConfig& cfg, std::size_t i,
                               double lambda, std::span<const double> times,
                               const std::function<double(double, double)>& psi) {
  FrequencyRow row;
  auto& cert = row.cert;
  cert.index = i;
  cert.lambda = lambda;
  row.log_psi.reserve(times.size());
  for (double t : times) row.log_psi.push_back(psi(lambda, t));
  try {
    const ActivatorParams p = rescaled_params(cfg.cls, lambda);
    cert.epsilon = p.epsilon;
    const ActivatorSpeed sp(cfg.base, p, cfg.t_max);
    const double rate = net_growth_rate(cfg.cls, lambda);
    const double log_mu3 = std::log(derived_constants(cfg.cls).mu3);
    cert.activation_margin = std::numeric_limits<double>::infinity();
    row.log_phi.reserve(times.size());
    for (double t : times) {
      row.log_phi.push_back(sp.log_energy(t) - rate * t);
      cert.activation_margin =
          std::min(cert.activation_margin, row.log_phi.back() - log_mu3);
    }
    cert.activation_ok = cert.activation_margin >= 0.0;

    const auto check =
        sample_and_check(sp, cfg.cls, cfg.t_max, cfg.pair_budget, cfg.seed);
    cert.admissibility = check.admissibility;
    cert.admissibility_window = check.window;
    cert.sup_distance = check.sup_distance;

    const auto grid = uniform_grid(std::min(cfg.t_max, 5.0), 101);
    cert.residual = closed_form_residual(sp, grid).max_residual;
    cert.residual_ok = cert.residual < 1e-5;
  } catch (const std::exception& e) {
    cert.error = e.what();
    row.log_phi.assign(times.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return row;
}

// Judges one grid time from the column of log terms and log Psi values.
TimeVerdict judge(double t, Expectation expected,
                  std::span<const double> log_terms,
                  std::span<const double> log_psi, double threshold) {
  TimeVerdict v;
  v.t = t;
  v.expected = expected;
  v.last_log_psi = log_psi.back();
  std::vector<double> partial;
  LogValue acc = LogValue::zero();
  bool finite = true;
  for (double x : log_terms) {
    if (!std::isfinite(x)) {
      finite = false;
      break;
    }
    acc.accumulate(x);
    partial.push_back(acc.log());
  }
  v.log_partial_sum = finite ? acc.log() : std::numeric_limits<double>::quiet_NaN();
  switch (expected) {
    case Expectation::divergence:
      v.trend = finite ? divergence_probe(std::span<const double>(partial),
                                          threshold)
                       : Trend::inconclusive;
      v.ok = v.trend == Trend::divergent_trend;
      break;
    case Expectation::decay: {
      std::vector<double> negated(log_psi.begin(), log_psi.end());
      for (double& x : negated) x = -x;
      v.trend = divergence_probe(std::span<const double>(negated), threshold);
      v.ok = v.trend == Trend::divergent_trend;
      break;
    }
    case Expectation::none:
      v.trend = finite && partial.size() >= 8
                    ? divergence_probe(std::span<const double>(partial),
                                       threshold)
                    : Trend::inconclusive;
      v.ok = true;
      break;
  }
  return v;
}

LossReport run_loss(const LossConfig& cfg, std::string suite,
                    const std::function<double(double, double)>& psi,
                    const std::function<Expectation(double)>& expectation,
                    const SpectralScale& data_scale,
                    const std::function<double(double)>& log_coefficient) {
  LossReport report;
  report.suite = std::move(suite);
  report.times = cfg.times();
  const EigenvalueSequence eig = cfg.eigenvalues();
  report.lambdas.assign(eig.values().begin(), eig.values().end());

  auto rows = parallel_map<FrequencyRow>(
      eig.size(), cfg.threads, [&](std::size_t i) {
        return compute_frequency(cfg, i, eig[i], report.times, psi);
      });
  for (auto& row : rows) {
    report.log_phi.push_back(std::move(row.log_phi));
    report.log_psi.push_back(std::move(row.log_psi));
    report.frequencies.push_back(std::move(row.cert));
  }

  // Data regularity: partial sums of a_i^2 in the scale of the data.
  std::vector<double> data_partials;
  LogValue acc = LogValue::zero();
  for (double lambda : report.lambdas) {
    acc.accumulate(2.0 * log_coefficient(lambda) + log_weight(data_scale, lambda));
    data_partials.push_back(acc.log());
  }
  report.data_trend = divergence_probe(std::span<const double>(data_partials),
                                       cfg.divergence_threshold);
  report.data_ok = report.data_trend == Trend::convergent_trend;

  const std::size_t n = report.lambdas.size();
  std::vector<double> terms(n);
  std::vector<double> psis(n);
  for (std::size_t j = 0; j < report.times.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      terms[i] = report.log_term(i, j);
      psis[i] = report.log_psi[i][j];
    }
    const double t = report.times[j];
    report.verdicts.push_back(judge(t, expectation(t), terms, psis,
                                    cfg.divergence_threshold));
  }
  return report;
}

}  // namespace

bool LossReport::activation_ok() const {
  return std::all_of(frequencies.begin(), frequencies.end(),
                     [](const auto& f) { return f.ok(); });
}

bool LossReport::loss_ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const auto& v) { return v.ok; });
}

bool LossReport::ok() const { return data_ok && activation_ok() && loss_ok(); }

void LossReport::write_csv(std::ostream& out) const {
  io::write_csv_header(out, {"i", "lambda", "t", "log_phi", "log_psi", "log_term"});
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    for (std::size_t j = 0; j < times.size(); ++j) {
      io::write_csv_row(out, {static_cast<double>(i), lambdas[i], times[j],
                              log_phi[i][j], log_psi[i][j], log_term(i, j)});
    }
  }
}

namespace {

std::string to_string(Expectation e) {
  switch (e) {
    case Expectation::divergence:
      return "divergence";
    case Expectation::decay:
      return "decay";
    case Expectation::none:
      return "none";
  }
  return "none";
}

}  // namespace

std::string LossReport::certificates() const {
  io::KeyValueReport r;
  r.add("suite", suite);
  r.add("t0", t0);
  if (!std::isnan(growth_threshold)) r.add("damping_threshold", growth_threshold);
  r.add("num_frequencies", lambdas.size());
  r.add("data_trend", to_string(data_trend));
  r.add("data_ok", data_ok);
  for (const auto& f : frequencies) {
    const std::string p = "freq." + std::to_string(f.index) + ".";
    r.add(p + "lambda", f.lambda);
    r.add(p + "epsilon", f.epsilon);
    r.add(p + "min_value", f.admissibility.min_value);
    r.add(p + "max_value", f.admissibility.max_value);
    r.add(p + "holder", f.admissibility.holder.value);
    r.add(p + "holder_resolution", f.admissibility.holder.resolution);
    r.add(p + "admissibility_window", f.admissibility_window);
    r.add(p + "admissible", f.admissibility.ok());
    r.add(p + "sup_distance", f.sup_distance);
    r.add(p + "residual", f.residual);
    r.add(p + "residual_ok", f.residual_ok);
    r.add(p + "activation_margin", f.activation_margin);
    r.add(p + "activation_ok", f.activation_ok);
    if (!f.error.empty()) r.add(p + "error", f.error);
    r.add(p + "ok", f.ok());
  }
  std::size_t judged = 0;
  for (std::size_t j = 0; j < verdicts.size(); ++j) {
    const auto& v = verdicts[j];
    if (v.expected == Expectation::none) continue;
    ++judged;
    const std::string p = "time." + std::to_string(j) + ".";
    r.add(p + "t", v.t);
    r.add(p + "expected", to_string(v.expected));
    r.add(p + "trend", reslab::to_string(v.trend));
    r.add(p + "last_log_psi", v.last_log_psi);
    r.add(p + "log_partial_sum", v.log_partial_sum);
    r.add(p + "ok", v.ok);
  }
  r.add("times_judged", judged);
  r.add("activation_ok", activation_ok());
  r.add("loss_ok", loss_ok());
  r.add("all_ok", ok());
  return r.str();
}

void LossReport::write(const std::filesystem::path& dir) const {
  std::ostringstream csv;
  write_csv(csv);
  io::write_text_file(dir / "report.csv", csv.str());
  io::write_text_file(dir / "certificates.txt", certificates());
}

LossReport run_gevrey_critical(const CriticalGevreyConfig& cfg) {
  cfg.validate();
  const double t0 = blowup_time(cfg.cls, cfg.r0);
  const double s = cfg.order();
  const auto& cls = cfg.cls;
  const double r0 = cfg.r0;
  const double lo = t0 * (1.0 - cfg.split_margin);
  const double hi = t0 * (1.0 + cfg.split_margin);
  LossReport report = run_loss(
      cfg, "gevrey-critical",
      [&](double lambda, double t) { return log_psi_gevrey(cls, r0, lambda, t); },
      [&](double t) {
        if (t >= hi) return Expectation::divergence;
        if (t <= lo) return Expectation::decay;
        return Expectation::none;
      },
      SpectralScale::gevrey(s, r0, 0.0),
      [&](double lambda) {
        return -std::log(lambda) - r0 * std::pow(lambda, 1.0 / s);
      });
  report.t0 = t0;
  return report;
}

LossReport run_damping_critical(const CriticalDampingConfig& cfg) {
  cfg.validate();
  const double s = cfg.order();
  const auto& cls = cfg.cls;
  LossReport report = run_loss(
      cfg, "damping-critical",
      [&](double lambda, double t) { return log_psi_damping(cls, lambda, t); },
      [](double t) { return t > 0.0 ? Expectation::divergence : Expectation::none; },
      SpectralScale::gevrey_log(s, 0.0),
      [&](double lambda) {
        return -std::log(lambda) -
               std::pow(lambda, 1.0 / s) / std::log(2.0 + lambda);
      });
  report.t0 = blowup_time(cls, cfg.r0);
  report.growth_threshold = damping_threshold(cls);
  return report;
}

double IndexedEigenvalues::lambda(std::size_t i) const {
  if (i < first_index || i > last_index()) {
    throw InvalidInput("eigenvalue index " + std::to_string(i) +
                       " outside the supplied range");
  }
  return seq[i - first_index];
}

CkSpeed CkSpeed::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidInput("constant speed must be positive");
  }
  CkSpeed s;
  s.constant_ = c;
  s.label_ = "const:" + io::format_double(c);
  return s;
}

CkSpeed CkSpeed::activator(ActivatorSpeed sp) {
  CkSpeed s;
  s.label_ = "activator:lambda=" + io::format_double(sp.params().lambda) +
             ",base=" + sp.base().describe();
  s.activator_.emplace(std::move(sp));
  return s;
}

CkSpeed CkSpeed::general(std::function<double(double)> c, std::string label) {
  if (!c) throw InvalidInput("general speed: empty function");
  CkSpeed s;
  s.general_ = std::move(c);
  s.label_ = std::move(label);
  return s;
}

std::optional<double> CkSpeed::priority_lambda() const {
  if (activator_) return activator_->params().lambda;
  return std::nullopt;
}

std::string CkSpeed::describe() const { return label_; }

std::vector<double> CkSpeed::log_energy(double lambda,
                                        const SpeedClassParams& cls,
                                        std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  const double damping = cls.delta * std::pow(lambda, 2.0 * cls.sigma);
  if (constant_) {
    for (double t : times) {
      out.push_back(constant_speed_log_energy(*constant_, lambda, damping, 0.0,
                                              1.0, t));
    }
    return out;
  }
  if (activator_) {
    const auto& p = activator_->params();
    if (std::abs(p.lambda - lambda) <= 1e-12 * lambda && p.delta == cls.delta &&
        p.sigma == cls.sigma) {
      for (double t : times) out.push_back(activator_->log_energy(t));
      return out;
    }
  }
  if (times.empty()) return out;
  OscillatorProblem prob;
  prob.lambda = lambda;
  prob.delta = cls.delta;
  prob.sigma = cls.sigma;
  if (activator_) {
    const ActivatorSpeed sp = *activator_;
    prob.speed = [sp](double t) { return sp(t); };
  } else {
    prob.speed = general_;
  }
  prob.admissible_class = cls;
  prob.u0 = 0.0;
  prob.u1 = 1.0;
  if (times.back() == 0.0) {
    out.assign(times.size(), 0.0);
    return out;
  }
  return integrate_renormalized(prob, times).trace.log_energy;
}

std::vector<double> ck_grid(std::size_t k, std::size_t points) {
  return uniform_grid(static_cast<double>(k), points);
}

NonActivatorResult nonactivator_test(const CkSpeed& c, std::size_t k,
                                     const IndexedEigenvalues& eig,
                                     std::size_t imax,
                                     const SpeedClassParams& cls,
                                     std::span<const double> times) {
  cls.validate();
  const DerivedConstants consts = derived_constants(cls);
  if (k == 0) throw InvalidInput("nonactivator_test: k must be positive");
  const double prefactor = consts.mu3 - 1.0 / static_cast<double>(k);
  if (!(prefactor > 0.0)) {
    throw InvalidInput("nonactivator_test: mu3 - 1/k = " +
                       io::format_double(prefactor) +
                       " is not positive; k must exceed 1/mu3 = " +
                       io::format_double(1.0 / consts.mu3));
  }
  if (imax < k) throw InvalidInput("nonactivator_test: imax must be >= k");
  if (eig.first_index > k || imax > eig.last_index()) {
    throw InvalidInput(
        "nonactivator_test: eigenvalues must cover indices k..imax");
  }
  if (times.empty()) throw InvalidInput("nonactivator_test: empty time grid");
  const double kd = static_cast<double>(k);
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] >= 0.0 && times[j] <= kd * (1.0 + 1e-12)) ||
        (j > 0 && !(times[j] > times[j - 1]))) {
      throw InvalidInput(
          "nonactivator_test: times must increase within [0, k]");
    }
  }

  std::vector<std::size_t> order;
  const auto priority = c.priority_lambda();
  std::optional<std::size_t> first;
  for (std::size_t i = k; i <= imax; ++i) {
    if (priority && !first &&
        std::abs(eig.lambda(i) - *priority) <= 1e-12 * *priority) {
      first = i;
    }
  }
  if (first) order.push_back(*first);
  for (std::size_t i = k; i <= imax; ++i) {
    if (!first || i != *first) order.push_back(i);
  }

  NonActivatorResult result;
  result.k = k;
  result.imax = imax;
  std::vector<bool> alive(times.size(), true);
  std::size_t remaining = times.size();
  const double log_prefactor = std::log(prefactor);
  for (std::size_t i : order) {
    if (remaining == 0) break;
    const double lambda = eig.lambda(i);
    std::vector<double> ts;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < times.size(); ++j) {
      if (alive[j]) {
        ts.push_back(times[j]);
        idx.push_back(j);
      }
    }
    const auto energies = c.log_energy(lambda, cls, ts);
    ++result.rows_evaluated;
    const double rate = net_growth_rate(cls, lambda);
    for (std::size_t q = 0; q < ts.size(); ++q) {
      const double bound = log_prefactor + rate * ts[q];
      if (energies[q] > bound) {
        alive[idx[q]] = false;
        --remaining;
        result.violations.push_back({ts[q], i, energies[q], bound});
      }
    }
  }
  std::sort(result.violations.begin(), result.violations.end(),
            [](const Violation& a, const Violation& b) { return a.t < b.t; });
  for (std::size_t j = times.size(); j-- > 0;) {
    if (alive[j]) {
      result.member = true;
      result.witness_t = times[j];
      break;
    }
  }
  return result;
}

void EmptyInteriorConfig::validate() const {
  cls.validate();
  if (!(eps0 > 0.0)) throw InvalidInput("eps0 must be positive");
  if (!base.satisfies_margins(cls)) {
    throw InvalidInput("base speed " + base.describe() +
                       " violates the admissibility margins (margin = " +
                       io::format_double(base.margin(cls)) + ")");
  }
  const double prefactor =
      derived_constants(cls).mu3 - 1.0 / static_cast<double>(k0);
  if (k0 == 0 || !(prefactor > 0.0)) {
    throw InvalidInput("k0 must exceed 1/mu3 = " +
                       io::format_double(1.0 / derived_constants(cls).mu3));
  }
  if (!(lambda0 > 0.0)) throw InvalidInput("lambda0 must be positive");
  if (max_n < first_n) throw InvalidInput("max_n must be >= first_n");
  if (grid_points < 2) throw InvalidInput("grid_points must be at least 2");
}

EmptyInteriorResult empty_interior_probe(const EmptyInteriorConfig& cfg) {
  cfg.validate();
  const auto times = ck_grid(cfg.k0, cfg.grid_points);
  const double horizon = static_cast<double>(cfg.k0);
  EmptyInteriorResult result;
  for (std::size_t n = cfg.first_n; n <= cfg.max_n; ++n) {
    EmptyInteriorCandidate cand;
    cand.n = n;
    cand.lambda = cfg.lambda0 * std::ldexp(1.0, static_cast<int>(n));
    const ActivatorParams p = rescaled_params(cfg.cls, cand.lambda);
    cand.epsilon = p.epsilon;
    try {
      const ActivatorSpeed sp(cfg.base, p, horizon);
      const auto check =
          sample_and_check(sp, cfg.cls, horizon, cfg.pair_budget, cfg.seed);
      cand.sup_distance = check.sup_distance;
      cand.distance_ok = check.sup_distance < cfg.eps0;
      cand.admissibility = check.admissibility;
      // Row k0 + j carries lambda0 * 2^j. The activator's own row is evaluated
      // first, and once it violates the bound at every grid time the others
      // are never computed.
      const IndexedEigenvalues rows{
          cfg.k0, EigenvalueSequence::geometric(cfg.lambda0, 2.0, n + 1)};
      cand.nonactivator = nonactivator_test(CkSpeed::activator(sp), cfg.k0, rows,
                                            cfg.k0 + n, cfg.cls, times);
      cand.escapes = !cand.nonactivator.member;
    } catch (const std::exception& e) {
      cand.reason = e.what();
    }
    if (cand.reason.empty()) {
      std::string reason;
      const auto append = [&](const std::string& s) {
        reason += (reason.empty() ? "" : "; ") + s;
      };
      if (!cand.distance_ok) {
        append("sup distance " + io::format_double(cand.sup_distance) +
               " >= eps0");
      }
      if (!cand.admissibility.hyperbolicity_ok) {
        append("values leave [mu1, mu2]");
      }
      if (!cand.admissibility.holder_ok) {
        append("grid Holder constant " +
               io::format_double(cand.admissibility.holder.value) +
               " exceeds H");
      }
      if (!cand.escapes) {
        append("frequency lambda_n leaves grid time " +
               io::format_double(cand.nonactivator.witness_t) + " unviolated");
      }
      cand.reason = reason;
    }
    const bool ok = cand.ok();
    result.candidates.push_back(std::move(cand));
    if (ok) {
      result.found = true;
      result.n_found = n;
      break;
    }
  }
  return result;
}

std::string EmptyInteriorResult::certificates() const {
  io::KeyValueReport r;
  r.add("found", found);
  if (found) r.add("n_found", n_found);
  for (const auto& c : candidates) {
    const std::string p = "n." + std::to_string(c.n) + ".";
    r.add(p + "lambda", c.lambda);
    r.add(p + "epsilon", c.epsilon);
    r.add(p + "sup_distance", c.sup_distance);
    r.add(p + "distance_ok", c.distance_ok);
    r.add(p + "holder", c.admissibility.holder.value);
    r.add(p + "min_value", c.admissibility.min_value);
    r.add(p + "max_value", c.admissibility.max_value);
    r.add(p + "admissible", c.admissibility.ok());
    r.add(p + "escapes", c.escapes);
    r.add(p + "violations", c.nonactivator.violations.size());
    if (!c.reason.empty()) r.add(p + "reason", c.reason);
    r.add(p + "ok", c.ok());
  }
  return r.str();
}

}  // namespace reslab
