#include "reslab/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include "reslab/errors.hpp"
#include "reslab/io.hpp"

namespace reslab {

std::string RunOutcome::summary() const {
  io::KeyValueReport r;
  for (const auto& s : suites) {
    r.add(to_string(s.suite), std::string(s.ok ? "pass" : "fail"));
    if (!s.detail.empty()) r.add(to_string(s.suite) + ".detail", s.detail);
  }
  r.add("exit_code", exit_code);
  return r.str();
}

NonActivatorResult run_ck_membership(const RunConfig& cfg) {
  const auto value = std::string_view(cfg.ck_speed);
  const auto colon = value.find(':');
  const auto kind = value.substr(0, colon);
  const auto arg = colon == std::string_view::npos ? std::string_view{}
                                                   : value.substr(colon + 1);
  const double horizon = static_cast<double>(cfg.k);
  const auto build = [&]() -> CkSpeed {
    if (kind == "const") return CkSpeed::constant(io::parse_double(arg));
    if (kind == "activator") {
      const long long n = io::parse_integer(arg);
      if (n < 0 || n > 1000) throw InvalidInput("ck_speed: activator index out of range");
      const double lambda = cfg.ck_lambda0 * std::ldexp(1.0, static_cast<int>(n));
      return CkSpeed::activator(
          ActivatorSpeed(cfg.base, rescaled_params(cfg.cls, lambda), horizon));
    }
    throw InvalidInput("ck_speed must be const:V or activator:N");
  };
  const IndexedEigenvalues eig{
      cfg.k, EigenvalueSequence::geometric(
                 cfg.ck_lambda0 * std::ldexp(1.0, static_cast<int>(cfg.k)), 2.0,
                 cfg.imax - cfg.k + 1)};
  return nonactivator_test(build(), cfg.k, eig, cfg.imax, cfg.cls,
                           ck_grid(cfg.k, cfg.ck_grid_points));
}

std::string ck_certificates(const RunConfig& cfg, const NonActivatorResult& r) {
  io::KeyValueReport rep;
  rep.add("speed", cfg.ck_speed);
  rep.add("k", r.k);
  rep.add("imax", r.imax);
  rep.add("ck_lambda0", cfg.ck_lambda0);
  rep.add("log_prefactor",
          std::log(derived_constants(cfg.cls).mu3 - 1.0 / static_cast<double>(r.k)));
  rep.add("member", r.member);
  if (r.member) rep.add("witness_t", r.witness_t);
  rep.add("rows_evaluated", r.rows_evaluated);
  rep.add("violations", r.violations.size());
  for (std::size_t j = 0; j < r.violations.size(); ++j) {
    const auto& v = r.violations[j];
    const std::string p = "violation." + std::to_string(j) + ".";
    rep.add(p + "t", v.t);
    rep.add(p + "i", v.i);
    rep.add(p + "log_energy", v.log_energy);
    rep.add(p + "log_bound", v.log_bound);
  }
  rep.add("expect", cfg.ck_expect);
  return rep.str();
}

RunOutcome run_config(const RunConfig& cfg) {
  RunOutcome outcome;
  const auto dir = [&](Suite s) { return cfg.out_dir / to_string(s); };
  const auto record = [&](Suite s, bool ok, std::string detail) {
    outcome.suites.push_back({s, ok, std::move(detail)});
  };
  for (Suite s : {Suite::gevrey_critical, Suite::damping_critical,
                  Suite::ck_membership, Suite::empty_interior}) {
    if (!cfg.selects(s)) continue;
    switch (s) {
      case Suite::gevrey_critical:
      case Suite::damping_critical: {
        const LossReport report = s == Suite::gevrey_critical
                                      ? run_gevrey_critical(cfg.gevrey_config())
                                      : run_damping_critical(cfg.damping_config());
        report.write(dir(s));
        std::string detail;
        if (!report.data_ok) detail += "data;";
        if (!report.activation_ok()) detail += "activation;";
        if (!report.loss_ok()) detail += "loss;";
        record(s, report.ok(), detail);
        break;
      }
      case Suite::ck_membership: {
        const auto r = run_ck_membership(cfg);
        io::write_text_file(dir(s) / "certificates.txt", ck_certificates(cfg, r));
        const bool ok = cfg.ck_expect == "any" ||
                        (cfg.ck_expect == "member") == r.member;
        record(s, ok, r.member ? "member" : "nonmember");
        break;
      }
      case Suite::empty_interior: {
        const auto r = empty_interior_probe(cfg.empty_interior_config());
        io::write_text_file(dir(s) / "certificates.txt", r.certificates());
        record(s, r.found,
               r.found ? "n=" + std::to_string(r.n_found) : "not found");
        break;
      }
    }
  }
  outcome.exit_code = 0;
  for (const auto& s : outcome.suites) {
    if (!s.ok) outcome.exit_code = 1;
  }
  io::write_text_file(cfg.out_dir / "summary.txt", outcome.summary());
  return outcome;
}

int run_config_file(const std::filesystem::path& path,
                    const std::filesystem::path* out_override,
                    std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_run_config(path);
    if (out_override) cfg.out_dir = *out_override;
    cfg.validate();
  } catch (const InvalidInput& e) {
    err << "invalid config: " << e.what() << '\n';
    return 2;
  }
  const RunOutcome outcome = run_config(cfg);
  out << outcome.summary();
  if (outcome.exit_code != 0) err << "certificate failure, see " << cfg.out_dir.string() << '\n';
  return outcome.exit_code;
}

RunConfig reference_config() {
  RunConfig cfg;
  cfg.seed = kDefaultPairSeed;
  cfg.suites = {Suite::gevrey_critical, Suite::ck_membership,
                Suite::empty_interior};
  cfg.ck_expect = "member";
  cfg.source = "<reference>";
  return cfg;
}

RunConfig damping_reference_config() {
  RunConfig cfg;
  cfg.seed = kDefaultPairSeed;
  cfg.cls.delta = 0.04;
  cfg.cls.sigma = 0.25;
  cfg.suites = {Suite::damping_critical};
  cfg.source = "<damping-reference>";
  return cfg;
}

std::filesystem::path resolve_out_dir(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("RESLAB_OUT_DIR"); env && *env) {
    return std::filesystem::path(env);
  }
  return fallback;
}

}  // namespace reslab
