// reslab: command-line front end for the resonant-speed laboratory.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "reslab/activator.hpp"
#include "reslab/config.hpp"
#include "reslab/errors.hpp"
#include "reslab/experiments.hpp"
#include "reslab/gevrey.hpp"
#include "reslab/harness.hpp"
#include "reslab/io.hpp"
#include "reslab/oscillator.hpp"
#include "reslab/speeds.hpp"

namespace {

using namespace reslab;

// Writes to a file when a path is given, otherwise to stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(path, text);
  }
}

SpeedClassParams load_class(const std::string& path) {
  if (path.empty()) return SpeedClassParams{};
  RunConfig cfg = load_run_config(path);
  cfg.cls.validate();
  return cfg.cls;
}

std::uint64_t seed_or_default(const std::optional<std::uint64_t>& s) {
  return s.value_or(kDefaultPairSeed);
}

int speeds_check(const std::string& speed_file, const std::string& base_text,
                 double t_max, double lambda, const std::string& class_file,
                 std::size_t pair_budget, std::uint64_t seed) {
  const SpeedClassParams cls = load_class(class_file);
  std::optional<SampledSpeed> sampled;
  if (!speed_file.empty()) {
    sampled = io::read_speed_csv(speed_file);
  } else {
    const SmoothBaseSpeed base = SmoothBaseSpeed::parse(base_text);
    if (lambda > 0.0) {
      const ActivatorSpeed sp(base, rescaled_params(cls, lambda), t_max);
      sampled = sp.sample(admissibility_window(cls.mu2, lambda, t_max),
                          speed_grid_step(cls.mu2, lambda));
    } else {
      sampled = SampledSpeed::from_function(
          [&](double t) { return base.value(t); }, t_max,
          speed_grid_step(cls.mu2, 1.0));
    }
  }
  const std::size_t budget =
      pair_budget ? pair_budget : default_pair_budget(sampled->size());
  const auto rep = verify_admissible(*sampled, cls, budget, seed);
  io::KeyValueReport out;
  out.add("samples", sampled->size());
  out.add("step", sampled->step());
  out.add("min_value", rep.min_value);
  out.add("max_value", rep.max_value);
  out.add("hyperbolicity_ok", rep.hyperbolicity_ok);
  out.add("holder_estimate", rep.holder.value);
  out.add("holder_witness_t1", rep.holder.t1);
  out.add("holder_witness_t2", rep.holder.t2);
  out.add("holder_resolution", rep.holder.resolution);
  out.add("holder_pairs", rep.holder.pairs_examined);
  out.add("holder_exhaustive", rep.holder.exhaustive);
  out.add("holder_ok", rep.holder_ok);
  out.add("admissible", rep.ok());
  std::cout << out.str();
  return rep.ok() ? 0 : 1;
}

int activator_verify(double lambda, const std::string& base_text,
                     const std::string& class_file, double t_max,
                     std::size_t points, std::size_t pair_budget,
                     std::uint64_t seed, const std::string& out_path) {
  const SpeedClassParams cls = load_class(class_file);
  const SmoothBaseSpeed base = SmoothBaseSpeed::parse(base_text);
  const ActivatorParams p = rescaled_params(cls, lambda);
  const ActivatorSpeed sp(base, p, t_max);
  const auto grid = uniform_grid(t_max, points);
  const auto residual = closed_form_residual(sp, grid);
  const double ansatz = ansatz_residual(sp, grid);
  const auto consts = derived_constants(cls);
  double margin = std::numeric_limits<double>::infinity();
  const double rate = consts.mu4 * p.epsilon * lambda - 2.0 * p.damping_rate();
  for (double t : grid) {
    margin = std::min(margin, sp.log_energy(t) - std::log(consts.mu3) - rate * t);
  }
  const double window = admissibility_window(cls.mu2, lambda, t_max);
  const SampledSpeed sampled = sp.sample(window, speed_grid_step(cls.mu2, lambda));
  double sup = 0.0;
  for (std::size_t j = 0; j < sampled.size(); ++j) {
    sup = std::max(sup, std::abs(sampled.values()[j] - base.value(sampled.time(j))));
  }
  const auto adm = verify_admissible(
      sampled, cls, pair_budget ? pair_budget : default_pair_budget(sampled.size()),
      seed);

  io::KeyValueReport out;
  out.add("lambda", lambda);
  out.add("epsilon", p.epsilon);
  out.add("base", base.describe());
  out.add("t_max", t_max);
  out.add("residual_max", residual.max_residual);
  out.add("residual_worst_t", residual.worst_time);
  out.add("residual_fd_step", residual.fd_step);
  out.add("ansatz_residual", ansatz);
  out.add("holder_estimate", adm.holder.value);
  out.add("holder_resolution", adm.holder.resolution);
  out.add("min_value", adm.min_value);
  out.add("max_value", adm.max_value);
  out.add("admissibility_window", window);
  out.add("admissible", adm.ok());
  out.add("sup_distance_to_base", sup);
  out.add("energy_bound_margin", margin);
  const bool ok = residual.max_residual < 1e-5 && adm.ok() && margin >= 0.0;
  out.add("ok", ok);
  emit(out_path, out.str());
  return ok ? 0 : 1;
}

int oscillator_run(double lambda, const std::string& speed_file, double t_max,
                   double tol, std::size_t points, double delta, double sigma,
                   const std::string& out_path) {
  const auto sampled = std::make_shared<SampledSpeed>(io::read_speed_csv(speed_file));
  OscillatorProblem prob;
  prob.lambda = lambda;
  prob.delta = delta;
  prob.sigma = sigma;
  prob.speed = [sampled](double t) { return (*sampled)(t); };
  prob.speed_upper = sampled->max_value();
  IntegrationOptions opt;
  opt.rel_tol = tol;
  const auto res = integrate_renormalized(prob, t_max, points, opt);
  std::ostringstream csv;
  io::write_csv_header(csv, {"t", "log_energy"});
  for (std::size_t j = 0; j < res.trace.times.size(); ++j) {
    io::write_csv_row(csv, {res.trace.times[j], res.trace.log_energy[j]});
  }
  emit(out_path, csv.str());
  return 0;
}

int norms_eval(const std::string& coeff_file, const std::string& scale_text,
               double threshold, const std::string& out_path) {
  std::ifstream in(coeff_file);
  if (!in) throw InvalidInput("cannot open " + coeff_file);
  const auto [eig, coeffs] = read_coefficients_csv(in);
  const auto scale = SpectralScale::parse(scale_text);
  emit(out_path, norm_report(coeffs, eig, scale, threshold).str());
  return 0;
}

int run_suite(Suite suite, const std::string& config_path,
              const std::string& out_dir) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
    cfg.suites = {suite};
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir;
    } else {
      cfg.out_dir = resolve_out_dir(cfg.out_dir);
    }
    cfg.validate();
  } catch (const InvalidInput& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  }
  const RunOutcome outcome = run_config(cfg);
  std::cout << outcome.summary();
  return outcome.exit_code;
}

int verify_all(const std::string& out_dir, unsigned threads) {
  const std::filesystem::path root =
      out_dir.empty() ? resolve_out_dir("reslab-out") : std::filesystem::path(out_dir);
  int code = 0;
  RunConfig configs[] = {reference_config(), damping_reference_config()};
  const char* names[] = {"reference", "damping"};
  for (int j = 0; j < 2; ++j) {
    configs[j].out_dir = root / names[j];
    configs[j].threads = threads;
    configs[j].validate();
    const RunOutcome outcome = run_config(configs[j]);
    std::cout << "[" << names[j] << "]\n" << outcome.summary();
    code = std::max(code, outcome.exit_code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reslab: resonant propagation speeds, energy growth and derivative loss"};
  app.require_subcommand(1);
  app.footer("Config keys (flat key=value files, '#' starts a comment):\n" +
             config_key_help() +
             "\nRESLAB_OUT_DIR overrides the output directory when --out is not "
             "given.\nExit codes: 0 all certificates pass, 1 certificate failure, "
             "2 invalid input.");

  // speeds check
  auto* speeds = app.add_subcommand("speeds", "propagation speed tools");
  speeds->require_subcommand(1);
  auto* check = speeds->add_subcommand("check", "verify admissibility of a speed");
  std::string speed_file, base_text = "const:2.5", class_file;
  double t_max = 1.0, lambda = 0.0;
  std::size_t pair_budget = 0;
  std::optional<std::uint64_t> seed;
  check->add_option("--speed-file", speed_file, "CSV with header t,c");
  check->add_option("--base", base_text, "const:V or sin:m,A,omega,phi");
  check->add_option("--lambda", lambda, "build the activator speed at this frequency");
  check->add_option("--tmax", t_max, "sampling horizon");
  check->add_option("--class-file", class_file, "key=value file with mu1, mu2, alpha, H, delta, sigma");
  check->add_option("--pair-budget", pair_budget, "Holder pairs (0: dyadic pairs + 32 n sampled)");
  check->add_option("--seed", seed, "pair sampling seed");

  // activator verify
  auto* act = app.add_subcommand("activator", "activator speed tools");
  act->require_subcommand(1);
  auto* verify = act->add_subcommand("verify", "certify one activator speed");
  std::string act_out;
  std::size_t act_points = 501;
  double act_lambda = 0.0, act_tmax = 5.0;
  std::string act_base = "const:1";
  verify->add_option("--lambda", act_lambda, "frequency")->required();
  verify->add_option("--base", act_base, "const:V or sin:m,A,omega,phi");
  verify->add_option("--class-file", class_file, "class key=value file");
  verify->add_option("--tmax", act_tmax, "time horizon");
  verify->add_option("--points", act_points, "grid points");
  verify->add_option("--pair-budget", pair_budget, "Holder pairs (0: dyadic pairs + 32 n sampled)");
  verify->add_option("--seed", seed, "pair sampling seed");
  verify->add_option("--out", act_out, "certificate file (default stdout)");

  // oscillator run
  auto* osc = app.add_subcommand("oscillator", "spectral ODE integrator");
  osc->require_subcommand(1);
  auto* run = osc->add_subcommand("run", "integrate one frequency");
  double osc_lambda = 0.0, osc_tmax = 1.0, osc_tol = 1e-9, delta = 0.0, sigma = 0.0;
  std::size_t osc_points = 1001;
  std::string osc_file, osc_out;
  run->add_option("--lambda", osc_lambda, "frequency")->required();
  run->add_option("--speed-file", osc_file, "CSV with header t,c")->required();
  run->add_option("--tmax", osc_tmax, "end time")->required();
  run->add_option("--tol", osc_tol, "relative tolerance in [1e-12, 1e-3]");
  run->add_option("--points", osc_points, "output grid points");
  run->add_option("--delta", delta, "damping coefficient");
  run->add_option("--sigma", sigma, "damping power");
  run->add_option("--out", osc_out, "trace CSV (default stdout)");

  // norms eval
  auto* norms = app.add_subcommand("norms", "spectral scale norms");
  norms->require_subcommand(1);
  auto* eval = norms->add_subcommand("eval", "log partial norms and trend");
  std::string coeff_file, scale_text, norms_out;
  double threshold = kDefaultDivergenceThreshold;
  eval->add_option("--coeffs", coeff_file, "CSV with header lambda,a")->required();
  eval->add_option("--scale", scale_text,
                   "sobolev:beta | gevrey:s,r,beta | hyper:S,R,beta | "
                   "gevrey_log:s,beta | hyper_log:S,beta")
      ->required();
  eval->add_option("--threshold", threshold, "divergence threshold");
  eval->add_option("--out", norms_out, "report file (default stdout)");

  // experiments and probes
  std::string config_path, out_dir;
  auto* exp = app.add_subcommand("experiment", "derivative-loss experiments");
  exp->require_subcommand(1);
  auto* gev = exp->add_subcommand("gevrey-critical", "large-time loss at critical Gevrey order");
  auto* damp = exp->add_subcommand("damping-critical", "instantaneous loss under critical damping");
  auto* probe = app.add_subcommand("probe", "quantitative non-activator probes");
  probe->require_subcommand(1);
  auto* ck = probe->add_subcommand("ck-membership", "membership test for C_k");
  auto* empty = probe->add_subcommand("empty-interior", "escape search around a base speed");
  for (auto* sub : {gev, damp, ck, empty}) {
    sub->add_option("--config", config_path, "key=value config file")->required();
    sub->add_option("--out", out_dir, "output directory");
  }
  unsigned threads = 1;
  auto* all = app.add_subcommand("verify-all", "run the built-in reference and damping configurations");
  all->add_option("--out", out_dir, "output directory")->default_str("reslab-out");
  all->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      return speeds_check(speed_file, base_text, t_max, lambda, class_file,
                          pair_budget, seed_or_default(seed));
    }
    if (*verify) {
      return activator_verify(act_lambda, act_base, class_file, act_tmax, act_points,
                              pair_budget, seed_or_default(seed), act_out);
    }
    if (*run) {
      return oscillator_run(osc_lambda, osc_file, osc_tmax, osc_tol, osc_points,
                            delta, sigma, osc_out);
    }
    if (*eval) return norms_eval(coeff_file, scale_text, threshold, norms_out);
    if (*gev) return run_suite(Suite::gevrey_critical, config_path, out_dir);
    if (*damp) return run_suite(Suite::damping_critical, config_path, out_dir);
    if (*ck) return run_suite(Suite::ck_membership, config_path, out_dir);
    if (*empty) return run_suite(Suite::empty_interior, config_path, out_dir);
    if (*all) return verify_all(out_dir, threads);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
