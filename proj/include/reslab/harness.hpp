#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "reslab/config.hpp"

namespace reslab {

struct SuiteOutcome {
  Suite suite = Suite::gevrey_critical;
  bool ok = false;
  std::string detail;
};

struct RunOutcome {
  /// 0 when every selected certificate passes, 1 otherwise.
  int exit_code = 0;
  std::vector<SuiteOutcome> suites;
  std::string summary() const;
};

/// Runs the selected suites in fixed order and writes
/// out_dir/<suite>/{report.csv, certificates.txt} and out_dir/summary.txt.
/// The config must already be valid.
RunOutcome run_config(const RunConfig& cfg);

/// Loads, validates and runs a config file. Returns the process exit code:
/// 2 for an invalid config (diagnostics on err), otherwise run_config's.
int run_config_file(const std::filesystem::path& path,
                    const std::filesystem::path* out_override,
                    std::ostream& out, std::ostream& err);

/// C_k membership as configured (ck_speed, k, imax, ck_lambda0).
NonActivatorResult run_ck_membership(const RunConfig& cfg);
std::string ck_certificates(const RunConfig& cfg, const NonActivatorResult& r);

/// Built-in configurations used by verify-all.
RunConfig reference_config();
RunConfig damping_reference_config();

/// Output directory: $RESLAB_OUT_DIR when set, otherwise `fallback`.
std::filesystem::path resolve_out_dir(const std::filesystem::path& fallback);

}  // namespace reslab
