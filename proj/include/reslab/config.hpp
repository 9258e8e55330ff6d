#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reslab/experiments.hpp"

namespace reslab {

enum class Suite { gevrey_critical, damping_critical, ck_membership, empty_interior };

std::string to_string(Suite s);
Suite parse_suite(std::string_view name);

/// Flat key=value run configuration. Defaults reproduce the reference
/// parameter set (mu1, mu2, alpha, H) = (1, 4, 1/2, 8) without damping.
struct RunConfig {
  SpeedClassParams cls;
  double r0 = 1.0;
  double lambda0 = 64.0;
  std::size_t num_frequencies = 15;
  double t_max = 24.0;
  std::size_t grid_points = 241;
  std::optional<std::uint64_t> seed;
  double divergence_threshold = kDefaultDivergenceThreshold;
  double split_margin = 0.2;
  SmoothBaseSpeed base = SmoothBaseSpeed::constant(2.5);
  std::size_t pair_budget = 0;
  unsigned threads = 1;

  // C_k membership probe.
  std::size_t k = 33;
  std::size_t imax = 41;
  std::string ck_speed = "const:1";
  double ck_lambda0 = 1.0;
  std::size_t ck_grid_points = 331;
  std::string ck_expect = "any";

  // Empty-interior probe.
  std::size_t k0 = 40;
  double eps0 = 0.5;
  std::size_t max_n = 20;

  std::vector<Suite> suites{Suite::gevrey_critical};
  std::filesystem::path out_dir = "reslab-out";

  /// Line on which each key was set, for diagnostics.
  std::map<std::string, std::size_t> key_lines;
  std::string source = "<config>";

  bool selects(Suite s) const;
  /// Semantic checks for the selected suites; throws InvalidInput naming the
  /// offending key and line.
  void validate() const;

  CriticalGevreyConfig gevrey_config() const;
  CriticalDampingConfig damping_config() const;
  EmptyInteriorConfig empty_interior_config() const;
};

/// Throws InvalidInput with "source:line: message" for syntax errors,
/// unknown keys, duplicate keys and unparsable values.
RunConfig parse_run_config(std::istream& in, std::string_view source);
RunConfig load_run_config(const std::filesystem::path& path);

/// One line per key with its meaning and default.
std::string config_key_help();

}  // namespace reslab
