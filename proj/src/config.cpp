#include "reslab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "reslab/errors.hpp"
#include "reslab/io.hpp"

namespace reslab {

std::string to_string(Suite s) {
  switch (s) {
    case Suite::gevrey_critical:
      return "gevrey-critical";
    case Suite::damping_critical:
      return "damping-critical";
    case Suite::ck_membership:
      return "ck-membership";
    case Suite::empty_interior:
      return "empty-interior";
  }
  return {};
}

Suite parse_suite(std::string_view name) {
  for (Suite s : {Suite::gevrey_critical, Suite::damping_critical,
                  Suite::ck_membership, Suite::empty_interior}) {
    if (name == to_string(s)) return s;
  }
  throw InvalidInput("unknown suite '" + std::string(name) + "'");
}

namespace {

std::size_t parse_count(std::string_view v) {
  const long long x = io::parse_integer(v);
  if (x < 0) throw InvalidInput("expected a nonnegative integer");
  return static_cast<std::size_t>(x);
}

double parse_finite(std::string_view v) {
  const double x = io::parse_double(v);
  if (!std::isfinite(x)) throw InvalidInput("value must be finite");
  return x;
}

std::uint64_t parse_seed(std::string_view v) {
  std::uint64_t x = 0;
  const auto first = v.data();
  const auto last = v.data() + v.size();
  int base = 10;
  auto begin = first;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    base = 16;
    begin += 2;
  }
  const auto [ptr, ec] = std::from_chars(begin, last, x, base);
  if (ec != std::errc() || ptr != last || begin == last) {
    throw InvalidInput("seed must be an unsigned 64-bit integer");
  }
  return x;
}

struct KeySpec {
  const char* name;
  const char* help;
  std::function<void(RunConfig&, std::string_view)> set;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"mu1", "lower speed bound (default 1)",
       [](RunConfig& c, std::string_view v) { c.cls.mu1 = parse_finite(v); }},
      {"mu2", "upper speed bound (default 4)",
       [](RunConfig& c, std::string_view v) { c.cls.mu2 = parse_finite(v); }},
      {"alpha", "Holder exponent in (0,1) (default 0.5)",
       [](RunConfig& c, std::string_view v) { c.cls.alpha = parse_finite(v); }},
      {"H", "Holder constant bound (default 8)",
       [](RunConfig& c, std::string_view v) {
         c.cls.holder_bound = parse_finite(v);
       }},
      {"delta", "damping coefficient >= 0 (default 0)",
       [](RunConfig& c, std::string_view v) { c.cls.delta = parse_finite(v); }},
      {"sigma", "damping power in [0, 1/2) (default 0)",
       [](RunConfig& c, std::string_view v) { c.cls.sigma = parse_finite(v); }},
      {"r0", "Gevrey radius of the data (default 1)",
       [](RunConfig& c, std::string_view v) { c.r0 = parse_finite(v); }},
      {"lambda0", "first frequency; lambda_i = lambda0 * 2^i (default 64)",
       [](RunConfig& c, std::string_view v) { c.lambda0 = parse_finite(v); }},
      {"num_frequencies", "number of frequencies, at least 8 (default 15)",
       [](RunConfig& c, std::string_view v) {
         c.num_frequencies = parse_count(v);
       }},
      {"t_max", "end of the time grid; >= 2 t0 for gevrey-critical (default 24)",
       [](RunConfig& c, std::string_view v) { c.t_max = parse_finite(v); }},
      {"grid_points", "time grid points on [0, t_max] (default 241)",
       [](RunConfig& c, std::string_view v) { c.grid_points = parse_count(v); }},
      {"seed", "seed for Holder pair sampling (required)",
       [](RunConfig& c, std::string_view v) { c.seed = parse_seed(v); }},
      {"divergence_threshold", "log value a divergent trend must exceed (default 50)",
       [](RunConfig& c, std::string_view v) {
         c.divergence_threshold = parse_finite(v);
       }},
      {"split_margin",
       "times within split_margin * t0 of t0 are not judged (default 0.2)",
       [](RunConfig& c, std::string_view v) { c.split_margin = parse_finite(v); }},
      {"base", "base speed, const:V or sin:m,A,omega,phi (default const:2.5)",
       [](RunConfig& c, std::string_view v) {
         c.base = SmoothBaseSpeed::parse(v);
       }},
      {"pair_budget", "Holder pairs per grid; 0 selects dyadic pairs + 32 n sampled pairs (default 0)",
       [](RunConfig& c, std::string_view v) { c.pair_budget = parse_count(v); }},
      {"threads", "worker threads for per-frequency work (default 1)",
       [](RunConfig& c, std::string_view v) {
         const auto n = parse_count(v);
         if (n == 0 || n > 1024) throw InvalidInput("threads must be in [1, 1024]");
         c.threads = static_cast<unsigned>(n);
       }},
      {"k", "C_k index for ck-membership (default 33)",
       [](RunConfig& c, std::string_view v) { c.k = parse_count(v); }},
      {"imax", "last frequency index for ck-membership (default 41)",
       [](RunConfig& c, std::string_view v) { c.imax = parse_count(v); }},
      {"ck_speed",
       "speed tested for C_k: const:V or activator:N (activator on base at "
       "ck_lambda0 * 2^N) (default const:1)",
       [](RunConfig& c, std::string_view v) { c.ck_speed = std::string(v); }},
      {"ck_lambda0", "ck-membership frequencies lambda_i = ck_lambda0 * 2^i (default 1)",
       [](RunConfig& c, std::string_view v) { c.ck_lambda0 = parse_finite(v); }},
      {"ck_grid_points", "grid points on [0, k] (default 331)",
       [](RunConfig& c, std::string_view v) { c.ck_grid_points = parse_count(v); }},
      {"ck_expect", "member, nonmember or any (default any)",
       [](RunConfig& c, std::string_view v) {
         if (v != "member" && v != "nonmember" && v != "any") {
           throw InvalidInput("ck_expect must be member, nonmember or any");
         }
         c.ck_expect = std::string(v);
       }},
      {"k0", "C_k0 index for empty-interior (default 40)",
       [](RunConfig& c, std::string_view v) { c.k0 = parse_count(v); }},
      {"eps0", "ball radius for empty-interior (default 0.5)",
       [](RunConfig& c, std::string_view v) { c.eps0 = parse_finite(v); }},
      {"max_n", "search cap for empty-interior (default 20)",
       [](RunConfig& c, std::string_view v) { c.max_n = parse_count(v); }},
      {"suites",
       "comma list of gevrey-critical, damping-critical, ck-membership, "
       "empty-interior (default gevrey-critical)",
       [](RunConfig& c, std::string_view v) {
         std::vector<Suite> out;
         while (true) {
           const auto comma = v.find(',');
           auto name = v.substr(0, comma);
           while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
           while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
           const Suite s = parse_suite(name);
           if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
           if (comma == std::string_view::npos) break;
           v = v.substr(comma + 1);
         }
         c.suites = std::move(out);
       }},
      {"out_dir", "output directory (default reslab-out)",
       [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); }},
  };
  return table;
}

}  // namespace

RunConfig parse_run_config(std::istream& in, std::string_view source) {
  RunConfig cfg;
  cfg.source = std::string(source);
  const auto lines = io::parse_key_values(in, source);
  for (const auto& line : lines) {
    const std::string where =
        std::string(source) + ":" + std::to_string(line.line) + ": ";
    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) {
      return line.key == k.name;
    });
    if (it == table.end()) {
      throw InvalidInput(where + "unknown key '" + line.key + "'");
    }
    if (cfg.key_lines.count(line.key)) {
      throw InvalidInput(where + "duplicate key '" + line.key + "'");
    }
    try {
      it->set(cfg, line.value);
    } catch (const InvalidInput& e) {
      throw InvalidInput(where + line.key + ": " + e.what());
    }
    cfg.key_lines[line.key] = line.line;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  return parse_run_config(in, path.string());
}

bool RunConfig::selects(Suite s) const {
  return std::find(suites.begin(), suites.end(), s) != suites.end();
}

namespace {

// Prefixes a semantic error with the line of the first key that is set.
[[noreturn]] void fail(const RunConfig& cfg, std::initializer_list<const char*> keys,
                       const std::string& message) {
  for (const char* k : keys) {
    const auto it = cfg.key_lines.find(k);
    if (it != cfg.key_lines.end()) {
      throw InvalidInput(cfg.source + ":" + std::to_string(it->second) + ": " +
                         message);
    }
  }
  throw InvalidInput(cfg.source + ": " + message);
}

}  // namespace

void RunConfig::validate() const {
  try {
    cls.validate();
  } catch (const InvalidInput& e) {
    fail(*this, {"mu1", "mu2", "alpha", "H", "delta", "sigma"}, e.what());
  }
  if (suites.empty()) fail(*this, {"suites"}, "no suite selected");
  const bool samples = selects(Suite::gevrey_critical) ||
                       selects(Suite::damping_critical) ||
                       selects(Suite::empty_interior);
  if (samples && !seed) {
    fail(*this, {}, "seed is required: Holder constants are estimated from "
                    "seeded pseudorandom pairs");
  }
  const auto wrap = [&](std::initializer_list<const char*> keys, auto&& f) {
    try {
      f();
    } catch (const InvalidInput& e) {
      fail(*this, keys, e.what());
    }
  };
  if (selects(Suite::gevrey_critical)) {
    wrap({"sigma", "alpha", "t_max", "num_frequencies", "lambda0", "r0"},
         [&] { gevrey_config().validate(); });
  }
  if (selects(Suite::damping_critical)) {
    wrap({"delta", "sigma", "alpha", "num_frequencies", "lambda0"},
         [&] { damping_config().validate(); });
  }
  if (selects(Suite::ck_membership)) {
    wrap({"k", "imax", "ck_speed", "ck_lambda0"}, [&] {
      const double prefactor =
          derived_constants(cls).mu3 - 1.0 / static_cast<double>(k);
      if (k == 0 || !(prefactor > 0.0)) {
        throw InvalidInput("k = " + std::to_string(k) + " must exceed 1/mu3 = " +
                           io::format_double(1.0 / derived_constants(cls).mu3));
      }
      if (imax < k) throw InvalidInput("imax must be >= k");
      if (!(ck_lambda0 > 0.0)) throw InvalidInput("ck_lambda0 must be positive");
      if (ck_grid_points < 2) throw InvalidInput("ck_grid_points must be >= 2");
      if (!(ck_speed.starts_with("const:") || ck_speed.starts_with("activator:"))) {
        throw InvalidInput("ck_speed must be const:V or activator:N");
      }
    });
  }
  if (selects(Suite::empty_interior)) {
    wrap({"k0", "eps0", "base", "max_n"}, [&] { empty_interior_config().validate(); });
  }
}

namespace {

void fill(LossConfig& out, const RunConfig& c) {
  out.cls = c.cls;
  out.r0 = c.r0;
  out.base = c.base;
  out.lambda0 = c.lambda0;
  out.num_frequencies = c.num_frequencies;
  out.t_max = c.t_max;
  out.grid_points = c.grid_points;
  out.seed = c.seed.value_or(kDefaultPairSeed);
  out.divergence_threshold = c.divergence_threshold;
  out.split_margin = c.split_margin;
  out.pair_budget = c.pair_budget;
  out.threads = c.threads;
}

}  // namespace

CriticalGevreyConfig RunConfig::gevrey_config() const {
  CriticalGevreyConfig out;
  fill(out, *this);
  return out;
}

CriticalDampingConfig RunConfig::damping_config() const {
  CriticalDampingConfig out;
  fill(out, *this);
  return out;
}

EmptyInteriorConfig RunConfig::empty_interior_config() const {
  EmptyInteriorConfig out;
  out.base = base;
  out.eps0 = eps0;
  out.k0 = k0;
  out.cls = cls;
  out.max_n = max_n;
  out.seed = seed.value_or(kDefaultPairSeed);
  out.pair_budget = pair_budget;
  return out;
}

std::string config_key_help() {
  std::ostringstream out;
  std::size_t width = 0;
  for (const auto& k : key_table()) width = std::max(width, std::string(k.name).size());
  for (const auto& k : key_table()) {
    const std::string name = k.name;
    out << "  " << name << std::string(width + 2 - name.size(), ' ') << k.help
        << '\n';
  }
  return out.str();
}

}  // namespace reslab
