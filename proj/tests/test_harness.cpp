#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "reslab/config.hpp"
#include "reslab/errors.hpp"
#include "reslab/harness.hpp"
#include "reslab/io.hpp"

using namespace reslab;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in, "test.conf");
}

std::string message_of(const std::string& text) {
  try {
    auto cfg = parse(text);
    cfg.validate();
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("reslab-test-" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse(
      "# comment\n"
      "mu1 = 1\nmu2=4\nalpha = 0.5\nH = 8\n"
      "seed = 0x10\n"
      "suites = gevrey-critical, empty-interior\n"
      "base = sin:2.5,0.25,1,0\n");
  CHECK(cfg.seed.value() == 16);
  CHECK(cfg.suites.size() == 2);
  CHECK(cfg.selects(Suite::empty_interior));
  CHECK_FALSE(cfg.selects(Suite::ck_membership));
  CHECK(cfg.key_lines.at("seed") == 6);
  CHECK(cfg.base.form() == SmoothBaseSpeed::Form::sinusoidal);
  CHECK_NOTHROW(cfg.validate());
  CHECK(parse("r0 = 0.1234567890123456789\n").r0 == 0.1234567890123456789);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(message_of("seed = 1\n\nfrobnicate = 3\n").find("test.conf:3") != std::string::npos);
  CHECK(message_of("seed = 1\nmu1 = 1\nmu1 = 2\n").find("test.conf:3") != std::string::npos);
  CHECK(message_of("seed = 1\nmu1 = abc\n").find("test.conf:2") != std::string::npos);
  CHECK(message_of("seed = 1\nmu1 = 5\nmu2 = 4\n").find("mu") != std::string::npos);
  CHECK(message_of("mu1 = 1\n").find("seed") != std::string::npos);
  const auto damp = message_of("seed = 1\ndelta = 0.09\nsigma = 0.25\nsuites = damping-critical\n");
  CHECK(damp.find("0.08838") != std::string::npos);
  CHECK(damp.find("test.conf:2") != std::string::npos);
  CHECK(message_of("seed = 1\nsuites = warp-drive\n").find("test.conf:2") != std::string::npos);
}

TEST_CASE("every key is documented") {
  const auto help = config_key_help();
  for (const char* key : {"mu1", "mu2", "alpha", "H", "delta", "sigma", "r0", "lambda0",
                          "num_frequencies", "t_max", "grid_points", "seed",
                          "divergence_threshold", "suites", "out_dir"}) {
    CHECK(help.find(std::string("  ") + key + " ") != std::string::npos);
  }
}

TEST_CASE("config files: exit codes") {
  const auto dir = scratch("exit");
  fs::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  };
  std::ostringstream out, err;
  const fs::path out_dir = dir / "out";
  CHECK(run_config_file(write("bad.conf", "seed = 1\nmu1 = 4\nmu2 = 4\n"), &out_dir, out, err) == 2);
  CHECK(err.str().find("bad.conf") != std::string::npos);
  CHECK(run_config_file(write("damp.conf", "seed=1\ndelta=0.09\nsigma=0.25\nsuites=damping-critical\n"),
                        &out_dir, out, err) == 2);
  CHECK(run_config_file(dir / "missing.conf", &out_dir, out, err) == 2);
  // Nine frequencies are too few for the data trend to read as convergent.
  CHECK(run_config_file(write("short.conf", "seed = 7\nnum_frequencies = 9\ngrid_points = 97\n"),
                        &out_dir, out, err) == 1);
  CHECK(run_config_file(write("ok.conf", "seed = 7\nnum_frequencies = 12\ngrid_points = 97\n"),
                        &out_dir, out, err) == 0);
  CHECK(fs::exists(out_dir / "gevrey-critical" / "report.csv"));
  CHECK(fs::exists(out_dir / "gevrey-critical" / "certificates.txt"));
  CHECK(fs::exists(out_dir / "summary.txt"));
}

TEST_CASE("reference configuration passes and reruns are byte-identical") {
  auto cfg = reference_config();
  const auto first = scratch("ref-a");
  cfg.out_dir = first;
  const auto a = run_config(cfg);
  CHECK(a.exit_code == 0);
  cfg.out_dir = scratch("ref-b");
  cfg.threads = 3;
  const auto b = run_config(cfg);
  CHECK(b.exit_code == 0);
  for (const char* f : {"gevrey-critical/report.csv", "gevrey-critical/certificates.txt",
                        "ck-membership/certificates.txt", "empty-interior/certificates.txt",
                        "summary.txt"}) {
    CAPTURE(f);
    const auto left = slurp(first / f);
    CHECK_FALSE(left.empty());
    CHECK(left == slurp(cfg.out_dir / f));
  }
}

TEST_CASE("output directory override") {
  ::setenv("RESLAB_OUT_DIR", "/tmp/reslab-env-out", 1);
  CHECK(resolve_out_dir("fallback") == fs::path("/tmp/reslab-env-out"));
  ::unsetenv("RESLAB_OUT_DIR");
  CHECK(resolve_out_dir("fallback") == fs::path("fallback"));
}

TEST_CASE("emitted numbers round-trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-700.0, 700.0);
  for (int j = 0; j < 10000; ++j) {
    const double x = std::exp(u(rng)) * (j % 2 ? 1 : -1);
    CHECK(io::parse_double(io::format_double(x)) == x);
  }
  CHECK_THROWS_AS(io::parse_double("1.5x"), InvalidInput);
  CHECK_THROWS_AS(io::parse_double(""), InvalidInput);
}

TEST_CASE("key=value parsing") {
  std::istringstream in("a = 1\n# c\n\nb=two words\n");
  const auto lines = io::parse_key_values(in, "kv");
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].line == 4);
  CHECK(lines[1].value == "two words");
  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS(io::parse_key_values(bad, "kv"), InvalidInput);
}
