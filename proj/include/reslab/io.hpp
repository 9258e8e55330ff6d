#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reslab/speeds.hpp"

namespace reslab::io {

/// Strict decimal parse of the whole field (surrounding blanks allowed).
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

/// Shortest "%.17g" rendering; every value round-trips exactly.
std::string format_double(double value);

/// Ordered key=value lines.
class KeyValueReport {
 public:
  void add(std::string key, std::string value);
  void add(std::string key, double value);
  void add(std::string key, bool value);
  void add(std::string key, long long value);
  void add(std::string key, std::size_t value);
  void add(std::string key, int value) {
    add(std::move(key), static_cast<long long>(value));
  }
  void add(std::string key, const char* value) {
    add(std::move(key), std::string(value));
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct KeyValueLine {
  std::size_t line = 0;
  std::string key;
  std::string value;
};

/// Parses key=value lines; '#' starts a comment, blank lines are skipped.
/// Throws InvalidInput naming the offending line number.
std::vector<KeyValueLine> parse_key_values(std::istream& in,
                                           std::string_view source);

/// SampledSpeed CSV: header "t,c", uniform t starting at 0.
void write_speed_csv(std::ostream& out, const SampledSpeed& speed);
SampledSpeed read_speed_csv(std::istream& in);
SampledSpeed read_speed_csv(const std::filesystem::path& path);

/// Generic numeric CSV with a fixed header.
void write_csv_header(std::ostream& out, const std::vector<std::string>& cols);
void write_csv_row(std::ostream& out, const std::vector<double>& values);
std::vector<std::vector<double>> read_numeric_csv(
    std::istream& in, const std::vector<std::string>& expected_header);

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace reslab::io
