#include "reslab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "reslab/errors.hpp"

namespace reslab::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return fields;
}

}  // namespace

double parse_double(std::string_view text) {
  const auto s = trim(text);
  if (s.empty()) throw InvalidInput("expected a number, found an empty field");
  double value = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("not a number: '" + std::string(s) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  const auto s = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("not an integer: '" + std::string(s) + "'");
  }
  return value;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InvalidInput("format_double: conversion failed");
  return std::string(buf, ptr);
}

void KeyValueReport::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueReport::add(std::string key, double value) {
  add(std::move(key), format_double(value));
}

void KeyValueReport::add(std::string key, bool value) {
  add(std::move(key), std::string(value ? "true" : "false"));
}

void KeyValueReport::add(std::string key, long long value) {
  add(std::move(key), std::to_string(value));
}

void KeyValueReport::add(std::string key, std::size_t value) {
  add(std::move(key), std::to_string(value));
}

void KeyValueReport::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

std::string KeyValueReport::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

std::vector<KeyValueLine> parse_key_values(std::istream& in,
                                           std::string_view source) {
  std::vector<KeyValueLine> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidInput(std::string(source) + ":" + std::to_string(number) +
                         ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw InvalidInput(std::string(source) + ":" + std::to_string(number) +
                         ": empty key");
    }
    lines.push_back({number, std::string(key),
                     std::string(trim(line.substr(eq + 1)))});
  }
  return lines;
}

void write_speed_csv(std::ostream& out, const SampledSpeed& speed) {
  write_csv_header(out, {"t", "c"});
  const auto values = speed.values();
  for (std::size_t j = 0; j < values.size(); ++j) {
    write_csv_row(out, {speed.time(j), values[j]});
  }
}

SampledSpeed read_speed_csv(std::istream& in) {
  const auto rows = read_numeric_csv(in, {"t", "c"});
  if (rows.size() < 2) {
    throw InvalidInput("speed csv: at least 2 samples required");
  }
  if (rows.front()[0] != 0.0) {
    throw InvalidInput("speed csv: first sample must be at t = 0");
  }
  const double n = static_cast<double>(rows.size() - 1);
  const double step = rows.back()[0] / n;
  if (!(step > 0.0)) {
    throw InvalidInput("speed csv: times must be increasing");
  }
  std::vector<double> values;
  values.reserve(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const double expected = step * static_cast<double>(j);
    if (std::abs(rows[j][0] - expected) > 1e-9 * step + 1e-12 * expected) {
      throw InvalidInput("speed csv: row " + std::to_string(j + 2) +
                         " breaks the uniform time grid");
    }
    values.push_back(rows[j][1]);
  }
  return SampledSpeed(step, std::move(values));
}

SampledSpeed read_speed_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_speed_csv(in);
}

void write_csv_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (j) out << ',';
    out << cols[j];
  }
  out << '\n';
}

void write_csv_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j) out << ',';
    out << format_double(values[j]);
  }
  out << '\n';
}

std::vector<std::vector<double>> read_numeric_csv(
    std::istream& in, const std::vector<std::string>& expected_header) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("csv: missing header");
  const auto header = split_commas(line);
  bool header_ok = header.size() == expected_header.size();
  for (std::size_t j = 0; header_ok && j < header.size(); ++j) {
    header_ok = header[j] == expected_header[j];
  }
  if (!header_ok) {
    std::string want;
    for (std::size_t j = 0; j < expected_header.size(); ++j) {
      want += (j ? "," : "") + expected_header[j];
    }
    throw InvalidInput("csv: expected header '" + want + "'");
  }
  std::vector<std::vector<double>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != expected_header.size()) {
      throw InvalidInput("csv: line " + std::to_string(number) +
                         ": wrong number of fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) {
      try {
        row.push_back(parse_double(f));
      } catch (const InvalidInput& e) {
        throw InvalidInput("csv: line " + std::to_string(number) + ": " +
                           e.what());
      }
      if (!std::isfinite(row.back())) {
        throw InvalidInput("csv: line " + std::to_string(number) +
                           ": non-finite value");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << contents;
  if (!out) throw InvalidInput("write failed: " + path.string());
}

}  // namespace reslab::io
