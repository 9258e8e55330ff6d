#pragma once

#include <stdexcept>
#include <string>

namespace reslab {

// Malformed arguments, out-of-domain parameters, unreadable input files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The integrator produced a non-finite state.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

// A speed evaluation left [mu1, mu2] while an admissible class was attached.
class AdmissibilityViolation : public std::runtime_error {
 public:
  AdmissibilityViolation(const std::string& what, double time, double value)
      : std::runtime_error(what), time_(time), value_(value) {}
  double time() const noexcept { return time_; }
  double value() const noexcept { return value_; }

 private:
  double time_;
  double value_;
};

}  // namespace reslab
