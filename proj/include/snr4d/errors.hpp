#pragma once

#include <stdexcept>
#include <string>

namespace snr4d {

// All failures surface as a typed exception carrying a stable category
// token. The CLI maps the category to its exit code and prints it, so
// scripts can dispatch on it without parsing prose.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(category + ": " + message), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

struct FormatError : Error {
  explicit FormatError(const std::string& msg) : Error("format_error", msg) {}
};

struct LabelingError : Error {
  explicit LabelingError(const std::string& msg) : Error("labeling_error", msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config_error", msg) {}
};

// Raised when propagation produces a non-finite sample; carries the global
// split-step index at which the blow-up was detected.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& msg, long step_index)
      : Error("numerical_error", msg + " (step " + std::to_string(step_index) + ")"),
        step_index_(step_index) {}

  long step_index() const noexcept { return step_index_; }

 private:
  long step_index_;
};

struct EstimatorError : Error {
  explicit EstimatorError(const std::string& msg) : Error("estimator_error", msg) {}
};

struct CalibrationError : Error {
  explicit CalibrationError(const std::string& msg) : Error("calibration_error", msg) {}
};

struct SolverError : Error {
  explicit SolverError(const std::string& msg) : Error("solver_error", msg) {}
};

struct ReachError : Error {
  explicit ReachError(const std::string& msg) : Error("reach_error", msg) {}
};

}  // namespace snr4d
