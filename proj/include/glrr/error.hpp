#pragma once

#include <stdexcept>
#include <string>

namespace glrr {

// Base class for every error raised by the library. `stage` is filled in by
// the pipeline driver so a failure can be traced to the step that raised it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what), message_(what) {}

  const char* what() const noexcept override { return message_.c_str(); }

  const std::string& stage() const { return stage_; }

  void set_stage(const std::string& stage) {
    if (!stage_.empty()) return;
    stage_ = stage;
    message_ = stage + ": " + message_;
  }

 private:
  std::string message_;
  std::string stage_;
};

class DimensionError : public Error {
  using Error::Error;
};

class RankDeficiencyError : public Error {
  using Error::Error;
};

class ParameterError : public Error {
  using Error::Error;
};

class InputError : public Error {
  using Error::Error;
};

class NumericalError : public Error {
  using Error::Error;
};

class FormatError : public Error {
  using Error::Error;
};

class ConfigError : public Error {
  using Error::Error;
};

}  // namespace glrr
