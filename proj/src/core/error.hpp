#pragma once

#include <stdexcept>
#include <string>

namespace tabguard {

// Error categories; values match the C API status codes and the CLI exit codes
// (0 = ok, 2 = config, 3 = data, 4 = numerical fault, 5 = calibration failure).
enum class ErrorCode : int {
  internal = 1,
  config = 2,
  data = 3,
  numeric = 4,
  calibration = 5,
  protocol = 6,
  invalid_argument = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

[[noreturn]] inline void raise_config(const std::string& m) { raise(ErrorCode::config, m); }
[[noreturn]] inline void raise_data(const std::string& m) { raise(ErrorCode::data, m); }
[[noreturn]] inline void raise_numeric(const std::string& m) { raise(ErrorCode::numeric, m); }
[[noreturn]] inline void raise_calibration(const std::string& m) { raise(ErrorCode::calibration, m); }
[[noreturn]] inline void raise_protocol(const std::string& m) { raise(ErrorCode::protocol, m); }
[[noreturn]] inline void raise_invalid(const std::string& m) { raise(ErrorCode::invalid_argument, m); }
[[noreturn]] inline void raise_internal(const std::string& m) { raise(ErrorCode::internal, m); }

}  // namespace tabguard
