#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace memguard {

enum class ErrorCode {
  InvalidProfile,
  InvalidMeasurement,
  InvalidInput,
  InvalidConfig,
  Ordering,
  Acquisition,
  InvalidScenario,
  ProtocolViolation,
  Version,
  Corruption,
  NotFound,
  Parse,
  Refused,
  Transport,
  Startup,
  Scan,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so the CLI can map it
// onto its exit-status contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Corruption errors additionally carry the offending 1-based line number.
class CorruptionError : public Error {
 public:
  CorruptionError(std::size_t line, const std::string& what)
      : Error(ErrorCode::Corruption, what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace memguard
