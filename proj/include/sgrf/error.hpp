#pragma once

#include <stdexcept>
#include <string>

namespace sgrf {

/// Broad failure class; the CLI maps each to a distinct exit code.
enum class ErrorKind {
  kUsage,    // invalid arguments or configuration
  kNumeric,  // spectrum, special-function or covariance failure
  kIo,       // file access, format or checksum failure
};

/// Exception carrying a stable machine-readable code such as
/// "spectrum.duplicate_kappa" in addition to the human message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] void throw_usage(std::string code, const std::string& message);
[[noreturn]] void throw_numeric(std::string code, const std::string& message);
[[noreturn]] void throw_io(std::string code, const std::string& message);

}  // namespace sgrf
