#include "sgrf/error.hpp"

#include <utility>

namespace sgrf {

Error::Error(ErrorKind kind, std::string code, const std::string& message)
    : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

void throw_usage(std::string code, const std::string& message) {
  throw Error(ErrorKind::kUsage, std::move(code), message);
}

void throw_numeric(std::string code, const std::string& message) {
  throw Error(ErrorKind::kNumeric, std::move(code), message);
}

void throw_io(std::string code, const std::string& message) {
  throw Error(ErrorKind::kIo, std::move(code), message);
}

}  // namespace sgrf
