#pragma once

#include <stdexcept>
#include <string>

namespace argviz {

enum class ErrorKind {
  invalid_argument,
  parse,
  io,
  singular_matrix,
  divergence,
  stale_cache,
  unavailable,
};

// All library failures are reported through this one exception type; the
// kind is what the C boundary turns into a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::invalid_argument, message);
}

}  // namespace argviz
