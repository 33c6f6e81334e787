#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qdi {

enum class ErrorKind {
  InvalidState,
  NotAState,
  InvalidMoments,
  UnknownMode,
  SamplingExhausted,
  InsufficientStatistics,
  Parse,
  Io,
  InvalidArgument,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace qdi
