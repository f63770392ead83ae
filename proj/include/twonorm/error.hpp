#pragma once

#include <stdexcept>
#include <string>

namespace twonorm {

enum class ErrorKind {
  InvalidSize,
  IncompatibleGrid,
  Parse,
  Domain,
  SingularGram,
  DegenerateInput,
  UnknownSuite,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace twonorm
