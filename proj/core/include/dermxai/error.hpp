// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DERMXAI_ERROR_HPP_
#define DERMXAI_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace dermxai {

/// Failure class, used to pick the process exit code in the CLI:
/// Validation -> 1, Io -> 2.
enum class ErrorKind { Validation, Io };

/// All library errors are thrown as Error. `code()` is a stable
/// machine-readable identifier (e.g. "duplicate_annotation"); `what()`
/// carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void throw_validation(const std::string& code,
                                          const std::string& message) {
  throw Error(ErrorKind::Validation, code, message);
}

[[noreturn]] inline void throw_io(const std::string& code,
                                  const std::string& message) {
  throw Error(ErrorKind::Io, code, message);
}

}  // namespace dermxai

#endif  // DERMXAI_ERROR_HPP_
