#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cvd {

// Category drives the CLI exit code and the HTTP status class.
enum class ErrorKind { usage = 1, io = 2, validation = 3, internal = 4 };

/// Error carrying a stable machine-readable reason code and, where it
/// applies, the name of the offending field or flag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message,
        std::string field = {})
      : std::runtime_error(message),
        kind_(kind),
        code_(std::move(code)),
        field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

  int exit_code() const noexcept { return static_cast<int>(kind_); }

  int http_status() const noexcept {
    return kind_ == ErrorKind::internal ? 500 : 400;
  }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string field_;
};

inline Error validation_error(std::string code, const std::string& message,
                              std::string field = {}) {
  return Error(ErrorKind::validation, std::move(code), message, std::move(field));
}

}  // namespace cvd
