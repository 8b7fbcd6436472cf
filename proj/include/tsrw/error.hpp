#pragma once

#include <stdexcept>
#include <string>

namespace tsrw {

/// Argument outside the mathematical domain of an operation (r <= 0, alpha <= 1
/// for a mean, ...). `code()` is a stable machine-readable tag.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string code, const std::string& what)
      : std::domain_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// A numerical procedure (quadrature, root bracketing, window search) failed to
/// reach its tolerance. Carries the best error estimate that was achieved.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Invalid model / experiment description.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string code, const std::string& what)
      : std::invalid_argument(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace tsrw
