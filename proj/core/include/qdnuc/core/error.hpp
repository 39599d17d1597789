#pragma once

#include <stdexcept>
#include <string>

namespace qdnuc {

// Base of every error the library throws. The CLI maps ConfigError to exit
// code 2 and everything else to 3.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error("config", field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : Error("no-convergence", what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class NumericalError : public Error {
 public:
  NumericalError(std::string kind, const std::string& what)
      : Error(std::move(kind), what) {}
};

}  // namespace qdnuc
