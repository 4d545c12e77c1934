#pragma once

#include <stdexcept>
#include <string>

namespace misosec {

/// Malformed or out-of-contract arguments (dimension mismatch, non-finite data).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mathematically invalid input, e.g. an indefinite matrix where PD is required.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested configuration that the routine does not cover.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A state that the theory rules out was reached (e.g. a zero Charnes-Cooper
/// scale at an optimal point). Indicates a numerical breakdown.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An SDP needed by a routine that returns a plain value did not reach optimality.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File parse failure; the message names the offending field or line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace misosec
