#pragma once

#include <stdexcept>
#include <string>

namespace mitofreq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input that is the caller's fault at the domain level: invalid
/// profiles, unknown labels, undefined estimators, unusable distributions.
/// Maps to CLI exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Missing or malformed configuration and data files. CLI exit code 3.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A profile token or coverage spec could not be accepted.
class ParseError : public DomainError {
 public:
  enum class Kind {
    malformed,
    out_of_range,
    reference_base,
    uncertain_call,
    duplicate,
    outside_coverage,
    bad_coverage,
  };

  ParseError(Kind kind, std::string token, const std::string& what)
      : DomainError(what), kind_(kind), token_(std::move(token)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& token() const noexcept { return token_; }

 private:
  Kind kind_;
  std::string token_;
};

/// The profile shares no covered position with any motif.
class UnclassifiableError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace mitofreq
