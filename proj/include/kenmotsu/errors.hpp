#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kenmotsu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression source.  offset is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& token, std::size_t offset)
      : ParseError("unknown identifier '" + token + "'", offset), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class ArityError : public ParseError {
 public:
  ArityError(const std::string& function, std::size_t got, std::size_t offset)
      : ParseError("function '" + function + "' takes 1 argument, got " + std::to_string(got),
                   offset) {}
};

// Evaluation left the domain of a function (log of a non-positive value, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, const std::string& subexpression)
      : Error(what + " in '" + subexpression + "'"), subexpression_(subexpression) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

class NotSymmetricError : public Error {
 public:
  using Error::Error;
};

// A geometric hypothesis (orthogonality, slantness, ...) does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario configuration.  field names the offending config key.
class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace kenmotsu
