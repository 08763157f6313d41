#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

// Dimension/depth outside the memory guard, too many degrees of freedom for
// a dense oracle, and similar numeric guards.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// An identifier that does not name anything in the system.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed textual input (paths, hex floats).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (p < 2 for the
// norm ratio or the lifted embedding, a cube outside the top cube of a family).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a stated precondition (overlapping partition, bad constants).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Instance file does not match the schema. `path` is a JSON-pointer-like
// location of the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace dyadic
