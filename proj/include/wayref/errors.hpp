#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wayref {

// Malformed input file content. `line` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query outside the covered kilometer range of some geometry.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point too far from the waterway axis to be kilometerized.
class OutOfCorridorError : public CoverageError {
 public:
  OutOfCorridorError(const std::string& what, double nearest_km)
      : CoverageError(what), nearest_km_(nearest_km) {}
  double nearest_km() const noexcept { return nearest_km_; }

 private:
  double nearest_km_;
};

}  // namespace wayref
