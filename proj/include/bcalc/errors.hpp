#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcalc {

// Root of the library's error hierarchy.
class CalcError : public std::runtime_error {
 public:
  explicit CalcError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical precondition was violated (division by zero, log of a
// non-positive value, standard part of an infinite element, ...).
class DomainError : public CalcError {
 public:
  explicit DomainError(const std::string& what) : CalcError(what) {}
};

// The requested value exists but the chosen backend cannot express it
// (sin of an infinite series element, overflow past double range, ...).
class NotRepresentable : public CalcError {
 public:
  explicit NotRepresentable(const std::string& what) : CalcError(what) {}
};

// The caller misused an interface (wrong variable name, probe outside the
// declared domain, malformed CLI input).
class UsageError : public CalcError {
 public:
  explicit UsageError(const std::string& what) : CalcError(what) {}
};

// Lexical/syntactic failure, with the byte offset of the offending token
// and a description of what was expected there.
class ParseError : public CalcError {
 public:
  ParseError(std::size_t offset, const std::string& expected)
      : CalcError("parse error at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(expected) {}

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace bcalc
