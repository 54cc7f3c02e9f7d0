#pragma once

#include <stdexcept>
#include <string>

namespace flatdetect {

// Base class for every error raised by the library. The C API maps each
// subclass onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (presentations, expressions, forms, cover files).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Structurally valid input that violates a precondition (sizes, labels, groups).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A numerical or exact check that the construction was supposed to satisfy did not hold.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace flatdetect
