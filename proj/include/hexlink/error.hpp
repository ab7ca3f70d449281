#pragma once

#include <stdexcept>
#include <string>

namespace hexlink {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line/column are 1-based; column 0 means "whole line".
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) +
              (column > 0 ? ":" + std::to_string(column) : std::string{}) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IncompatiblePlacement : public Error {
 public:
  using Error::Error;
};

class NotPresent : public Error {
 public:
  using Error::Error;
};

class InvalidPuzzle : public Error {
 public:
  using Error::Error;
};

}  // namespace hexlink
