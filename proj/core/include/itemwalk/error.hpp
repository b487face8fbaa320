#pragma once

#include <stdexcept>
#include <string>

namespace itemwalk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the path and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Invalid argument values (density out of range, zero walk length, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Semantically invalid data: empty corpus, unknown token, divergence, ...
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace itemwalk
