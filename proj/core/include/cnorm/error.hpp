#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cnorm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `row()` is 1-based and counts the header as row 1;
/// zero means the error is not tied to a particular row.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t row = 0)
      : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

/// Invalid parameters or an unsupported combination of options.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A fit that cannot be carried out (too few rows, no degrees of freedom).
class NumericError : public Error {
public:
  using Error::Error;
};

}  // namespace cnorm
