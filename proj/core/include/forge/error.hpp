#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A node's child count disagrees with the declared rank of its symbol.
class MalformedRank : public Error {
 public:
  using Error::Error;
};

class UndeclaredSymbol : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

class ConversionError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)),
        line_(line),
        column_(column),
        detail_(std::move(message)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(const std::string& m, std::size_t line, std::size_t col) {
    return std::to_string(line) + ":" + std::to_string(col) + ": " + m;
  }

  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

}  // namespace forge
