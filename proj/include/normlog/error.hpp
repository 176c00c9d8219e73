#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normlog {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised by the formula parser; `position` is a 0-based byte offset.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class ModelError : public Error {
public:
  using Error::Error;
};

class EvalError : public Error {
public:
  using Error::Error;
};

class NormError : public Error {
public:
  using Error::Error;
};

} // namespace normlog
