#ifndef INTENSIO_ERROR_HPP
#define INTENSIO_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace intensio {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed term or formula text. `position` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A name or construct used at the wrong sort (term vs formula).
class SortError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Unbound variable, operator outside the theory, or an ill-formed model.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap would be exceeded. Never a silent truncation.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A structured-text document that does not match its schema.
class DocumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace intensio

#endif  // INTENSIO_ERROR_HPP
