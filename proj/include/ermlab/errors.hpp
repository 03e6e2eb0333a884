#ifndef ERMLAB_ERRORS_HPP
#define ERMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ermlab {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

class NonSymmetric : public Error {
 public:
  using Error::Error;
};

class IndefiniteMatrix : public Error {
 public:
  using Error::Error;
};

class ScaleOutOfRange : public Error {
 public:
  using Error::Error;
};

class NonPositiveRadius : public Error {
 public:
  using Error::Error;
};

class TooFewAtoms : public Error {
 public:
  using Error::Error;
};

class TooManySigns : public Error {
 public:
  using Error::Error;
};

class BadDelta : public Error {
 public:
  using Error::Error;
};

class InsufficientTrials : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Configuration-file errors carry the offending line when known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = -1)
      : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownKey : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace ermlab

#endif  // ERMLAB_ERRORS_HPP
