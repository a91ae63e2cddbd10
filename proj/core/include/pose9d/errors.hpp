#pragma once

#include <stdexcept>
#include <string>

namespace pose9d {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Point or solution has non-positive depth along the optical axis.
class BehindCameraError : public Error {
 public:
  using Error::Error;
};

// No valid pixels / no points to work with.
class EmptyCloudError : public Error {
 public:
  using Error::Error;
};

// Keypoint configuration does not admit a pose solution.
class DegenerateConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidMeshError : public Error {
 public:
  using Error::Error;
};

// Malformed input file content; carries a 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, long line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Well-formed input that violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Prediction/ground-truth records that cannot be paired.
class MatchingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pose9d
