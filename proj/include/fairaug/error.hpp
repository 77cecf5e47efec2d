#pragma once

#include <stdexcept>
#include <string>

namespace fairaug {

// Base for every error the library reports. The CLI maps these to exit
// code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (bad CSV row, unparsable number).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data-model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Image bytes that are not a decodable PNG/JPEG.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Numerically undefined result (constant series, empty class, zero mass).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairaug
