#pragma once

#include <stdexcept>
#include <string>

namespace spinbath {

// Base of every error thrown by the library. The CLI maps subclasses onto
// process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error { using Error::Error; };
class BadTrace : public Error { using Error::Error; };
class NotAState : public Error { using Error::Error; };

// Brute-force enumeration refused because 2^N exceeds the configured cap.
class CapExceeded : public Error { using Error::Error; };
class NotUniform : public Error { using Error::Error; };
class EmptyEnsemble : public Error { using Error::Error; };

class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t byte, const std::string& what)
      : Error("parse error at byte " + std::to_string(byte) + ": " + what), byte_(byte) {}
  std::size_t byte() const noexcept { return byte_; }

 private:
  std::size_t byte_;
};

class UnknownPreset : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

}  // namespace spinbath
