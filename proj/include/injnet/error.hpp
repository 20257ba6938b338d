#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace injnet {

// Base for every error raised by the library. Argument and range violations
// use std::invalid_argument / std::out_of_range directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedFile : public Error {
 public:
  MalformedFile(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

class InfeasibleGeometry : public Error {
 public:
  using Error::Error;
};

class DegenerateScenario : public Error {
 public:
  using Error::Error;
};

}  // namespace injnet
