#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roofflop {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid root-system data, non-dominant weights handed to operations that need them.
class RootSystemError : public Error {
 public:
  using Error::Error;
};

/// Unknown space or symbol, missing restriction path, inconsistent catalog entry.
class CatalogError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a bundle expression or proof script. `offset` is a byte offset
/// into the parsed text (for scripts: into the offending line).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset, std::size_t line = 0)
      : Error(msg), offset_(offset), line_(line) {}
  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t offset_;
  std::size_t line_;
};

/// A mutation step whose required vanishing did not hold (or was not determined).
class StepRejected : public Error {
 public:
  using Error::Error;
};

}  // namespace roofflop
