#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sumoviz {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed XML or an unreadable input document.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Well-formed input that violates a data-model invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class AssetError : public Error {
public:
  using Error::Error;
};

class RenderError : public Error {
public:
  using Error::Error;
};

}  // namespace sumoviz
