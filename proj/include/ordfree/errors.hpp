#pragma once

#include <stdexcept>
#include <string>

namespace ordfree {

/// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Well-formed input outside the decidable fragment of an operation.
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

/// Violated operation precondition (semantic error, not syntax).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ordfree
