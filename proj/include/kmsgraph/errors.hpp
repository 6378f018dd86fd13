#pragma once

#include <stdexcept>
#include <string>

namespace kmsgraph {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An input document violates the graph schema (malformed JSON, duplicate
/// identifiers, dangling endpoints, unknown keys).  CLI exit code 2.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the admissible range of the requested
/// construction: inverse temperature at or below the critical value,
/// a measure that is not subinvariant, a graph shape that a construction
/// does not cover, or a representation basis larger than the cap.
/// CLI exit code 3.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed.  Signals a bug or a tolerance breach,
/// never bad user input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kmsgraph
