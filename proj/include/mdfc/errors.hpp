#pragma once

/// @file errors.hpp
/// @brief Exception types raised by the mixed-dimensional flux-coupling library.

#include <stdexcept>
#include <string>

namespace mdfc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// mesh construction
class NonConformingFracture : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Malformed mesh or config input; carries the 1-based line number (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// mortar coupling
class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateKappaPerp : public Error {
 public:
  using Error::Error;
};

// subdomain discretizations
class ZeroDistance : public Error {
 public:
  using Error::Error;
};

class NonSimplicialGrid : public Error {
 public:
  using Error::Error;
};

class IncompatibleData : public Error {
 public:
  using Error::Error;
};

// coupled system
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class NestedBlockingDomains : public Error {
 public:
  using Error::Error;
};

class MissingOperator : public Error {
 public:
  using Error::Error;
};

class MissingProjection : public Error {
 public:
  using Error::Error;
};

class InterfaceMismatch : public Error {
 public:
  using Error::Error;
};

// linear algebra
class SingularMatrix : public Error {
 public:
  SingularMatrix(long pivot, const std::string& what)
      : Error(what), pivot_(pivot) {}
  /// Index of the failing pivot, or -1 when the failure was detected a posteriori.
  long pivot() const { return pivot_; }

 private:
  long pivot_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, const std::string& what)
      : Error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdfc
