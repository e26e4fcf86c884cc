#pragma once

#include <stdexcept>
#include <string>

namespace mxf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition or API contract was violated by the caller.
class ContractError : public Error {
public:
  using Error::Error;
};

/// Malformed input file (VTK reader).
class FormatError : public Error {
public:
  using Error::Error;
};

/// Malformed parameter file.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A parameter path does not exist.
class LookupError : public Error {
public:
  using Error::Error;
};

/// A parameter value cannot be converted to the requested type.
class TypeError : public Error {
public:
  using Error::Error;
};

/// An iterative solver failed to reach its tolerance.
class SolverError : public Error {
public:
  using Error::Error;
};

/// Degenerate geometry (zero-measure cell, ...).
class GeometryError : public Error {
public:
  using Error::Error;
};

/// A tag/selection matched nothing.
class EmptySelectionError : public Error {
public:
  using Error::Error;
};

/// A point could not be bound to a mesh vertex.
class BindingError : public Error {
public:
  using Error::Error;
};

/// Rescaling denominator vanished at some target.
class RescalingError : public Error {
public:
  using Error::Error;
};

/// Two interfaces share no vertices within tolerance.
class DisjointInterfaceError : public Error {
public:
  using Error::Error;
};

/// A transfer was requested onto unmapped vertices.
class CoverageError : public Error {
public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Checkpoint file structure does not match the registry.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Checkpoint file failed its integrity check.
class CorruptionError : public Error {
public:
  using Error::Error;
};

} // namespace mxf
