#pragma once

#include <stdexcept>
#include <string>

namespace packsurf {

/// Base class for all packsurf errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An edge is shared by more than two faces, a vertex link is not a disk or
/// half-disk, or the face list contains duplicates.
class NonManifoldError : public Error {
public:
    using Error::Error;
};

/// A face repeats a vertex index.
class DegenerateFaceError : public Error {
public:
    using Error::Error;
};

/// An edge of an embedding has (near-)zero length.
class DegenerateEdgeError : public Error {
public:
    using Error::Error;
};

/// A face's edge lengths violate the triangle inequality beyond round-off.
class TriangleInequalityError : public Error {
public:
    using Error::Error;
};

/// A conformal coefficient came out negative.
class NegativeEtaError : public Error {
public:
    using Error::Error;
};

/// Two vertex circles do not intersect, so no angle is defined.
class NoIntersectionError : public Error {
public:
    using Error::Error;
};

/// A set of lengths does not form a valid metric for the mesh.
class InvalidMetricError : public Error {
public:
    using Error::Error;
};

/// Input value outside the documented domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Required target values are missing.
class MissingTargetsError : public Error {
public:
    using Error::Error;
};

/// Malformed file content.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace packsurf
