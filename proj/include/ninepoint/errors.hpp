#pragma once

#include <stdexcept>
#include <string>

namespace ninepoint {

/// Thrown when a pivot collapses during LU factorization.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a local moment system cannot be solved for a cell.
class DegenerateGeometryError : public std::runtime_error {
public:
    explicit DegenerateGeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a problem exceeds the dense-mode size cap.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an input file does not match the expected JSON schema.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ninepoint
