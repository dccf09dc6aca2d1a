#pragma once

#include <stdexcept>
#include <string>

namespace dante {

/// Input outside the domain of an operation (non-positive factors,
/// unordered shapes where order is required, parameters out of range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A closed-form or isotropic evaluation was asked for a time at or past
/// the collapse of the manifold.
class CollapseReached : public DomainError {
public:
    using DomainError::DomainError;
};

/// Shape on the excluded degenerate edge a = 0 of the shape triangle.
class DegenerateShape : public DomainError {
public:
    using DomainError::DomainError;
};

/// Point where the (rho, tau) map is singular (y = 1, vertex C).
class SingularMap : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace dante
