#pragma once

#include <stdexcept>
#include <string>

namespace ncmf {

/// Base class for all library errors.  Input/shape problems derive from
/// InputError, failed mathematical preconditions from DomainError.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct DivisionByZero : DomainError {
    DivisionByZero() : DomainError("division by zero") {}
};

struct MixedFields : InputError {
    MixedFields() : InputError("operands belong to different fields") {}
};

struct MixedAlgebras : InputError {
    MixedAlgebras() : InputError("operands belong to different algebras") {}
};

struct MixedContexts : InputError {
    MixedContexts() : InputError("objects live over different algebras or different f") {}
};

struct InhomogeneousInput : InputError {
    InhomogeneousInput() : InputError("input is not homogeneous") {}
};

struct BadAlpha : InputError {
    BadAlpha() : InputError("alpha matrix violates alpha_ij * alpha_ji = 1") {}
};

struct RelationNotPreserved : DomainError {
    RelationNotPreserved() : DomainError("map does not preserve the defining relations") {}
};

struct NotNormal : DomainError {
    NotNormal() : DomainError("element is not normal (no normalizing automorphism)") {}
};

struct NotRegularInWindow : DomainError {
    NotRegularInWindow() : DomainError("element is not regular within the degree window") {}
};

struct ShiftMismatch : InputError {
    ShiftMismatch() : InputError("shift vectors are not composable") {}
};

struct NoSolution : DomainError {
    NoSolution() : DomainError("linear system has no solution") {}
};

struct WindowTooSmall : DomainError {
    WindowTooSmall() : DomainError("degree window too small to answer") {}
};

struct ProductNotF : DomainError {
    ProductNotF() : DomainError("product of the two maps is not f times the identity") {}
};

struct NotInjectiveInWindow : DomainError {
    NotInjectiveInWindow() : DomainError("map is not injective within the degree window") {}
};

struct NotScalarMultiple : DomainError {
    NotScalarMultiple() : DomainError("product is not a nonzero scalar multiple of f") {}
};

struct SquareDoesNotCommute : DomainError {
    SquareDoesNotCommute() : DomainError("defining square of the morphism does not commute") {}
};

struct NotSquare : DomainError {
    NotSquare() : DomainError("presentation is not square (rank F != rank G)") {}
};

struct FNotInImage : DomainError {
    FNotInImage() : DomainError("f * F is not contained in the image of the presentation") {}
};

struct NotEigenvector : DomainError {
    NotEigenvector() : DomainError("sigma(f) is not a scalar multiple of f") {}
};

struct NoRootInField : DomainError {
    NoRootInField() : DomainError("required root does not exist in the field") {}
};

struct NotFixed : DomainError {
    NotFixed() : DomainError("sigma does not fix f") {}
};

struct VerificationFailed : DomainError {
    VerificationFailed() : DomainError("factorization verification failed") {}
};

struct PointOnXn : DomainError {
    PointOnXn() : DomainError("orbit meets V(x_n); no factorization lift exists") {}
};

struct NotCopointHere : DomainError {
    NotCopointHere() : DomainError("tau step failed: module is not co-point at this step") {}
};

struct SyntaxError : InputError {
    std::size_t position;
    SyntaxError(std::size_t pos, const std::string& what)
        : InputError("syntax error at position " + std::to_string(pos) + ": " + what),
          position(pos) {}
};

struct UnknownGenerator : InputError {
    UnknownGenerator(const std::string& name)
        : InputError("unknown generator: " + name) {}
};

} // namespace ncmf
