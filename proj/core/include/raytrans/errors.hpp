#pragma once

#include <stdexcept>
#include <string>

namespace raytrans {

// Numerical failures raised by the library. The CLI maps anything derived
// from NumericsError to exit code 3; configuration problems to exit code 2.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : NumericsError {
    using NumericsError::NumericsError;
};
struct SingularLambda : NumericsError {
    using NumericsError::NumericsError;
};
struct DegenerateField : NumericsError {
    using NumericsError::NumericsError;
};
struct NonIntegerWinding : NumericsError {
    using NumericsError::NumericsError;
};
struct ZeroClusterUnresolved : NumericsError {
    using NumericsError::NumericsError;
};
struct GridBoundary : NumericsError {
    using NumericsError::NumericsError;
};
struct SupportViolation : NumericsError {
    using NumericsError::NumericsError;
};
struct GridMismatch : NumericsError {
    using NumericsError::NumericsError;
};
struct TypeHViolation : NumericsError {
    using NumericsError::NumericsError;
};
struct OnCharacteristic : NumericsError {
    using NumericsError::NumericsError;
};
struct NonConvergent : NumericsError {
    using NumericsError::NumericsError;
};

}  // namespace raytrans
