#pragma once

#include <stdexcept>
#include <string>

namespace tabhol {

/// A construction needed a de Bruijn index beyond the 0..255 window.
class DepthLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ill-typed construction request (application, equation, substitution).
class TypeMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tabhol
