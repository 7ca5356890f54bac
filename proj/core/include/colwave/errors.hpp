#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace colwave {

// Invalid argument / geometric precondition failure (zero covector,
// intersecting cones, window outside box, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: out-of-range parameters, unknown keys, singular
// moment systems at too-low quadrature resolution.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Grid too coarse for the requested regularization parameter.  Carries the
// per-axis shape that would satisfy the guard.
struct ResolutionError : std::runtime_error {
    std::array<int, 4> required_shape{};
    int dim = 0;
    ResolutionError(const std::string& what, std::array<int, 4> shape, int d)
        : std::runtime_error(what), required_shape(shape), dim(d) {}
};

}  // namespace colwave
