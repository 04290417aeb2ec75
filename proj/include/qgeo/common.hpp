#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qgeo {

using cd = std::complex<double>;

inline constexpr double kHbar = 1.0;  // natural units throughout the library
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

/// 2-vector used for positions, displacements and momenta. 1D code paths
/// leave y at zero.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}
    explicit constexpr Vec2(double x_) : x(x_), y(0.0) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr double operator[](int axis) const { return axis == 0 ? x : y; }

    constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }
    /// Counterclockwise rotation by angle (radians).
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
    /// 90-degree counterclockwise rotation.
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Error taxonomy. Callers that violate an operation's preconditions get a
// ContractError (or one of its refinements); runtime numerical trouble maps
// to the step-size / singularity classes.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : ContractError {
    using ContractError::ContractError;
};
struct ResolutionError : ContractError {
    using ContractError::ContractError;
};
struct RangeError : ContractError {
    using ContractError::ContractError;
};
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepSizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double wrap_angle(double a) {
    // Wraps to (-pi, pi].
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

}  // namespace qgeo
