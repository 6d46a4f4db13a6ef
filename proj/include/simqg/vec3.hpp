#pragma once

#include <cmath>
#include <algorithm>

namespace simqg {

/// Plain 3-vector. Momenta, accelerations and directions are all Vec3;
/// the recoil axis is conventionally z.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    static constexpr Vec3 zero() { return {0.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr double norm2() const { return dot(*this); }

    /// Scaled Euclidean norm; avoids over/underflow for extreme magnitudes.
    double norm() const {
        const double m = std::max({std::abs(x), std::abs(y), std::abs(z)});
        if (m == 0.0) return 0.0;
        const double xs = x / m, ys = y / m, zs = z / m;
        return m * std::sqrt(xs * xs + ys * ys + zs * zs);
    }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// |p + dp| − |p| without catastrophic cancellation, via
/// (2 p·dp + |dp|²) / (|p+dp| + |p|). Exact rearrangement, valid whenever
/// the denominator is nonzero; returns 0 when both vectors vanish.
inline double norm_shift_diff(const Vec3& p, const Vec3& dp) {
    const double a = (p + dp).norm();
    const double b = p.norm();
    const double denom = a + b;
    if (denom == 0.0) return 0.0;
    return (2.0 * p.dot(dp) + dp.norm2()) / denom;
}

} // namespace simqg
