#pragma once

#include <cmath>

#include "ergokit/errors.hpp"

namespace ergokit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec2 midpoint(const Vec2& a, const Vec2& b) {
    return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5};
}
inline Vec3 midpoint(const Vec3& a, const Vec3& b) {
    return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5, (a.z + b.z) * 0.5};
}

// In-plane rotation by degrees, counterclockwise.
inline Vec2 rotate_ccw(const Vec2& v, double degrees) {
    const double rad = degrees * M_PI / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    return {v.x * c - v.y * s, v.x * s + v.y * c};
}

inline Vec3 rotate_about_x(const Vec3& v, double degrees) {
    const double rad = degrees * M_PI / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    return {v.x, v.y * c - v.z * s, v.y * s + v.z * c};
}

inline Vec3 rotate_about_y(const Vec3& v, double degrees) {
    const double rad = degrees * M_PI / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    return {v.x * c + v.z * s, v.y, -v.x * s + v.z * c};
}

inline Vec3 rotate_about_z(const Vec3& v, double degrees) {
    const double rad = degrees * M_PI / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    return {v.x * c - v.y * s, v.x * s + v.y * c, v.z};
}

// Rodrigues rotation of v about a unit axis, by degrees.
inline Vec3 rotate_about_axis(const Vec3& v, const Vec3& axis, double degrees) {
    const double rad = degrees * M_PI / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const Vec3 cross{axis.y * v.z - axis.z * v.y,
                     axis.z * v.x - axis.x * v.z,
                     axis.x * v.y - axis.y * v.x};
    const double k = axis.dot(v) * (1.0 - c);
    return {v.x * c + cross.x * s + axis.x * k,
            v.y * c + cross.y * s + axis.y * k,
            v.z * c + cross.z * s + axis.z * k};
}

constexpr double kDegenerateRayLength = 1e-9;

namespace detail {

inline double cross_norm(const Vec2& u, const Vec2& v) {
    return std::abs(u.x * v.y - u.y * v.x);
}
inline double cross_norm(const Vec3& u, const Vec3& v) {
    const double cx = u.y * v.z - u.z * v.y;
    const double cy = u.z * v.x - u.x * v.z;
    const double cz = u.x * v.y - u.y * v.x;
    return std::sqrt(cx * cx + cy * cy + cz * cz);
}

// arccos of the clamped normalized dot product, evaluated in the atan2
// form so near-collinear triples keep full precision instead of the
// sqrt(eps) loss of a bare acos.
template <typename V>
double angle_at_vertex_impl(const V& a, const V& b, const V& c) {
    const V u = a - b;
    const V v = c - b;
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu <= kDegenerateRayLength || nv <= kDegenerateRayLength) {
        throw DegenerateTriple("angle vertex coincides with a ray endpoint");
    }
    return std::atan2(cross_norm(u, v), u.dot(v)) * 180.0 / M_PI;
}

}  // namespace detail

// Interior angle at vertex b between rays b->a and b->c, in [0, 180] degrees.
inline double angle_at_vertex(const Vec2& a, const Vec2& b, const Vec2& c) {
    return detail::angle_at_vertex_impl(a, b, c);
}
inline double angle_at_vertex(const Vec3& a, const Vec3& b, const Vec3& c) {
    return detail::angle_at_vertex_impl(a, b, c);
}

}  // namespace ergokit
