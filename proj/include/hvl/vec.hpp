// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace hvl {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHalfPi = 0.5 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double xx, double yy, double zz) : x(xx), y(yy), z(zz) {}
    explicit Vec3(double s) : x(s), y(s), z(s) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(const Vec3& o) const { return {x * o.x, y * o.y, z * o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    double maxComponent() const { return std::max(x, std::max(y, z)); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double lengthSquared(const Vec3& v) { return dot(v, v); }
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalize(const Vec3& v) {
    double len = length(v);
    return len > 0.0 ? v / len : Vec3(0.0, 0.0, 0.0);
}

inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

inline double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Color alias; channel math mirrors Vec3.
using Rgb = Vec3;

inline double luminance709(const Rgb& c) {
    return 0.2126 * c.x + 0.7152 * c.y + 0.0722 * c.z;
}

// Right-handed orthonormal frame with n as the local +z axis.
struct Frame {
    Vec3 t, b, n;

    static Frame fromZ(const Vec3& n) {
        // Duff et al., branchless ONB construction.
        Frame f;
        f.n = n;
        double sign = std::copysign(1.0, n.z);
        double a = -1.0 / (sign + n.z);
        double bb = n.x * n.y * a;
        f.t = Vec3(1.0 + sign * n.x * n.x * a, sign * bb, -sign * n.x);
        f.b = Vec3(bb, sign + n.y * n.y * a, -n.y);
        return f;
    }

    // Frame with local z = n and v lying in the xz half-plane (positive x).
    // Falls back to an arbitrary tangent when v is parallel to n.
    static Frame fromZWithX(const Vec3& n, const Vec3& v) {
        Vec3 t = v - n * dot(v, n);
        double l2 = lengthSquared(t);
        if (l2 < 1e-24) return fromZ(n);
        Frame f;
        f.n = n;
        f.t = t / std::sqrt(l2);
        f.b = cross(n, f.t);
        return f;
    }

    Vec3 toLocal(const Vec3& v) const { return {dot(v, t), dot(v, b), dot(v, n)}; }
    Vec3 toWorld(const Vec3& v) const { return t * v.x + b * v.y + n * v.z; }
};

}  // namespace hvl
