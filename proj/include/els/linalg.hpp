#pragma once

#include <array>
#include <cmath>

namespace els {

// Small fixed-size values for pointwise kernels. Conventions used throughout:
//   (grad v)_{ij} = d v^i / d x_j,   (div T)_i = d T_{ij} / d x_j,
//   X : Y = X_{ij} Y_{ij},           (x (x) y)_{ij} = x_i y_j,
//   (M v)_i = M_{ij} v_j.

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// 2x2 matrix, row major: m[i][j].
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{{{0.0, 0.0}, {0.0, 0.0}}};
    double operator()(int i, int j) const { return m[i][j]; }
    double& operator()(int i, int j) { return m[i][j]; }
    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = m[i][j] + o(i, j);
        return r;
    }
    Mat2 operator-(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = m[i][j] - o(i, j);
        return r;
    }
    Mat2 operator*(double s) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = m[i][j] * s;
        return r;
    }
};

inline Mat2 outer(Vec2 a, Vec2 b) {
    Mat2 r;
    r(0, 0) = a.x * b.x;
    r(0, 1) = a.x * b.y;
    r(1, 0) = a.y * b.x;
    r(1, 1) = a.y * b.y;
    return r;
}
inline Vec2 mul(const Mat2& m, Vec2 v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y, m(1, 0) * v.x + m(1, 1) * v.y};
}
inline double contract(const Mat2& a, const Mat2& b) {
    return a(0, 0) * b(0, 0) + a(0, 1) * b(0, 1) + a(1, 0) * b(1, 0) + a(1, 1) * b(1, 1);
}
inline double trace(const Mat2& m) { return m(0, 0) + m(1, 1); }
inline double frobenius(const Mat2& m) { return std::sqrt(contract(m, m)); }
inline Mat2 sym(const Mat2& m) {
    Mat2 r;
    r(0, 0) = m(0, 0);
    r(1, 1) = m(1, 1);
    r(0, 1) = r(1, 0) = 0.5 * (m(0, 1) + m(1, 0));
    return r;
}
inline Mat2 skew(const Mat2& m) {
    Mat2 r;
    r(0, 0) = r(1, 1) = 0.0;
    r(0, 1) = 0.5 * (m(0, 1) - m(1, 0));
    r(1, 0) = -r(0, 1);
    return r;
}

/// 3x2 matrix of director gradients: g(m, j) = d d^m / d x_j.
struct Mat32 {
    std::array<double, 6> a{};
    double operator()(int m, int j) const { return a[2 * m + j]; }
    double& operator()(int m, int j) { return a[2 * m + j]; }
};

} // namespace els
