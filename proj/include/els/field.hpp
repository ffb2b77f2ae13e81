#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "els/errors.hpp"
#include "els/grid.hpp"
#include "els/linalg.hpp"

namespace els {

/// Collocation values of an NC-component field, component-major: all of
/// component 0 (row major, idx = iy*n + ix), then component 1, and so on.
template <int NC>
struct Field {
    static_assert(NC >= 1);
    Grid grid;
    std::vector<double> data;

    Field() = default;
    explicit Field(Grid g) : grid(g), data(static_cast<std::size_t>(NC) * g.size(), 0.0) {}

    static constexpr int components = NC;
    std::size_t points() const { return grid.size(); }

    double* comp(int c) { return data.data() + static_cast<std::size_t>(c) * grid.size(); }
    const double* comp(int c) const { return data.data() + static_cast<std::size_t>(c) * grid.size(); }

    double& at(int c, std::size_t p) { return data[static_cast<std::size_t>(c) * grid.size() + p]; }
    double at(int c, std::size_t p) const { return data[static_cast<std::size_t>(c) * grid.size() + p]; }

    bool finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

using ScalarField = Field<1>;
using VectorField2 = Field<2>;   ///< in-plane vectors (velocity, lifts)
using DirectorField = Field<3>;  ///< three director components over the 2D grid
using TensorField22 = Field<4>;  ///< 2x2 tensors, component idx = 2*i + j
using TensorField32 = Field<6>;  ///< 3x2 tensors (director gradients), idx = 2*m + j
using TensorField222 = Field<8>; ///< gradients of 2x2 tensors, idx = (2*i + j)*2 + k

inline Vec2 vec2_at(const VectorField2& f, std::size_t p) { return {f.at(0, p), f.at(1, p)}; }
inline void set_vec2(VectorField2& f, std::size_t p, Vec2 v) {
    f.at(0, p) = v.x;
    f.at(1, p) = v.y;
}

inline Vec3 vec3_at(const DirectorField& f, std::size_t p) {
    return {f.at(0, p), f.at(1, p), f.at(2, p)};
}
inline void set_vec3(DirectorField& f, std::size_t p, Vec3 v) {
    f.at(0, p) = v.x;
    f.at(1, p) = v.y;
    f.at(2, p) = v.z;
}

inline Mat2 mat2_at(const TensorField22& f, std::size_t p) {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = f.at(2 * i + j, p);
    return m;
}
inline void set_mat2(TensorField22& f, std::size_t p, const Mat2& m) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) f.at(2 * i + j, p) = m(i, j);
}

inline Mat32 mat32_at(const TensorField32& f, std::size_t p) {
    Mat32 g;
    for (int m = 0; m < 3; ++m)
        for (int j = 0; j < 2; ++j) g(m, j) = f.at(2 * m + j, p);
    return g;
}
inline void set_mat32(TensorField32& f, std::size_t p, const Mat32& g) {
    for (int m = 0; m < 3; ++m)
        for (int j = 0; j < 2; ++j) f.at(2 * m + j, p) = g(m, j);
}

template <int NC>
void require_finite(const Field<NC>& f, const char* where) {
    if (!f.finite()) throw NonFinite(std::string(where) + ": field contains NaN or inf");
}

/// Largest pointwise deviation of |d| from 1.
inline double max_unit_deviation(const DirectorField& d) {
    double worst = 0.0;
    for (std::size_t p = 0; p < d.points(); ++p)
        worst = std::max(worst, std::abs(norm(vec3_at(d, p)) - 1.0));
    return worst;
}

// Input acceptance tolerance: fields may arrive from files or from steps taken
// between renormalizations, so a little slack beyond the freshly projected
// 1e-15 level is allowed, but anything past 1e-6 is treated as misuse.
inline void require_unit_director(const DirectorField& d, const char* where, double tol = 1e-6) {
    const double dev = max_unit_deviation(d);
    if (dev > tol)
        throw UnnormalizedDirector(std::string(where) + ": max | |d|-1 | = " + std::to_string(dev));
}

/// Velocity + director state at one instant.
struct State {
    VectorField2 u;
    DirectorField d;
    double t = 0.0;
};

} // namespace els
