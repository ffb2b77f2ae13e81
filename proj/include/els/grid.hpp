#pragma once

#include <cstddef>
#include <string>

#include "els/errors.hpp"

namespace els {

/// Uniform periodic grid on the square torus [0, length)^2 with n points per side.
/// n is kept a power of two (>= 8) so the transforms stay in their fast paths.
struct Grid {
    std::size_t n = 0;
    double length = 0.0;

    static Grid make(std::size_t n, double length) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw Error("grid: n must be a power of two >= 8, got " + std::to_string(n));
        if (!(length > 0.0))
            throw Error("grid: length must be positive");
        return Grid{n, length};
    }

    std::size_t size() const { return n * n; }
    double spacing() const { return length / static_cast<double>(n); }
    /// Quadrature weight of one collocation cell.
    double cell_area() const { return spacing() * spacing(); }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (a != b)
        throw GridMismatch(std::string(where) + ": grids differ (" + std::to_string(a.n) + " vs " +
                           std::to_string(b.n) + ", length " + std::to_string(a.length) + " vs " +
                           std::to_string(b.length) + ")");
}

} // namespace els
