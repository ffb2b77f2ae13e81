#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "els/field.hpp"
#include "els/grid.hpp"

namespace els {

// Binary state snapshot, version tag "ELS1". Layout (little endian):
//   bytes 0..3   magic "ELS1"
//   u64          n (points per side)
//   f64          domain length
//   f64          time
//   f64 * 2 n^2  velocity, component-major (u^1 plane then u^2), rows y-major
//   f64 * 3 n^2  director, component-major (d^1, d^2, d^3)

namespace detail {

inline void put_u64(std::ofstream& f, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    f.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t get_u64(std::ifstream& f) {
    unsigned char b[8] = {0};
    f.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline void put_f64(std::ofstream& f, double x) {
    std::uint64_t v;
    std::memcpy(&v, &x, 8);
    put_u64(f, v);
}

inline double get_f64(std::ifstream& f) {
    const std::uint64_t v = get_u64(f);
    double x;
    std::memcpy(&x, &v, 8);
    return x;
}

} // namespace detail

inline void write_checkpoint(const std::string& path, const State& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("checkpoint: cannot open '" + path + "' for writing");
    f.write("ELS1", 4);
    detail::put_u64(f, s.u.grid.n);
    detail::put_f64(f, s.u.grid.length);
    detail::put_f64(f, s.t);
    for (double v : s.u.data) detail::put_f64(f, v);
    for (double v : s.d.data) detail::put_f64(f, v);
    if (!f) throw IoError("checkpoint: write failed for '" + path + "'");
}

inline State read_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("checkpoint: cannot open '" + path + "'");
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "ELS1", 4) != 0)
        throw ParseError("checkpoint: bad magic in '" + path + "'");
    const std::uint64_t n = detail::get_u64(f);
    const double length = detail::get_f64(f);
    const double t = detail::get_f64(f);
    if (!f) throw ParseError("checkpoint: truncated header in '" + path + "'");

    const Grid g = Grid::make(static_cast<std::size_t>(n), length);
    State s;
    s.u = VectorField2(g);
    s.d = DirectorField(g);
    s.t = t;
    for (double& v : s.u.data) v = detail::get_f64(f);
    for (double& v : s.d.data) v = detail::get_f64(f);
    if (!f) throw ParseError("checkpoint: truncated payload in '" + path + "'");
    return s;
}

} // namespace els
