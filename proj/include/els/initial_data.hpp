#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "els/field.hpp"
#include "els/oseen_frank.hpp"
#include "els/spectral.hpp"

namespace els {

struct InitialDataConfig {
    std::string generator = "random_smooth";
    double amplitude = 0.1;
    int cutoff = 2; ///< largest wavenumber (in units of 2 pi / length) the synthesis excites
    std::uint64_t seed = 1;
    std::array<double, 3> direction = {1.0, 0.0, 0.6}; ///< base director, normalized before use
};

namespace synth {

/// Uniform double in [0,1) from the top 53 bits; fully specified by the
/// generator, so the draw sequence is identical on every platform and run.
inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& rng) {
    const double u1 = u01(rng), u2 = u01(rng);
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * M_PI * u2);
}

/// Random band-limited scalar: a sum of cosines over all modes with
/// |kx|,|ky| <= cutoff, Gaussian amplitudes with a mild radial decay, fixed
/// iteration order. The same seed gives the same continuous function at every
/// resolution, which lets refinement studies compare like with like.
inline ScalarField scalar(const Grid& g, int cutoff, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ScalarField f(g);
    const double base = 2.0 * M_PI / g.length;
    for (int ky = 0; ky <= cutoff; ++ky) {
        for (int kx = -cutoff; kx <= cutoff; ++kx) {
            if (ky == 0 && kx <= 0) continue; // half-space: one representative per conjugate pair
            const double k2 = static_cast<double>(kx * kx + ky * ky);
            const double amp = gaussian(rng) * std::exp(-k2 / (2.0 * cutoff * cutoff));
            const double phase = 2.0 * M_PI * u01(rng);
            const double wx = base * kx, wy = base * ky;
            const double h = g.spacing();
            for (std::size_t iy = 0; iy < g.n; ++iy)
                for (std::size_t ix = 0; ix < g.n; ++ix)
                    f.at(0, iy * g.n + ix) +=
                        amp * std::cos(wx * (ix * h) + wy * (iy * h) + phase);
        }
    }
    return f;
}

} // namespace synth

/// Divergence-free random velocity: the perpendicular gradient of a random
/// stream function, scaled so its largest pointwise magnitude is `amplitude`.
inline VectorField2 random_divfree_velocity(const Grid& g, double amplitude, int cutoff,
                                            std::uint64_t seed) {
    const ScalarField psi = synth::scalar(g, cutoff, seed);
    const VectorField2 gpsi = gradient(psi);
    VectorField2 u(g);
    for (std::size_t p = 0; p < u.points(); ++p)
        set_vec2(u, p, {gpsi.at(1, p), -gpsi.at(0, p)});
    const double m = max_abs(u);
    if (m > 0.0) {
        const double s = amplitude / m;
        for (double& v : u.data) v *= s;
    }
    return u;
}

/// Unit director: a base direction plus a random smooth 3-vector of pointwise
/// magnitude up to `amplitude`, renormalized.
inline DirectorField random_smooth_director(const Grid& g, std::array<double, 3> direction,
                                            double amplitude, int cutoff, std::uint64_t seed) {
    Vec3 b{direction[0], direction[1], direction[2]};
    const double bn = norm(b);
    if (!(bn > 0.0)) throw Error("initial data: direction must be nonzero");
    b = b * (1.0 / bn);

    DirectorField d(g);
    ScalarField comps[3] = {synth::scalar(g, cutoff, seed ^ 0x9e3779b97f4a7c15ull),
                            synth::scalar(g, cutoff, seed ^ 0xbf58476d1ce4e5b9ull),
                            synth::scalar(g, cutoff, seed ^ 0x94d049bb133111ebull)};
    double m = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Vec3 v{comps[0].at(0, p), comps[1].at(0, p), comps[2].at(0, p)};
        m = std::max(m, norm(v));
    }
    const double s = (m > 0.0) ? amplitude / m : 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Vec3 v{comps[0].at(0, p), comps[1].at(0, p), comps[2].at(0, p)};
        set_vec3(d, p, b + v * s);
    }
    renormalize(d);
    return d;
}

/// Tangential pointwise projection v - (d.v) d, used to perturb a director
/// without leaving its tangent plane at first order.
inline DirectorField tangential_part(const DirectorField& v, const DirectorField& d) {
    require_same_grid(v.grid, d.grid, "tangential_part");
    DirectorField out(v.grid);
    for (std::size_t p = 0; p < v.points(); ++p) {
        const Vec3 dv = vec3_at(d, p), vv = vec3_at(v, p);
        set_vec3(out, p, vv - dv * dot(dv, vv));
    }
    return out;
}

inline State make_initial_state(const Grid& g, const InitialDataConfig& c) {
    State s;
    s.u = VectorField2(g);
    s.d = DirectorField(g);
    s.t = 0.0;

    if (c.generator == "constant_director") {
        Vec3 b{c.direction[0], c.direction[1], c.direction[2]};
        const double bn = norm(b);
        if (!(bn > 0.0)) throw Error("constant_director: direction must be nonzero");
        b = b * (1.0 / bn);
        for (std::size_t p = 0; p < g.size(); ++p) set_vec3(s.d, p, b);
    } else if (c.generator == "twist_profile") {
        // d = (cos th, sin th, 0), th = 2 pi x / length, u = 0. With equal
        // elastic constants this is an exact steady state: the molecular field
        // is parallel to d and the elastic stress is constant.
        const double w = 2.0 * M_PI / g.length, h = g.spacing();
        for (std::size_t iy = 0; iy < g.n; ++iy)
            for (std::size_t ix = 0; ix < g.n; ++ix) {
                const double th = w * (ix * h);
                set_vec3(s.d, iy * g.n + ix, {std::cos(th), std::sin(th), 0.0});
            }
    } else if (c.generator == "random_smooth") {
        s.u = random_divfree_velocity(g, c.amplitude, c.cutoff, c.seed);
        s.d = random_smooth_director(g, c.direction, c.amplitude, c.cutoff, c.seed + 1);
    } else if (c.generator == "taylor_green") {
        const double w = 2.0 * M_PI / g.length, h = g.spacing();
        for (std::size_t iy = 0; iy < g.n; ++iy)
            for (std::size_t ix = 0; ix < g.n; ++ix) {
                const std::size_t p = iy * g.n + ix;
                s.u.at(0, p) = c.amplitude * std::sin(w * ix * h) * std::cos(w * iy * h);
                s.u.at(1, p) = -c.amplitude * std::cos(w * ix * h) * std::sin(w * iy * h);
            }
        Vec3 b{c.direction[0], c.direction[1], c.direction[2]};
        const double bn = norm(b);
        if (!(bn > 0.0)) throw Error("taylor_green: direction must be nonzero");
        b = b * (1.0 / bn);
        for (std::size_t p = 0; p < g.size(); ++p) set_vec3(s.d, p, b);
    } else {
        throw UnknownGenerator("initial data: unknown generator '" + c.generator + "'");
    }
    return s;
}

} // namespace els
