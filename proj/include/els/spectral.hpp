#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "els/fft.hpp"
#include "els/field.hpp"

namespace els {

inline constexpr double kResidualFloor = 1e-30;

namespace detail {

/// In-place d/dx_dir. The Nyquist column/row is zeroed: its wavenumber sign is
/// ambiguous and keeping it would break the conjugate symmetry of an odd
/// derivative of real data.
template <int NC>
void derivative_in_place(Spectral<NC>& s, int dir) {
    const double scale = 2.0 * M_PI / s.grid.length;
    const long nyq = static_cast<long>(s.grid.n / 2);
    for (int c = 0; c < NC; ++c) {
        auto* a = s.comp(c);
        for_each_mode(s.grid, [&](std::size_t idx, long kx, long ky) {
            const long k = (dir == 0) ? kx : ky;
            if (k == nyq || (dir == 1 && ky == -nyq)) {
                a[idx] = 0.0;
                return;
            }
            a[idx] *= std::complex<double>(0.0, scale * static_cast<double>(k));
        });
    }
}

template <int NC, typename Sym>
void apply_real_symbol(Spectral<NC>& s, Sym&& sym) {
    const double scale = 2.0 * M_PI / s.grid.length;
    for (int c = 0; c < NC; ++c) {
        auto* a = s.comp(c);
        for_each_mode(s.grid, [&](std::size_t idx, long kx, long ky) {
            a[idx] *= sym(scale * static_cast<double>(kx), scale * static_cast<double>(ky));
        });
    }
}

} // namespace detail

/// Gradient with component layout (2c + j) = d f^c / d x_j. For the aliases
/// this reproduces the tensor index conventions: VectorField2 -> TensorField22
/// with (i,j) = 2i+j, DirectorField -> TensorField32 with (m,j) = 2m+j.
template <int NC>
Field<2 * NC> gradient(const Field<NC>& f) {
    auto base = to_spectral(f);
    Field<2 * NC> out(f.grid);
    for (int dir = 0; dir < 2; ++dir) {
        auto s = base;
        detail::derivative_in_place(s, dir);
        std::lock_guard<std::mutex> lock(fft::registry_mutex());
        auto& ws = fft::workspace_for(f.grid.n);
        for (int c = 0; c < NC; ++c) ws.inverse(s.comp(c), out.comp(2 * c + dir));
    }
    return out;
}

/// Laplacian defined as div(grad .): each axis term carries the same Nyquist
/// zeroing as the first-derivative operator, so one-pass and two-pass second
/// derivatives agree to rounding on any input, not just band-limited fields.
template <int NC>
Field<NC> laplacian(const Field<NC>& f) {
    auto s = to_spectral(f);
    const double scale = 2.0 * M_PI / f.grid.length;
    const long nyq = static_cast<long>(f.grid.n / 2);
    for (int c = 0; c < NC; ++c) {
        auto* a = s.comp(c);
        for_each_mode(s.grid, [&](std::size_t idx, long kx, long ky) {
            const double wx = (kx == nyq) ? 0.0 : scale * static_cast<double>(kx);
            const double wy = (ky == nyq || ky == -nyq) ? 0.0 : scale * static_cast<double>(ky);
            a[idx] *= -(wx * wx + wy * wy);
        });
    }
    return from_spectral(s);
}

inline ScalarField divergence(const VectorField2& u) {
    auto s = to_spectral(u);
    auto sx = s, sy = s;
    detail::derivative_in_place(sx, 0);
    detail::derivative_in_place(sy, 1);
    ScalarField out(u.grid);
    Spectral<1> acc(u.grid);
    for (std::size_t i = 0; i < acc.modes(); ++i) acc.data[i] = sx.comp(0)[i] + sy.comp(1)[i];
    return from_spectral(acc);
}

/// (div T)_i = d T_{ij} / d x_j.
inline VectorField2 divergence(const TensorField22& t) {
    auto s = to_spectral(t);
    auto sx = s, sy = s;
    detail::derivative_in_place(sx, 0);
    detail::derivative_in_place(sy, 1);
    Spectral<2> acc(t.grid);
    for (int i = 0; i < 2; ++i)
        for (std::size_t m = 0; m < acc.modes(); ++m)
            acc.comp(i)[m] = sx.comp(2 * i + 0)[m] + sy.comp(2 * i + 1)[m];
    return from_spectral(acc);
}

/// (div P)_m = d P_{mj} / d x_j for 3x2 tensors.
inline DirectorField divergence(const TensorField32& t) {
    auto s = to_spectral(t);
    auto sx = s, sy = s;
    detail::derivative_in_place(sx, 0);
    detail::derivative_in_place(sy, 1);
    Spectral<3> acc(t.grid);
    for (int m = 0; m < 3; ++m)
        for (std::size_t i = 0; i < acc.modes(); ++i)
            acc.comp(m)[i] = sx.comp(2 * m + 0)[i] + sy.comp(2 * m + 1)[i];
    return from_spectral(acc);
}

/// Three-component curl of a director field that does not depend on x3:
/// (d2 d^3, -d1 d^3, d1 d^2 - d2 d^1).
inline DirectorField curl3(const DirectorField& d) {
    auto g = gradient(d); // idx 2m+j
    DirectorField out(d.grid);
    for (std::size_t p = 0; p < d.points(); ++p) {
        out.at(0, p) = g.at(2 * 2 + 1, p);
        out.at(1, p) = -g.at(2 * 2 + 0, p);
        out.at(2, p) = g.at(2 * 1 + 0, p) - g.at(2 * 0 + 1, p);
    }
    return out;
}

namespace detail {

inline void leray_in_place(Spectral<2>& s) {
    auto* ux = s.comp(0);
    auto* uy = s.comp(1);
    for_each_mode(s.grid, [&](std::size_t idx, long kxi, long kyi) {
        if (kxi == 0 && kyi == 0) return;
        const double kx = static_cast<double>(kxi), ky = static_cast<double>(kyi);
        const double k2 = kx * kx + ky * ky;
        const std::complex<double> kd = (kx * ux[idx] + ky * uy[idx]) / k2;
        ux[idx] -= kx * kd;
        uy[idx] -= ky * kd;
    });
}

} // namespace detail

/// L2-orthogonal projection onto divergence-free fields (mean mode kept).
inline VectorField2 leray_project(const VectorField2& u) {
    auto s = to_spectral(u);
    detail::leray_in_place(s);
    return from_spectral(s);
}

/// The discarded part v - P v, a pure gradient (plus nothing at the mean mode).
inline VectorField2 leray_complement(const VectorField2& u) {
    auto s = to_spectral(u);
    auto p = s;
    detail::leray_in_place(p);
    for (std::size_t i = 0; i < s.data.size(); ++i) s.data[i] -= p.data[i];
    return from_spectral(s);
}

/// Solve (-Lap + I) xi = u mode by mode; the mean mode passes through unchanged
/// (symbol 1 at k = 0). Commutes with the divergence-free projection.
template <int NC>
Field<NC> helmholtz_inverse(const Field<NC>& u) {
    auto s = to_spectral(u);
    detail::apply_real_symbol(s,
                              [](double kx, double ky) { return 1.0 / (1.0 + kx * kx + ky * ky); });
    return from_spectral(s);
}

inline std::pair<TensorField22, TensorField22> sym_skew(const TensorField22& g) {
    TensorField22 s(g.grid), a(g.grid);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const Mat2 m = mat2_at(g, p);
        set_mat2(s, p, sym(m));
        set_mat2(a, p, skew(m));
    }
    return {std::move(s), std::move(a)};
}

/// Zero every mode with |kx| or |ky| above n/3 (the usual 2/3 rule for
/// quadratically nonlinear terms).
template <int NC>
void dealias_in_place(Spectral<NC>& s) {
    const long cut = static_cast<long>(s.grid.n) / 3;
    for (int c = 0; c < NC; ++c) {
        auto* a = s.comp(c);
        for_each_mode(s.grid, [&](std::size_t idx, long kx, long ky) {
            if (kx > cut || ky > cut || ky < -cut) a[idx] = 0.0;
        });
    }
}

template <int NC>
Field<NC> dealias(const Field<NC>& f) {
    auto s = to_spectral(f);
    dealias_in_place(s);
    return from_spectral(s);
}

/// Collocation (trapezoid) inner product; exact for band-limited integrands.
template <int NC>
double inner_l2(const Field<NC>& a, const Field<NC>& b) {
    require_same_grid(a.grid, b.grid, "inner_l2");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc * a.grid.cell_area();
}

template <int NC>
double integral_sq(const Field<NC>& a) {
    return inner_l2(a, a);
}

/// Plain integral of a scalar density.
inline double integral(const ScalarField& f) {
    double acc = 0.0;
    for (double v : f.data) acc += v;
    return acc * f.grid.cell_area();
}

template <int NC>
double max_abs(const Field<NC>& f) {
    double worst = 0.0;
    for (double v : f.data) worst = std::max(worst, std::abs(v));
    return worst;
}

struct Norms {
    double l2 = 0.0; ///< sqrt(int |f|^2)
    double l4 = 0.0; ///< (int |f|^4)^(1/4), |f| the pointwise Euclidean magnitude
    double h1 = 0.0; ///< sqrt(l2^2 + int |grad f|^2)
    double linf = 0.0;
};

template <int NC>
Norms norms(const Field<NC>& f) {
    Norms r;
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t p = 0; p < f.points(); ++p) {
        double m2 = 0.0;
        for (int c = 0; c < NC; ++c) {
            const double v = f.at(c, p);
            m2 += v * v;
        }
        s2 += m2;
        s4 += m2 * m2;
        r.linf = std::max(r.linf, std::sqrt(m2));
    }
    const double w = f.grid.cell_area();
    r.l2 = std::sqrt(s2 * w);
    r.l4 = std::pow(s4 * w, 0.25);
    r.h1 = std::sqrt(s2 * w + integral_sq(gradient(f)));
    return r;
}

/// Spectral divergence, reported as a max over collocation points.
inline double max_divergence(const VectorField2& u) { return max_abs(divergence(u)); }

inline double relative_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), kResidualFloor});
}

template <int NC>
double relative_field_residual(const Field<NC>& got, const Field<NC>& want) {
    require_same_grid(got.grid, want.grid, "relative_field_residual");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < got.data.size(); ++i) {
        const double d = got.data[i] - want.data[i];
        num += d * d;
        den += want.data[i] * want.data[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), kResidualFloor);
}

/// Consistency checks for the smoothed lift xi = (-Lap + I)^{-1} u and the
/// tensors built from it: the two integral identities relating sym(grad xi) to
/// grad xi, and the recovery of sym/skew grad u from the lifted tensors.
struct XiIdentityReport {
    double sym_l2 = 0.0;   ///< int |S|^2 vs (1/2) int |grad xi|^2
    double sym_h1 = 0.0;   ///< int |grad S|^2 vs (1/2) int |grad grad xi|^2
    double strain = 0.0;   ///< A vs -Lap S + S
    double rotation = 0.0; ///< Omega vs -Lap Q + Q
    double worst() const { return std::max({sym_l2, sym_h1, strain, rotation}); }
};

/// Preconditions: u divergence-free (otherwise the integral identities pick up
/// the compressible part and the report simply shows large residuals).
inline XiIdentityReport check_xi_identities(const VectorField2& u) {
    XiIdentityReport rep;
    const VectorField2 xi = helmholtz_inverse(u);
    const TensorField22 grad_xi = gradient(xi);
    auto [S, Q] = sym_skew(grad_xi);

    rep.sym_l2 = relative_residual(integral_sq(S), 0.5 * integral_sq(grad_xi));
    rep.sym_h1 = relative_residual(integral_sq(gradient(S)), 0.5 * integral_sq(gradient(grad_xi)));

    auto [A, Om] = sym_skew(gradient(u));
    TensorField22 lapS = laplacian(S), lapQ = laplacian(Q);
    TensorField22 recA(u.grid), recOm(u.grid);
    for (std::size_t i = 0; i < recA.data.size(); ++i) {
        recA.data[i] = S.data[i] - lapS.data[i];
        recOm.data[i] = Q.data[i] - lapQ.data[i];
    }
    rep.strain = relative_field_residual(recA, A);
    rep.rotation = relative_field_residual(recOm, Om);
    return rep;
}

} // namespace els
