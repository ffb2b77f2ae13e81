#pragma once

#include <cmath>

#include "els/coeffs.hpp"
#include "els/field.hpp"
#include "els/spectral.hpp"

namespace els {

// Elastic energy density W(d, G) with G(m,j) = d_j d^m, written as an
// isotropic part plus a non-negative anisotropic remainder:
//   W = a |G|^2 + V,  a = min(k1,k2,k3),
//   V = (k1-a) (div d)^2 + (k2-a) (d.curl d)^2 + (k3-a) |d x curl d|^2,
// curl taken with d_3 = 0. This decomposed form is the definition used
// throughout; V vanishes identically in the one-constant case.

namespace frank {

inline Vec3 curl_of(const Mat32& G) {
    return {G(2, 1), -G(2, 0), G(1, 0) - G(0, 1)};
}

inline double v_density_point(const Vec3& d, const Mat32& G, const FrankConstants& k, double a) {
    const double div = G(0, 0) + G(1, 1);
    const Vec3 c = curl_of(G);
    const double twist = dot(d, c);
    const Vec3 bend = cross(d, c);
    return (k.k1 - a) * div * div + (k.k2 - a) * twist * twist + (k.k3 - a) * dot(bend, bend);
}

inline double grad_sq(const Mat32& G) {
    double s = 0.0;
    for (int m = 0; m < 3; ++m)
        for (int j = 0; j < 2; ++j) s += G(m, j) * G(m, j);
    return s;
}

inline double w_density_point(const Vec3& d, const Mat32& G, const FrankConstants& k, double a) {
    return a * grad_sq(G) + v_density_point(d, G, k, a);
}

/// Central difference in one scalar argument. W and V are quadratic in every
/// one of their nine scalar arguments, so this is exact up to rounding; no
/// step-size extrapolation is needed.
template <typename F>
double central_diff(F&& f, double x) {
    const double h = std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace frank

struct EnergyDensityBreakdown {
    ScalarField total;     ///< W
    ScalarField isotropic; ///< a |grad d|^2
    ScalarField v_total;   ///< V
    ScalarField v_splay, v_twist, v_bend;
    double total_integral = 0.0;
    double isotropic_integral = 0.0;
    double v_integral = 0.0;
};

inline EnergyDensityBreakdown frank_density(const DirectorField& d, const FrankConstants& k) {
    require_unit_director(d, "frank_density");
    const double a = isotropic_constant(k);
    const TensorField32 grad = gradient(d);

    EnergyDensityBreakdown out{ScalarField(d.grid), ScalarField(d.grid), ScalarField(d.grid),
                               ScalarField(d.grid), ScalarField(d.grid), ScalarField(d.grid)};
    for (std::size_t p = 0; p < d.points(); ++p) {
        const Vec3 dv = vec3_at(d, p);
        const Mat32 G = mat32_at(grad, p);
        const double div = G(0, 0) + G(1, 1);
        const Vec3 c = frank::curl_of(G);
        const double twist = dot(dv, c);
        const Vec3 bend = cross(dv, c);
        out.v_splay.at(0, p) = (k.k1 - a) * div * div;
        out.v_twist.at(0, p) = (k.k2 - a) * twist * twist;
        out.v_bend.at(0, p) = (k.k3 - a) * dot(bend, bend);
        out.v_total.at(0, p) = out.v_splay.at(0, p) + out.v_twist.at(0, p) + out.v_bend.at(0, p);
        out.isotropic.at(0, p) = a * frank::grad_sq(G);
        out.total.at(0, p) = frank::w_density_point(dv, G, k, a);
    }
    out.total_integral = integral(out.total);
    out.isotropic_integral = integral(out.isotropic);
    out.v_integral = integral(out.v_total);
    return out;
}

inline double elastic_energy(const DirectorField& d, const FrankConstants& k) {
    return frank_density(d, k).total_integral;
}

/// Partial derivatives of the densities with respect to the gradient entries
/// and the director components, evaluated by exact central differencing of the
/// density itself (quadratic in each argument). The W derivatives are
/// assembled as 2aG + (V derivatives), which is an identity of the definition.
struct VariationalDerivatives {
    TensorField32 dw_dgrad; ///< dW/dG(m,j)
    DirectorField dw_dd;    ///< dW/dd^m
    TensorField32 dv_dgrad;
    DirectorField dv_dd;
};

inline VariationalDerivatives variational_derivatives(const DirectorField& d,
                                                      const FrankConstants& k,
                                                      const TensorField32& grad) {
    require_same_grid(d.grid, grad.grid, "variational_derivatives");
    const double a = isotropic_constant(k);

    VariationalDerivatives out{TensorField32(d.grid), DirectorField(d.grid),
                               TensorField32(d.grid), DirectorField(d.grid)};
    for (std::size_t p = 0; p < d.points(); ++p) {
        const Vec3 dv = vec3_at(d, p);
        const Mat32 G = mat32_at(grad, p);
        Mat32 dv_dg;
        for (int m = 0; m < 3; ++m)
            for (int j = 0; j < 2; ++j) {
                dv_dg(m, j) = frank::central_diff(
                    [&](double x) {
                        Mat32 Gx = G;
                        Gx(m, j) = x;
                        return frank::v_density_point(dv, Gx, k, a);
                    },
                    G(m, j));
            }
        Vec3 dv_dd;
        for (int m = 0; m < 3; ++m) {
            const double der = frank::central_diff(
                [&](double x) {
                    Vec3 dx = dv;
                    (m == 0 ? dx.x : (m == 1 ? dx.y : dx.z)) = x;
                    return frank::v_density_point(dx, G, k, a);
                },
                dv[m]);
            (m == 0 ? dv_dd.x : (m == 1 ? dv_dd.y : dv_dd.z)) = der;
        }
        set_mat32(out.dv_dgrad, p, dv_dg);
        set_vec3(out.dv_dd, p, dv_dd);
        Mat32 dw_dg;
        for (int m = 0; m < 3; ++m)
            for (int j = 0; j < 2; ++j) dw_dg(m, j) = 2.0 * a * G(m, j) + dv_dg(m, j);
        set_mat32(out.dw_dgrad, p, dw_dg);
        set_vec3(out.dw_dd, p, dv_dd); // the isotropic part carries no d dependence
    }
    return out;
}

inline VariationalDerivatives variational_derivatives(const DirectorField& d,
                                                      const FrankConstants& k) {
    return variational_derivatives(d, k, gradient(d));
}

/// Molecular field h = div(dW/dgrad) - dW/dd, split as h = 2a Lap d + H with
/// H = div(dV/dgrad) - dV/dd, plus the tangential part h - (d.h) d.
struct MolecularField {
    DirectorField h;
    DirectorField H;
    DirectorField h_proj;
};

inline MolecularField molecular_field(const DirectorField& d, const FrankConstants& k,
                                      const VariationalDerivatives& vd,
                                      const DirectorField& lap) {
    require_unit_director(d, "molecular_field");
    const double a = isotropic_constant(k);

    MolecularField out{DirectorField(d.grid), DirectorField(d.grid), DirectorField(d.grid)};
    const DirectorField div_v = divergence(vd.dv_dgrad);
    for (std::size_t p = 0; p < d.points(); ++p) {
        const Vec3 H = vec3_at(div_v, p) - vec3_at(vd.dv_dd, p);
        const Vec3 h = vec3_at(lap, p) * (2.0 * a) + H;
        set_vec3(out.H, p, H);
        set_vec3(out.h, p, h);
        const Vec3 dv = vec3_at(d, p);
        set_vec3(out.h_proj, p, h - dv * dot(dv, h));
    }

    // Redundant second path straight from the W derivatives; both assemblies
    // share every nonlinear ingredient and the Laplacian composes from the
    // same first-derivative operator, so disagreement beyond rounding means a
    // derivative bug. The denominator is floored at 1: for near-constant
    // directors both paths are noise and a bare relative test is meaningless.
    const DirectorField div_w = divergence(vd.dw_dgrad);
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < d.points(); ++p) {
        const Vec3 h2 = vec3_at(div_w, p) - vec3_at(vd.dw_dd, p);
        const Vec3 h = vec3_at(out.h, p);
        const Vec3 diff = h2 - h;
        num += dot(diff, diff);
        den += dot(h, h);
    }
    const double rel = std::sqrt(num) / std::max(std::sqrt(den), 1.0);
    if (rel > 1e-6)
        throw ConsistencyFailure("molecular_field: split and direct evaluations disagree, rel " +
                                 std::to_string(rel));
    return out;
}

inline MolecularField molecular_field(const DirectorField& d, const FrankConstants& k) {
    return molecular_field(d, k, variational_derivatives(d, k), laplacian(d));
}

/// Elastic stress sigma_{ij} = - sum_m (d_i d^m) dW/d(d_j d^m).
inline TensorField22 ericksen_stress(const DirectorField& d, const FrankConstants& k,
                                     const VariationalDerivatives& vd,
                                     const TensorField32& grad) {
    require_unit_director(d, "ericksen_stress");
    TensorField22 out(d.grid);
    for (std::size_t p = 0; p < d.points(); ++p) {
        const Mat32 G = mat32_at(grad, p);
        const Mat32 P = mat32_at(vd.dw_dgrad, p);
        Mat2 s;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double acc = 0.0;
                for (int m = 0; m < 3; ++m) acc += G(m, i) * P(m, j);
                s(i, j) = -acc;
            }
        set_mat2(out, p, s);
    }
    return out;
}

inline TensorField22 ericksen_stress(const DirectorField& d, const FrankConstants& k) {
    const TensorField32 grad = gradient(d);
    return ericksen_stress(d, k, variational_derivatives(d, k, grad), grad);
}

/// Normalize every director to unit length in place.
inline void renormalize(DirectorField& d) {
    for (std::size_t p = 0; p < d.points(); ++p) {
        const Vec3 v = vec3_at(d, p);
        const double n = norm(v);
        if (n == 0.0) throw NonFinite("renormalize: zero director cannot be normalized");
        set_vec3(d, p, v * (1.0 / n));
    }
}

} // namespace els
