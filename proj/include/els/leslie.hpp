#pragma once

#include <cmath>

#include "els/coeffs.hpp"
#include "els/field.hpp"
#include "els/oseen_frank.hpp"
#include "els/spectral.hpp"

namespace els {

// Viscous (Leslie) stress and the director equation. Pointwise conventions:
// d is the full unit director, dh = (d^1, d^2) its in-plane part (|dh| <= 1),
// A and Om the symmetric and skew parts of grad u, h the molecular field,
// N the corotational director rate. The director equation solved for N:
//   N = -(lambda2/lambda1) A dh~ - (1/lambda1)(h - (d.h) d)
//       + (lambda2/lambda1)(dh.A.dh) d,
// where A dh~ means (A dh, 0) embedded with zero third component.

namespace leslie {

inline Vec2 in_plane(Vec3 v) { return {v.x, v.y}; }
inline Vec3 embed(Vec2 v) { return {v.x, v.y, 0.0}; }

/// Transport term (u.grad) d from precomputed G(m,j) = d_j d^m.
inline Vec3 advect(Vec2 u, const Mat32& G) {
    return {u.x * G(0, 0) + u.y * G(0, 1), u.x * G(1, 0) + u.y * G(1, 1),
            u.x * G(2, 0) + u.y * G(2, 1)};
}

} // namespace leslie

/// Dissipation quadratic form
///   Q(d, A, A) = alpha (dh.A.dh)^2 + mu4 |A|^2 + beta |A dh|^2.
/// A must be symmetric and trace-free (the strain of a divergence-free flow).
inline double quadratic_form_Q(Vec2 d_hat, const Mat2& A, const LeslieCoefficients& l) {
    const double scale = std::max(1.0, frobenius(A));
    if (std::abs(A(0, 1) - A(1, 0)) > 1e-10 * scale)
        throw NotSymmetric("quadratic_form_Q: A is not symmetric");
    if (std::abs(trace(A)) > 1e-10 * scale)
        throw NotTraceFree("quadratic_form_Q: A has nonzero trace");
    const double q = l.lambda2 * l.lambda2 / l.lambda1;
    const double alpha = l.mu1 - q;
    const double beta = l.mu5 + l.mu6 + q;
    const Vec2 Ad = mul(A, d_hat);
    const double dAd = dot(d_hat, Ad);
    return alpha * dAd * dAd + l.mu4 * contract(A, A) + beta * dot(Ad, Ad);
}

/// Original form of the viscous stress from an externally supplied director
/// rate (no constitutive substitution):
///   sigma = mu1 (dh.A.dh) dh(x)dh + mu2 Nh(x)dh + mu3 dh(x)Nh + mu4 A
///           + mu5 (A dh)(x)dh + mu6 dh(x)(A dh),
/// with N = dt_d + (u.grad) d - Om d~ and Nh its in-plane part.
inline TensorField22 leslie_stress_original(const VectorField2& u, const DirectorField& d,
                                            const DirectorField& dt_d,
                                            const LeslieCoefficients& l) {
    require_same_grid(u.grid, d.grid, "leslie_stress_original");
    require_same_grid(u.grid, dt_d.grid, "leslie_stress_original");
    require_unit_director(d, "leslie_stress_original");

    const TensorField22 grad_u = gradient(u);
    const TensorField32 grad_d = gradient(d);
    TensorField22 out(u.grid);
    for (std::size_t p = 0; p < u.points(); ++p) {
        const Mat2 gu = mat2_at(grad_u, p);
        const Mat2 A = sym(gu), Om = skew(gu);
        const Vec3 dv = vec3_at(d, p);
        const Vec2 dh = leslie::in_plane(dv);
        const Vec3 N = vec3_at(dt_d, p) + leslie::advect(vec2_at(u, p), mat32_at(grad_d, p)) -
                       leslie::embed(mul(Om, dh));
        const Vec2 Nh = leslie::in_plane(N);
        const Vec2 Ad = mul(A, dh);
        const double dAd = dot(dh, Ad);
        const Mat2 s = outer(dh, dh) * (l.mu1 * dAd) + outer(Nh, dh) * l.mu2 +
                       outer(dh, Nh) * l.mu3 + A * l.mu4 + outer(Ad, dh) * l.mu5 +
                       outer(dh, Ad) * l.mu6;
        set_mat2(out, p, s);
    }
    require_finite(out, "leslie_stress_original");
    return out;
}

/// The same stress with the director rate eliminated through the director
/// equation, split into the part carrying no molecular field ("main") and the
/// anisotropic molecular-field part ("perturbation"), plus the finer split of
/// the main part into its strain, director-laplacian, and constraint pieces.
struct LeslieStressForms {
    TensorField22 main;          ///< strain_part + laplacian_part + constraint_part
    TensorField22 perturbation;  ///< terms built from H = h - 2a Lap d
    TensorField22 strain_part;   ///< alpha (dh.A.dh) dh(x)dh + mu4 A + c5 (A dh)(x)dh + c6 dh(x)(A dh)
    TensorField22 laplacian_part;///< -(2a/lambda1) (mu2 Lap dh (x) dh + mu3 dh (x) Lap dh)
    TensorField22 constraint_part;///< -(2a lambda2/lambda1) (Lap d . d) dh(x)dh
};

inline LeslieStressForms leslie_stress_decomposed(const VectorField2& u, const DirectorField& d,
                                                  const FrankConstants& k,
                                                  const LeslieCoefficients& l,
                                                  const TensorField22& grad_u,
                                                  const DirectorField& lap_d,
                                                  const MolecularField& mf) {
    require_same_grid(u.grid, d.grid, "leslie_stress_decomposed");
    require_unit_director(d, "leslie_stress_decomposed");

    const double a = isotropic_constant(k);
    const double q = l.lambda2 * l.lambda2 / l.lambda1;
    const double alpha = l.mu1 - q;
    const double c5 = l.mu5 - (l.lambda2 / l.lambda1) * l.mu2;
    const double c6 = l.mu6 - (l.lambda2 / l.lambda1) * l.mu3;

    LeslieStressForms out{TensorField22(u.grid), TensorField22(u.grid), TensorField22(u.grid),
                          TensorField22(u.grid), TensorField22(u.grid)};
    for (std::size_t p = 0; p < u.points(); ++p) {
        const Mat2 A = sym(mat2_at(grad_u, p));
        const Vec3 dv = vec3_at(d, p);
        const Vec2 dh = leslie::in_plane(dv);
        const Vec3 lap = vec3_at(lap_d, p);
        const Vec2 laph = leslie::in_plane(lap);
        const Vec3 H = vec3_at(mf.H, p);
        const Vec2 Hh = leslie::in_plane(H);
        const Vec2 Ad = mul(A, dh);
        const double dAd = dot(dh, Ad);

        const Mat2 strain = outer(dh, dh) * (alpha * dAd) + A * l.mu4 + outer(Ad, dh) * c5 +
                            outer(dh, Ad) * c6;
        const Mat2 laplace =
            (outer(laph, dh) * l.mu2 + outer(dh, laph) * l.mu3) * (-2.0 * a / l.lambda1);
        const Mat2 constraint =
            outer(dh, dh) * (-2.0 * a * l.lambda2 / l.lambda1 * dot(lap, dv));
        const Mat2 pert = (outer(Hh, dh) * l.mu2 + outer(dh, Hh) * l.mu3 +
                           outer(dh, dh) * (l.lambda2 * dot(dv, H))) *
                          (-1.0 / l.lambda1);

        set_mat2(out.strain_part, p, strain);
        set_mat2(out.laplacian_part, p, laplace);
        set_mat2(out.constraint_part, p, constraint);
        set_mat2(out.main, p, strain + laplace + constraint);
        set_mat2(out.perturbation, p, pert);
    }
    require_finite(out.main, "leslie_stress_decomposed");
    require_finite(out.perturbation, "leslie_stress_decomposed");
    return out;
}

inline LeslieStressForms leslie_stress_decomposed(const VectorField2& u, const DirectorField& d,
                                                  const FrankConstants& k,
                                                  const LeslieCoefficients& l) {
    return leslie_stress_decomposed(u, d, k, l, gradient(u), laplacian(d), molecular_field(d, k));
}

/// Right-hand side of the director equation,
///   dt d = -(u.grad) d + Om d~ - (lambda2/lambda1) A d~
///          + (lambda2/lambda1)(dh.A.dh) d - (1/lambda1)(h - (d.h) d),
/// returned with the in-plane / third-component split and the corotational
/// rate N reconstructed without the transport and rotation bookkeeping.
struct DirectorRhs {
    VectorField2 rhs_hat;
    ScalarField rhs_3;
    VectorField2 n_hat;
    DirectorField full;
};

inline DirectorRhs director_rhs(const VectorField2& u, const DirectorField& d,
                                const FrankConstants& k, const LeslieCoefficients& l,
                                const TensorField22& grad_u, const TensorField32& grad_d,
                                const MolecularField& mf) {
    require_same_grid(u.grid, d.grid, "director_rhs");
    require_unit_director(d, "director_rhs");
    const double r = l.lambda2 / l.lambda1;

    DirectorRhs out{VectorField2(u.grid), ScalarField(u.grid), VectorField2(u.grid),
                    DirectorField(u.grid)};
    for (std::size_t p = 0; p < u.points(); ++p) {
        const Mat2 gu = mat2_at(grad_u, p);
        const Mat2 A = sym(gu), Om = skew(gu);
        const Vec3 dv = vec3_at(d, p);
        const Vec2 dh = leslie::in_plane(dv);
        const Vec2 Ad = mul(A, dh);
        const double dAd = dot(dh, Ad);
        const Vec3 hp = vec3_at(mf.h_proj, p);

        // N from the constitutive relation; rhs = N - (u.grad) d + Om d~.
        const Vec3 N = leslie::embed(Ad * (-r)) + dv * (r * dAd) + hp * (-1.0 / l.lambda1);
        const Vec3 rhs = N - leslie::advect(vec2_at(u, p), mat32_at(grad_d, p)) +
                         leslie::embed(mul(Om, dh));

        set_vec2(out.n_hat, p, leslie::in_plane(N));
        set_vec2(out.rhs_hat, p, leslie::in_plane(rhs));
        out.rhs_3.at(0, p) = rhs.z;
        set_vec3(out.full, p, rhs);
    }
    require_finite(out.full, "director_rhs");
    return out;
}

inline DirectorRhs director_rhs(const VectorField2& u, const DirectorField& d,
                                const FrankConstants& k, const LeslieCoefficients& l) {
    return director_rhs(u, d, k, l, gradient(u), gradient(d), molecular_field(d, k));
}

/// Relative L2 distance between the original stress (with the director rate
/// taken from the director equation) and the decomposed main + perturbation
/// form. Pure pointwise algebra given the coefficient relations, so the
/// residual sits at rounding level for admissible coefficients.
inline double check_equivalence_E0(const VectorField2& u, const DirectorField& d,
                                   const FrankConstants& k, const LeslieCoefficients& l) {
    const DirectorRhs rhs = director_rhs(u, d, k, l);
    const TensorField22 original = leslie_stress_original(u, d, rhs.full, l);
    const LeslieStressForms forms = leslie_stress_decomposed(u, d, k, l);
    TensorField22 recomposed(u.grid);
    for (std::size_t i = 0; i < recomposed.data.size(); ++i)
        recomposed.data[i] = forms.main.data[i] + forms.perturbation.data[i];
    return relative_field_residual(recomposed, original);
}

/// Everything the contraction identity needs at one point:
///   strain_part : M = alpha Hq : Ms + beta Mq : Ms + mu4 A : Ms
/// with Hq = (A : dh(x)dh) dh(x)dh and Mq = (A dh)(x)dh; the skew part drops
/// out exactly because c5 - c6 = 0 for admissible coefficients.
inline double contract_strain_part(Vec2 dh, const Mat2& A, const Mat2& M,
                                   const LeslieCoefficients& l) {
    const double q = l.lambda2 * l.lambda2 / l.lambda1;
    const double alpha = l.mu1 - q;
    const double beta = l.mu5 + l.mu6 + q;
    const Mat2 Ms = sym(M);
    const Vec2 Ad = mul(A, dh);
    const double dAd = dot(dh, Ad);
    return alpha * dAd * dot(dh, mul(Ms, dh)) + beta * dot(Ad, mul(Ms, dh)) +
           l.mu4 * contract(A, Ms);
}

/// Difference structures for two directors sharing one strain A2 and one
/// director laplacian lap_d2, written in telescoped form so the product-rule
/// bounds hold in exact arithmetic:
///   h_r = H(d1) - H(d2),  m_r = M(d1) - M(d2),
///   c_r = -(2a lambda2/lambda1) [ (lap_d2 . d1) dh1(x)dh1 - (lap_d2 . d2) dh2(x)dh2 ],
/// with |h_r| <= 4 |A2| |dh|, |m_r| <= 2 |A2| |dh|,
///      |c_r| <= 6 a |lambda2/lambda1| |lap_d2| |d1 - d2|.
struct RemainderTerms {
    Mat2 h_r, m_r, c_r;
    double h_bound = 0.0, m_bound = 0.0, c_bound = 0.0;
};

inline RemainderTerms remainder_terms(Vec3 d1, Vec3 d2, const Mat2& A2, Vec3 lap_d2, double a,
                                      const LeslieCoefficients& l) {
    if (std::abs(norm(d1) - 1.0) > 1e-6 || std::abs(norm(d2) - 1.0) > 1e-6)
        throw UnnormalizedDirector("remainder_terms: directors must be unit length");
    const Vec2 dh1 = leslie::in_plane(d1), dh2 = leslie::in_plane(d2);
    const Vec2 dh = dh1 - dh2;
    const Vec3 dd = d1 - d2;

    RemainderTerms out;
    // Hq difference: (A:dh1 dh1)(dh1 dh1 - dh2 dh2) + (A:(dh1 dh1 - dh2 dh2)) dh2 dh2,
    // with dh1 dh1 - dh2 dh2 = dh (x) dh1 + dh2 (x) dh.
    const Mat2 split = outer(dh, dh1) + outer(dh2, dh);
    const double a_d1 = dot(dh1, mul(A2, dh1));
    out.h_r = split * a_d1 + outer(dh2, dh2) * contract(A2, split);
    out.h_bound = 4.0 * frobenius(A2) * norm(dh);

    out.m_r = outer(mul(A2, dh), dh1) + outer(mul(A2, dh2), dh);
    out.m_bound = 2.0 * frobenius(A2) * norm(dh);

    const double pref = -2.0 * a * l.lambda2 / l.lambda1;
    out.c_r = (split * dot(lap_d2, d1) + outer(dh2, dh2) * dot(lap_d2, dd)) * pref;
    out.c_bound = 6.0 * a * std::abs(l.lambda2 / l.lambda1) * norm(lap_d2) * norm(dd);
    return out;
}

} // namespace els
