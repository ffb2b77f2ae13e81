#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "els/coeffs.hpp"
#include "els/dynamics.hpp"
#include "els/field.hpp"
#include "els/initial_data.hpp"
#include "els/leslie.hpp"
#include "els/oseen_frank.hpp"
#include "els/spectral.hpp"

namespace els {

// ---------------------------------------------------------------------------
// Twin-trajectory functionals
// ---------------------------------------------------------------------------

/// Weak-norm distance between two states through the smoothed lift
/// xi = (-Lap + I)^{-1}(u1 - u2):
///   Phi = int |xi|^2 + int |grad xi|^2 + 2a int |d1 - d2|^2.
struct PhiParts {
    double xi_l2 = 0.0; ///< int |xi|^2
    double xi_h1 = 0.0; ///< int |grad xi|^2
    double d_part = 0.0;///< 2a int |d1 - d2|^2
    double phi = 0.0;
};

inline PhiParts lower_order_energy(const State& s1, const State& s2, double a) {
    require_same_grid(s1.u.grid, s2.u.grid, "lower_order_energy");
    VectorField2 du(s1.u.grid);
    for (std::size_t i = 0; i < du.data.size(); ++i) du.data[i] = s1.u.data[i] - s2.u.data[i];
    DirectorField dd(s1.d.grid);
    for (std::size_t i = 0; i < dd.data.size(); ++i) dd.data[i] = s1.d.data[i] - s2.d.data[i];

    const VectorField2 xi = helmholtz_inverse(du);
    PhiParts out;
    out.xi_l2 = integral_sq(xi);
    out.xi_h1 = integral_sq(gradient(xi));
    out.d_part = 2.0 * a * integral_sq(dd);
    out.phi = out.xi_l2 + out.xi_h1 + out.d_part;
    return out;
}

/// Integrand of the comparison exponent. Deliberately asymmetric in the two
/// states (gradient norm of the second, fourth powers of both):
///   m = 1 + ||u1||_4^4 + ||u2||_4^4 + ||grad u2||_2^2 + ||Lap d1||_2^2 + ||Lap d2||_2^2.
inline double gronwall_integrand(const State& s1, const State& s2) {
    require_same_grid(s1.u.grid, s2.u.grid, "gronwall_integrand");
    const Norms nu1 = norms(s1.u), nu2 = norms(s2.u);
    const double gu2 = integral_sq(gradient(s2.u));
    const double ld1 = integral_sq(laplacian(s1.d));
    const double ld2 = integral_sq(laplacian(s2.d));
    return 1.0 + std::pow(nu1.l4, 4) + std::pow(nu2.l4, 4) + gu2 + ld1 + ld2;
}

/// Coercive part of the twin energy balance, scaled by
/// c0 = min{mu4/16, -a^2/lambda1}:
///   c0 ( int |grad xi|^2 + int |grad grad xi|^2 + int |grad(d1-d2)|^2 ).
inline double dissipation_proxy(const State& s1, const State& s2, double c0) {
    VectorField2 du(s1.u.grid);
    for (std::size_t i = 0; i < du.data.size(); ++i) du.data[i] = s1.u.data[i] - s2.u.data[i];
    DirectorField dd(s1.d.grid);
    for (std::size_t i = 0; i < dd.data.size(); ++i) dd.data[i] = s1.d.data[i] - s2.d.data[i];
    const VectorField2 xi = helmholtz_inverse(du);
    const TensorField22 gxi = gradient(xi);
    return c0 * (integral_sq(gxi) + integral_sq(gradient(gxi)) + integral_sq(gradient(dd)));
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

struct SuiteRow {
    std::string id;
    std::string description;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::vector<SuiteRow> rows;
    bool all_pass = true;
    double worst_identity = 0.0; ///< largest residual among the relative-residual rows

    void add(std::string id, std::string description, double residual, double tol) {
        rows.push_back({std::move(id), std::move(description), residual, tol, residual <= tol});
        all_pass = all_pass && rows.back().pass;
    }
};

struct IdentityOptions {
    std::uint64_t seed = 2025;  ///< seeds the second state for the difference rows
    double perturbation = 0.2;  ///< size of the second-state offset
    double identity_tol = 1e-8;
    double bound_tol = 1e-12;
    /// Fault injection for the suite's own sensitivity test: flips the sign of
    /// the elastic stress so a healthy run of the suite must go red.
    bool corrupt_elastic_sign = false;
};

/// Numerically exercise every algebraic identity the scheme and the twin
/// estimate rest on, for one smooth state (u divergence-free, |d| = 1) and a
/// seeded second state derived from it. Residuals of equality rows are
/// relative (L2 over the grid, or relative scalar for integral identities);
/// bound rows report the worst normalized violation, clamped at zero.
inline SuiteReport identity_suite(const State& s, const FrankConstants& k,
                                  const LeslieCoefficients& l, const IdentityOptions& opt = {}) {
    require_unit_director(s.d, "identity_suite");
    const Grid g = s.u.grid;
    const double a = isotropic_constant(k);
    SuiteReport rep;

    // Lift identities.
    const XiIdentityReport xi = check_xi_identities(s.u);
    rep.add("xi_sym_l2", "int |S|^2 = (1/2) int |grad xi|^2", xi.sym_l2, opt.identity_tol);
    rep.add("xi_sym_h1", "int |grad S|^2 = (1/2) int |grad grad xi|^2", xi.sym_h1,
            opt.identity_tol);
    rep.add("strain_from_lift", "sym grad u = (-Lap + I) sym grad xi", xi.strain,
            opt.identity_tol);
    rep.add("rotation_from_lift", "skew grad u = (-Lap + I) skew grad xi", xi.rotation,
            opt.identity_tol);

    // Shared ingredients for the stress rows.
    const TensorField22 grad_u = gradient(s.u);
    const TensorField32 grad_d = gradient(s.d);
    const DirectorField lap_d = laplacian(s.d);
    const auto vd = variational_derivatives(s.d, k, grad_d);
    const auto mf = molecular_field(s.d, k, vd, lap_d);
    TensorField22 sigma_e = ericksen_stress(s.d, k, vd, grad_d);
    if (opt.corrupt_elastic_sign)
        for (double& v : sigma_e.data) v = -v;
    const auto forms = leslie_stress_decomposed(s.u, s.d, k, l, grad_u, lap_d, mf);
    const TensorField22 M = gradient(helmholtz_inverse(s.u));

    // Contraction of the decomposed stress against an arbitrary matrix field,
    // rebuilt from the scalar formula whose skew part cancels for admissible
    // coefficients.
    {
        double num = 0.0, den = 0.0;
        const double r = l.lambda2 / l.lambda1;
        for (std::size_t p = 0; p < g.size(); ++p) {
            const Mat2 main = mat2_at(forms.main, p);
            const Mat2 Mp = mat2_at(M, p);
            const double lhs = contract(main, Mp);
            const Mat2 A = sym(mat2_at(grad_u, p));
            const Vec3 dv = vec3_at(s.d, p);
            const Vec2 dh = leslie::in_plane(dv);
            const Vec3 lap = vec3_at(lap_d, p);
            const Vec2 lh = leslie::in_plane(lap);
            const Mat2 Ms = sym(Mp), Ma = skew(Mp);
            double rhs = contract_strain_part(dh, A, Mp, l);
            rhs += 2.0 * a * (r * dot(lh, mul(Ms, dh)) - dot(lh, mul(Ma, dh)));
            rhs += -2.0 * a * r * dot(lap, dv) * dot(dh, mul(Ms, dh));
            num += (lhs - rhs) * (lhs - rhs);
            den += lhs * lhs;
        }
        rep.add("stress_contraction",
                "decomposed stress : M = quadratic-form contraction formula",
                std::sqrt(num) / std::max(std::sqrt(den), kResidualFloor), opt.identity_tol);
    }

    // Elastic stress contraction recombined independently.
    {
        double num = 0.0, den = 0.0;
        for (std::size_t p = 0; p < g.size(); ++p) {
            const double lhs = contract(mat2_at(sigma_e, p), mat2_at(grad_u, p));
            const Mat32 G = mat32_at(grad_d, p);
            const Mat32 P = mat32_at(vd.dw_dgrad, p);
            const Mat2 gu = mat2_at(grad_u, p);
            double rhs = 0.0;
            for (int m = 0; m < 3; ++m)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) rhs -= G(m, i) * P(m, j) * gu(i, j);
            num += (lhs - rhs) * (lhs - rhs);
            den += lhs * lhs;
        }
        rep.add("ericksen_contraction", "elastic stress : grad u matches its defining sum",
                std::sqrt(num) / std::max(std::sqrt(den), kResidualFloor), opt.identity_tol);
    }

    // Molecular field split and its tangential projection. The split row uses
    // the independent direct divergence of the W derivatives; the projection
    // row leans on the pointwise constraint |d| = 1.
    {
        const DirectorField div_w = divergence(vd.dw_dgrad);
        DirectorField direct(g), split(g);
        for (std::size_t p = 0; p < g.size(); ++p) {
            set_vec3(direct, p, vec3_at(div_w, p) - vec3_at(vd.dw_dd, p));
            set_vec3(split, p, vec3_at(mf.H, p) + vec3_at(lap_d, p) * (2.0 * a));
        }
        rep.add("molecular_field_split", "div dW/dgrad - dW/dd = 2a Lap d + H",
                relative_field_residual(direct, split), opt.identity_tol);

        DirectorField proj_constraint(g);
        for (std::size_t p = 0; p < g.size(); ++p) {
            const Vec3 dv = vec3_at(s.d, p);
            const Mat32 G = mat32_at(grad_d, p);
            const Vec3 H = vec3_at(mf.H, p);
            const Vec3 rhs =
                (vec3_at(lap_d, p) + dv * frank::grad_sq(G)) * (2.0 * a) + H - dv * dot(dv, H);
            set_vec3(proj_constraint, p, rhs);
        }
        rep.add("projected_molecular_field",
                "h - (d.h) d = 2a (Lap d + |grad d|^2 d) + H - (d.H) d",
                relative_field_residual(proj_constraint, mf.h_proj), opt.identity_tol);
    }

    rep.add("leslie_equivalence",
            "original stress with the director equation = decomposed stress",
            check_equivalence_E0(s.u, s.d, k, l), opt.identity_tol);

    // Second state for the difference rows: divergence-free velocity offset,
    // tangential director offset, renormalized.
    State s2 = s;
    {
        const VectorField2 du =
            random_divfree_velocity(g, opt.perturbation, 2, opt.seed ^ 0xabcdef12345ull);
        for (std::size_t i = 0; i < s2.u.data.size(); ++i) s2.u.data[i] += du.data[i];
        const DirectorField v = random_smooth_director(g, {0.0, 1.0, 0.4}, 1.0, 2, opt.seed);
        const DirectorField vt = tangential_part(v, s.d);
        for (std::size_t i = 0; i < s2.d.data.size(); ++i)
            s2.d.data[i] += opt.perturbation * vt.data[i];
        renormalize(s2.d);
    }
    const TensorField22 grad_u2 = gradient(s2.u);
    const DirectorField lap_d2 = laplacian(s2.d);

    double num_h = 0.0, num_m = 0.0, num_c = 0.0;
    double den_h = 0.0, den_m = 0.0, den_c = 0.0;
    double viol_h = 0.0, viol_m = 0.0, viol_c = 0.0;
    const double pref = -2.0 * a * l.lambda2 / l.lambda1;
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Mat2 A2 = sym(mat2_at(grad_u2, p));
        const Vec3 d1 = vec3_at(s.d, p), d2 = vec3_at(s2.d, p);
        const Vec3 lap2 = vec3_at(lap_d2, p);
        const Vec2 dh1 = leslie::in_plane(d1), dh2 = leslie::in_plane(d2);
        const auto rem = remainder_terms(d1, d2, A2, lap2, a, l);

        const Mat2 h_direct = outer(dh1, dh1) * dot(dh1, mul(A2, dh1)) -
                              outer(dh2, dh2) * dot(dh2, mul(A2, dh2));
        const Mat2 m_direct = outer(mul(A2, dh1), dh1) - outer(mul(A2, dh2), dh2);
        const Mat2 c_direct =
            (outer(dh1, dh1) * dot(lap2, d1) - outer(dh2, dh2) * dot(lap2, d2)) * pref;

        auto acc = [](const Mat2& diff, const Mat2& ref, double& num, double& den) {
            num += contract(diff, diff);
            den += contract(ref, ref);
        };
        acc(h_direct - rem.h_r, h_direct, num_h, den_h);
        acc(m_direct - rem.m_r, m_direct, num_m, den_m);
        acc(c_direct - rem.c_r, c_direct, num_c, den_c);

        viol_h = std::max(viol_h, (frobenius(rem.h_r) - rem.h_bound) / (1.0 + rem.h_bound));
        viol_m = std::max(viol_m, (frobenius(rem.m_r) - rem.m_bound) / (1.0 + rem.m_bound));
        viol_c = std::max(viol_c, (frobenius(rem.c_r) - rem.c_bound) / (1.0 + rem.c_bound));
    }
    auto rel = [](double num, double den) {
        return std::sqrt(num) / std::max(std::sqrt(den), kResidualFloor);
    };
    rep.add("difference_main_h", "two-state quadratic-form difference telescopes",
            rel(num_h, den_h), opt.identity_tol);
    rep.add("difference_main_m", "two-state strain-vector difference telescopes",
            rel(num_m, den_m), opt.identity_tol);
    rep.add("difference_main_c", "two-state constraint-term difference telescopes",
            rel(num_c, den_c), opt.identity_tol);
    rep.add("remainder_bound_h", "|H_r| <= 4 |A2| |dh1 - dh2|", std::max(0.0, viol_h),
            opt.bound_tol);
    rep.add("remainder_bound_m", "|M_r| <= 2 |A2| |dh1 - dh2|", std::max(0.0, viol_m),
            opt.bound_tol);
    rep.add("remainder_bound_c", "|C_r| <= 6 a |lambda2/lambda1| |Lap d2| |d1 - d2|",
            std::max(0.0, viol_c), opt.bound_tol);

    for (const auto& row : rep.rows)
        if (row.tolerance >= 1e-9) rep.worst_identity = std::max(rep.worst_identity, row.residual);
    return rep;
}

// ---------------------------------------------------------------------------
// Twin experiment
// ---------------------------------------------------------------------------

struct PerturbationSpec {
    std::string target = "director"; ///< "director", "velocity", or "both"
    double epsilon = 1e-3;
    int cutoff = 2;
    std::uint64_t seed = 7;
};

inline State apply_perturbation(State s, const PerturbationSpec& spec) {
    if (spec.epsilon == 0.0) return s;
    const Grid g = s.u.grid;
    if (spec.target != "director" && spec.target != "velocity" && spec.target != "both")
        throw Error("perturbation: unknown target '" + spec.target + "'");
    if (spec.target == "velocity" || spec.target == "both") {
        const VectorField2 du =
            random_divfree_velocity(g, spec.epsilon, spec.cutoff, spec.seed ^ 0x51ull);
        for (std::size_t i = 0; i < s.u.data.size(); ++i) s.u.data[i] += du.data[i];
    }
    if (spec.target == "director" || spec.target == "both") {
        const DirectorField v =
            random_smooth_director(g, {0.2, -0.3, 1.0}, 1.0, spec.cutoff, spec.seed);
        const DirectorField vt = tangential_part(v, s.d);
        for (std::size_t i = 0; i < s.d.data.size(); ++i)
            s.d.data[i] += spec.epsilon * vt.data[i];
        renormalize(s.d);
    }
    return s;
}

struct TwinRow {
    double t = 0.0;
    double phi = 0.0, phi_xi_l2 = 0.0, phi_xi_h1 = 0.0, phi_d = 0.0;
    double m = 0.0;
    double m_cum = 0.0; ///< trapezoid of m from t = 0
    double dissipation_proxy = 0.0;
    double gronwall_bound = 0.0;
    bool pass = true;
};

struct TwinResult {
    std::vector<TwinRow> rows;
    double phi0 = 0.0;
    double c_eff = 0.0; ///< max over rows of log(phi/phi0) / M
    double c_cap = 0.0;
    bool passed = true;
    State final_a, final_b;
};

/// Evolve the base state and its perturbed twin in lockstep and check the
/// comparison estimate phi(t) <= phi(0) exp(c_cap M(t)) row by row. When no
/// cap is supplied the run self-calibrates: c_cap = 10 max(c_eff, 0.05), an
/// order of magnitude above the measured growth constant but still finite and
/// falsifiable. epsilon = 0 evolves bitwise-identical twins with phi = 0.
inline TwinResult twin_experiment(const State& base, const FrankConstants& k,
                                  const LeslieCoefficients& l, const SolverConfig& solver,
                                  const PerturbationSpec& spec, int report_every = 10,
                                  double c_cap = 0.0) {
    if (report_every < 1) throw Error("twin: report_every must be >= 1");
    const double a = isotropic_constant(k);
    const auto derived = DerivedConstants::from(l, k);

    Integrator ia(base, k, l, solver);
    Integrator ib(apply_perturbation(base, spec), k, l, solver);

    TwinResult out;
    auto emit = [&](double t) {
        const PhiParts phi = lower_order_energy(ia.state(), ib.state(), a);
        TwinRow row;
        row.t = t;
        row.phi = phi.phi;
        row.phi_xi_l2 = phi.xi_l2;
        row.phi_xi_h1 = phi.xi_h1;
        row.phi_d = phi.d_part;
        row.m = gronwall_integrand(ia.state(), ib.state());
        row.dissipation_proxy = dissipation_proxy(ia.state(), ib.state(), derived.c0_lower);
        if (!out.rows.empty()) {
            const TwinRow& prev = out.rows.back();
            row.m_cum = prev.m_cum + 0.5 * (prev.m + row.m) * (row.t - prev.t);
        }
        out.rows.push_back(row);
    };

    emit(0.0);
    const long nsteps = std::lround(solver.t_end / solver.dt);
    for (long i = 0; i < nsteps; ++i) {
        ia.advance();
        ib.advance();
        if ((i + 1) % report_every == 0 || i + 1 == nsteps) emit((i + 1) * solver.dt);
    }

    out.phi0 = out.rows.front().phi;
    bool any = false;
    double c_eff = std::numeric_limits<double>::lowest();
    for (const TwinRow& row : out.rows)
        if (row.t > 0.0 && row.phi > 0.0 && out.phi0 > 0.0 && row.m_cum > 0.0) {
            c_eff = std::max(c_eff, std::log(row.phi / out.phi0) / row.m_cum);
            any = true;
        }
    out.c_eff = any ? c_eff : 0.0;
    out.c_cap = (c_cap > 0.0) ? c_cap : 10.0 * std::max(out.c_eff, 0.05);
    for (TwinRow& row : out.rows) {
        row.gronwall_bound = out.phi0 * std::exp(out.c_cap * row.m_cum);
        row.pass = row.phi <= row.gronwall_bound * (1.0 + 1e-12);
        out.passed = out.passed && row.pass;
    }
    out.final_a = ia.state();
    out.final_b = ib.state();
    return out;
}

} // namespace els
