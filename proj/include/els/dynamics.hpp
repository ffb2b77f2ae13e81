#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>

#include "els/coeffs.hpp"
#include "els/field.hpp"
#include "els/leslie.hpp"
#include "els/oseen_frank.hpp"
#include "els/spectral.hpp"

namespace els {

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double imex_theta = 1.0;   ///< implicit weight in [1/2, 1] for the order-1 scheme
    int order = 1;             ///< 1 = IMEX Euler, 2 = trapezoid + two-step explicit extrapolation
    int renormalize_every = 1; ///< project the director to unit length every k-th step
    bool dealias = true;       ///< 2/3-rule mask on the nonlinear right-hand sides
    double cfl_safety = 0.9;   ///< advective monitor threshold, dt max|u| / spacing
};

/// Per-step diagnostics, evaluated on the state after the step.
struct StepReport {
    double t = 0.0;
    double e_kin = 0.0;           ///< (1/2) int |u|^2
    double e_elastic = 0.0;       ///< int W(d, grad d)
    double d_visc = 0.0;          ///< int Q(d, A, A)
    double d_rot = 0.0;           ///< -(1/lambda1) int |h - (d.h) d|^2
    double energy_residual = 0.0; ///< (E' - E)/dt + D', zero for the exact balance
    double d_drift = 0.0;         ///< max | |d|-1 | before renormalization
    double div_u = 0.0;           ///< max |div u| (spectral divergence)
    double cfl = 0.0;             ///< dt max|u| / spacing of the advanced state
};

/// Full momentum right-hand side: the divergence-free projection of
/// -(u.grad) u + div(elastic stress + viscous stress).
inline VectorField2 momentum_rhs(const VectorField2& u, const DirectorField& d,
                                 const FrankConstants& k, const LeslieCoefficients& l) {
    require_same_grid(u.grid, d.grid, "momentum_rhs");
    const TensorField22 grad_u = gradient(u);
    const TensorField32 grad_d = gradient(d);
    const DirectorField lap_d = laplacian(d);
    const auto vd = variational_derivatives(d, k, grad_d);
    const auto mf = molecular_field(d, k, vd, lap_d);
    const TensorField22 sigma_e = ericksen_stress(d, k, vd, grad_d);
    const auto forms = leslie_stress_decomposed(u, d, k, l, grad_u, lap_d, mf);

    TensorField22 sigma(u.grid);
    for (std::size_t i = 0; i < sigma.data.size(); ++i)
        sigma.data[i] = sigma_e.data[i] + forms.main.data[i] + forms.perturbation.data[i];
    const VectorField2 div_sigma = divergence(sigma);

    VectorField2 rhs(u.grid);
    for (std::size_t p = 0; p < u.points(); ++p) {
        const Mat2 gu = mat2_at(grad_u, p);
        const Vec2 uv = vec2_at(u, p);
        const Vec2 adv = mul(gu, uv); // (u.grad) u, since (grad u)_{ij} = d_j u^i
        set_vec2(rhs, p, vec2_at(div_sigma, p) - adv);
    }
    rhs = leray_project(rhs);
    require_finite(rhs, "momentum_rhs");
    return rhs;
}

/// Time integrator: explicit treatment of transport and anisotropic stress,
/// implicit treatment of the stiff isotropic cores (mu4/2) Lap u and
/// (-2a/lambda1) Lap d, all diagonal in Fourier space.
class Integrator {
  public:
    Integrator(State s, const FrankConstants& k, const LeslieCoefficients& l,
               const SolverConfig& cfg)
        : s_(std::move(s)), k_(k), l_(l), cfg_(cfg) {
        if (!(cfg.imex_theta >= 0.5 && cfg.imex_theta <= 1.0))
            throw Error("solver: imex_theta must lie in [1/2, 1]");
        if (cfg.order != 1 && cfg.order != 2) throw Error("solver: order must be 1 or 2");
        if (cfg.renormalize_every < 1) throw Error("solver: renormalize_every must be >= 1");
        if (!(cfg.dt > 0.0)) throw Error("solver: dt must be positive");
        require_same_grid(s_.u.grid, s_.d.grid, "integrator");
        asm_ = assemble(s_);
    }

    const State& state() const { return s_; }
    int steps_taken() const { return steps_; }
    double total_energy() const { return asm_.e_kin + asm_.e_elastic; }
    double dissipation() const { return asm_.d_visc + asm_.d_rot; }

    /// Diagnostics of the current state in report form (used for the t=0 row).
    StepReport current_report() const {
        StepReport r;
        r.t = s_.t;
        r.e_kin = asm_.e_kin;
        r.e_elastic = asm_.e_elastic;
        r.d_visc = asm_.d_visc;
        r.d_rot = asm_.d_rot;
        r.d_drift = max_unit_deviation(s_.d);
        r.div_u = max_divergence(s_.u);
        r.cfl = cfg_.dt * asm_.max_u / s_.u.grid.spacing();
        return r;
    }

    StepReport advance() {
        const double dt = cfg_.dt;
        const double e_before = total_energy();
        const double max_u_before = asm_.max_u;

        // Explicit parts: full right-hand sides minus the stiff cores.
        VectorField2 eu(s_.u.grid);
        for (std::size_t p = 0; p < s_.u.points(); ++p)
            set_vec2(eu, p, vec2_at(asm_.div_sigma_expl, p) - vec2_at(asm_.advect_u, p));
        const double gamma = -2.0 * isotropic_constant(k_) / l_.lambda1;
        DirectorField ed(s_.d.grid);
        for (std::size_t p = 0; p < s_.d.points(); ++p)
            set_vec3(ed, p, vec3_at(asm_.dir_rhs, p) - vec3_at(asm_.lap_d, p) * gamma);

        Spectral<2> eu_s = to_spectral(eu);
        detail::leray_in_place(eu_s);
        Spectral<3> ed_s = to_spectral(ed);
        if (cfg_.dealias) {
            dealias_in_place(eu_s);
            dealias_in_place(ed_s);
        }

        // Two-step extrapolation of the explicit part when second order is on.
        if (cfg_.order == 2) {
            Spectral<2> eu_cur = eu_s;
            Spectral<3> ed_cur = ed_s;
            if (prev_eu_ && prev_ed_) {
                for (std::size_t i = 0; i < eu_s.data.size(); ++i)
                    eu_s.data[i] = 1.5 * eu_s.data[i] - 0.5 * prev_eu_->data[i];
                for (std::size_t i = 0; i < ed_s.data.size(); ++i)
                    ed_s.data[i] = 1.5 * ed_s.data[i] - 0.5 * prev_ed_->data[i];
            }
            prev_eu_ = std::move(eu_cur);
            prev_ed_ = std::move(ed_cur);
        }

        const double theta = (cfg_.order == 2) ? 0.5 : cfg_.imex_theta;
        const double nu = 0.5 * l_.mu4;
        const double kscale = 2.0 * M_PI / s_.u.grid.length;

        Spectral<2> us = to_spectral(s_.u);
        Spectral<3> ds = to_spectral(s_.d);
        auto update = [&](auto& state_s, const auto& rhs_s, double diffusivity) {
            constexpr int NC = std::remove_reference_t<decltype(state_s)>::components;
            for (int c = 0; c < NC; ++c) {
                auto* x = state_s.comp(c);
                const auto* e = rhs_s.comp(c);
                for_each_mode(state_s.grid, [&](std::size_t idx, long kx, long ky) {
                    const double kk = kscale * kscale * static_cast<double>(kx * kx + ky * ky);
                    const std::complex<double> num =
                        x[idx] + dt * (e[idx] - (1.0 - theta) * diffusivity * kk * x[idx]);
                    x[idx] = num / (1.0 + dt * theta * diffusivity * kk);
                });
            }
        };
        update(us, eu_s, nu);
        update(ds, ed_s, gamma);
        detail::leray_in_place(us);

        State next;
        next.u = from_spectral(us);
        next.d = from_spectral(ds);
        next.t = s_.t + dt;

        StepReport rep;
        rep.d_drift = max_unit_deviation(next.d);
        if (rep.d_drift > 1e-3)
            throw ConstraintDrift("step: director drifted off the unit sphere, max | |d|-1 | = " +
                                  std::to_string(rep.d_drift) + " (reduce dt)");
        ++steps_;
        if (steps_ % cfg_.renormalize_every == 0) renormalize(next.d);
        if (!next.u.finite() || !next.d.finite())
            throw NonFinite("step: state became non-finite at t = " + std::to_string(next.t));

        s_ = std::move(next);
        asm_ = assemble(s_);

        rep.t = s_.t;
        rep.e_kin = asm_.e_kin;
        rep.e_elastic = asm_.e_elastic;
        rep.d_visc = asm_.d_visc;
        rep.d_rot = asm_.d_rot;
        rep.energy_residual = (total_energy() - e_before) / dt + dissipation();
        rep.div_u = max_divergence(s_.u);
        rep.cfl = dt * max_u_before / s_.u.grid.spacing();
        return rep;
    }

    /// Force a renormalization (used by run() on the final step regardless of cadence).
    void renormalize_director() {
        renormalize(s_.d);
        asm_ = assemble(s_);
    }

  private:
    struct Assembly {
        VectorField2 advect_u;      ///< (u.grad) u
        VectorField2 div_sigma_expl;///< div of (elastic + viscous - mu4 A) stress
        DirectorField dir_rhs;      ///< full director right-hand side
        DirectorField lap_d;
        double e_kin = 0.0, e_elastic = 0.0, d_visc = 0.0, d_rot = 0.0, max_u = 0.0;
    };

    Assembly assemble(const State& s) const {
        const double a = isotropic_constant(k_);
        const TensorField22 grad_u = gradient(s.u);
        const TensorField32 grad_d = gradient(s.d);
        DirectorField lap_d = laplacian(s.d);
        const auto vd = variational_derivatives(s.d, k_, grad_d);
        const auto mf = molecular_field(s.d, k_, vd, lap_d);
        const TensorField22 sigma_e = ericksen_stress(s.d, k_, vd, grad_d);
        const auto forms = leslie_stress_decomposed(s.u, s.d, k_, l_, grad_u, lap_d, mf);
        const auto rhs = director_rhs(s.u, s.d, k_, l_, grad_u, grad_d, mf);

        const double q = l_.lambda2 * l_.lambda2 / l_.lambda1;
        const double alpha = l_.mu1 - q;
        const double beta = l_.mu5 + l_.mu6 + q;

        Assembly out;
        out.lap_d = std::move(lap_d);
        out.dir_rhs = rhs.full;
        out.advect_u = VectorField2(s.u.grid);

        TensorField22 sigma_expl(s.u.grid);
        double kin = 0.0, elastic = 0.0, visc = 0.0, rot = 0.0;
        for (std::size_t p = 0; p < s.u.points(); ++p) {
            const Mat2 gu = mat2_at(grad_u, p);
            const Vec2 uv = vec2_at(s.u, p);
            set_vec2(out.advect_u, p, mul(gu, uv));
            out.max_u = std::max(out.max_u, norm(uv));

            const Mat2 A = sym(gu);
            // Everything except the stiff isotropic part mu4 A, which the
            // integrator treats implicitly as (mu4/2) Lap u.
            Mat2 se = mat2_at(sigma_e, p) + mat2_at(forms.main, p) +
                      mat2_at(forms.perturbation, p) - A * l_.mu4;
            set_mat2(sigma_expl, p, se);

            const Vec3 dv = vec3_at(s.d, p);
            const Vec2 dh = leslie::in_plane(dv);
            const Vec2 Ad = mul(A, dh);
            const double dAd = dot(dh, Ad);
            kin += dot(uv, uv);
            elastic += frank::w_density_point(dv, mat32_at(grad_d, p), k_, a);
            visc += alpha * dAd * dAd + l_.mu4 * contract(A, A) + beta * dot(Ad, Ad);
            const Vec3 hp = vec3_at(mf.h_proj, p);
            rot += dot(hp, hp);
        }
        const double w = s.u.grid.cell_area();
        out.e_kin = 0.5 * kin * w;
        out.e_elastic = elastic * w;
        out.d_visc = visc * w;
        out.d_rot = -rot * w / l_.lambda1;
        out.div_sigma_expl = divergence(sigma_expl);
        return out;
    }

    State s_;
    FrankConstants k_;
    LeslieCoefficients l_;
    SolverConfig cfg_;
    Assembly asm_;
    int steps_ = 0;
    std::optional<Spectral<2>> prev_eu_;
    std::optional<Spectral<3>> prev_ed_;
};

/// Advance the state by one step and report on the result.
inline StepReport step(State& s, const FrankConstants& k, const LeslieCoefficients& l,
                       const SolverConfig& cfg) {
    Integrator integ(std::move(s), k, l, cfg);
    StepReport rep = integ.advance();
    s = integ.state();
    return rep;
}

/// Run until t_end, invoking the sink with the initial report (residual 0) and
/// one report per step. The director is renormalized on the final step no
/// matter the cadence, so accepted runs end on the constraint manifold. A
/// one-line warning is emitted (once) if the advective monitor exceeds its
/// safety factor.
inline State run(State s, const FrankConstants& k, const LeslieCoefficients& l,
                 const SolverConfig& cfg,
                 const std::function<void(const StepReport&)>& sink = {}) {
    Integrator integ(std::move(s), k, l, cfg);
    if (sink) sink(integ.current_report());
    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    bool warned = false;
    for (long i = 0; i < nsteps; ++i) {
        StepReport rep = integ.advance();
        if (i + 1 == nsteps && cfg.renormalize_every > 1) {
            integ.renormalize_director();
            rep.d_drift = max_unit_deviation(integ.state().d);
        }
        if (!warned && rep.cfl > cfg.cfl_safety) {
            std::fprintf(stderr, "warning: advective monitor %.3g exceeds safety factor %.3g\n",
                         rep.cfl, cfg.cfl_safety);
            warned = true;
        }
        if (sink) sink(rep);
    }
    return integ.state();
}

} // namespace els
