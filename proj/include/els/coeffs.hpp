#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "els/errors.hpp"

namespace els {

/// Viscous coefficients mu1..mu6 of the stress, plus the two rotational
/// coefficients lambda1 = mu2 - mu3 and lambda2 = mu5 - mu6 stored explicitly
/// so that configs state them and validation can cross-check.
struct LeslieCoefficients {
    double mu1 = 0.0, mu2 = 0.0, mu3 = 0.0, mu4 = 0.0, mu5 = 0.0, mu6 = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
};

/// Splay / twist / bend elastic constants, all required positive.
struct FrankConstants {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0;
};

struct ConstraintCheck {
    std::string name;
    bool ok = false;
    /// For equalities: minus the absolute defect (0 when exact). For
    /// inequalities: distance to the admissible side (negative = violated).
    double slack = 0.0;
};

struct ValidationReport {
    std::vector<ConstraintCheck> checks;
    bool ok = true;

    std::string summary() const {
        std::string s;
        for (const auto& c : checks) {
            s += (c.ok ? "  [ok]   " : "  [FAIL] ") + c.name + " (slack " +
                 std::to_string(c.slack) + ")\n";
        }
        return s;
    }
};

namespace detail {

inline void require_finite_coeff(double v, const char* name) {
    if (!std::isfinite(v)) throw NonFinite(std::string("coefficients: ") + name + " is not finite");
}

} // namespace detail

/// Check the full admissibility block: the two lambda definitions, the
/// Onsager-reciprocity relation mu2 + mu3 = mu6 - mu5, strict lambda1 < 0 and
/// mu4 > 0, the three dissipation inequalities, and positive elastic constants.
/// Equality defects are measured against a tolerance scaled by the coefficient
/// magnitudes; nothing is thrown for a failed constraint (only for NaN input).
inline ValidationReport validate(const LeslieCoefficients& l, const FrankConstants& f) {
    for (auto [v, n] : {std::pair{l.mu1, "mu1"}, {l.mu2, "mu2"}, {l.mu3, "mu3"}, {l.mu4, "mu4"},
                        {l.mu5, "mu5"}, {l.mu6, "mu6"}, {l.lambda1, "lambda1"},
                        {l.lambda2, "lambda2"}, {f.k1, "k1"}, {f.k2, "k2"}, {f.k3, "k3"}})
        detail::require_finite_coeff(v, n);

    const double scale = std::max({1.0, std::abs(l.mu1), std::abs(l.mu2), std::abs(l.mu3),
                                   std::abs(l.mu4), std::abs(l.mu5), std::abs(l.mu6)});
    const double eq_tol = 1e-12 * scale;

    ValidationReport rep;
    auto equality = [&](const std::string& name, double lhs, double rhs) {
        const double defect = std::abs(lhs - rhs);
        rep.checks.push_back({name, defect <= eq_tol, -defect});
    };
    auto at_least = [&](const std::string& name, double value, double bound) {
        const double slack = value - bound;
        rep.checks.push_back({name, slack >= -eq_tol, slack});
    };
    auto strictly_positive = [&](const std::string& name, double value) {
        rep.checks.push_back({name, value > 0.0, value});
    };

    equality("lambda1 = mu2 - mu3", l.lambda1, l.mu2 - l.mu3);
    equality("lambda2 = mu5 - mu6", l.lambda2, l.mu5 - l.mu6);
    equality("mu2 + mu3 = mu6 - mu5", l.mu2 + l.mu3, l.mu6 - l.mu5);
    rep.checks.push_back({"lambda1 < 0", l.lambda1 < 0.0, -l.lambda1});
    strictly_positive("mu4 > 0", l.mu4);
    if (l.lambda1 != 0.0) {
        const double q = l.lambda2 * l.lambda2 / l.lambda1;
        at_least("mu1 - lambda2^2/lambda1 >= 0", l.mu1 - q, 0.0);
        at_least("mu5 + mu6 >= -lambda2^2/lambda1", l.mu5 + l.mu6, -q);
    } else {
        rep.checks.push_back({"mu1 - lambda2^2/lambda1 >= 0", false, 0.0});
        rep.checks.push_back({"mu5 + mu6 >= -lambda2^2/lambda1", false, 0.0});
    }
    strictly_positive("k1 > 0", f.k1);
    strictly_positive("k2 > 0", f.k2);
    strictly_positive("k3 > 0", f.k3);

    for (const auto& c : rep.checks) rep.ok = rep.ok && c.ok;
    return rep;
}

inline double isotropic_constant(const FrankConstants& f) { return std::min({f.k1, f.k2, f.k3}); }

/// Constants derived from an admissible set. Total functions of the inputs:
/// callers that need admissibility run validate() first (delta0 does).
struct DerivedConstants {
    double a = 0.0;        ///< isotropic elastic constant, min(k1,k2,k3)
    double delta = 0.0;    ///< elastic anisotropy, max(k1,k2,k3) - a
    double alpha = 0.0;    ///< mu1 - lambda2^2/lambda1
    double beta = 0.0;     ///< mu5 + mu6 + lambda2^2/lambda1
    double mu_floor = 0.0; ///< min{mu4, mu1+mu4+mu5+mu6, mu4+mu5+mu6+lambda2^2/lambda1}
    double gamma = 0.0;    ///< -2a/lambda1, the director relaxation diffusivity
    double c0_lower = 0.0; ///< min{mu4/16, -a^2/lambda1}

    static DerivedConstants from(const LeslieCoefficients& l, const FrankConstants& f) {
        DerivedConstants d;
        d.a = std::min({f.k1, f.k2, f.k3});
        d.delta = std::max({f.k1, f.k2, f.k3}) - d.a;
        const double q = l.lambda2 * l.lambda2 / l.lambda1;
        d.alpha = l.mu1 - q;
        d.beta = l.mu5 + l.mu6 + q;
        d.mu_floor = std::min({l.mu4, l.mu1 + l.mu4 + l.mu5 + l.mu6, l.mu4 + l.mu5 + l.mu6 + q});
        d.gamma = -2.0 * d.a / l.lambda1;
        d.c0_lower = std::min(l.mu4 / 16.0, -d.a * d.a / l.lambda1);
        return d;
    }
};

inline double mu_floor(const LeslieCoefficients& l) {
    const double q = l.lambda2 * l.lambda2 / l.lambda1;
    return std::min({l.mu4, l.mu1 + l.mu4 + l.mu5 + l.mu6, l.mu4 + l.mu5 + l.mu6 + q});
}

/// Largest elastic anisotropy for which the smallness-based twin estimate is
/// claimed, using the configured absolute constant c0_abs:
///   delta0 = min{ 1, |lambda1|/(|lambda1|+|lambda2|) * sqrt(mu4 / (-2 lambda1)) } * a / c0_abs.
inline double delta0(const LeslieCoefficients& l, const FrankConstants& f, double c0_abs = 1.0) {
    const auto rep = validate(l, f);
    if (!rep.ok)
        throw InvalidCoefficients("delta0: coefficient validation failed\n" + rep.summary());
    if (!(c0_abs > 0.0)) throw InvalidCoefficients("delta0: c0_abs must be positive");
    const double a = std::min({f.k1, f.k2, f.k3});
    const double l1 = std::abs(l.lambda1), l2 = std::abs(l.lambda2);
    const double factor = std::min(1.0, l1 / (l1 + l2) * std::sqrt(l.mu4 / (-2.0 * l.lambda1)));
    return factor * a / c0_abs;
}

} // namespace els
