#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <els/initial_data.hpp>
#include <els/leslie.hpp>

using namespace els;

namespace {

const Grid kGrid = Grid::make(64, 2.0 * M_PI);
const LeslieCoefficients kReference{1.0, -1.0, 1.0, 2.0, 1.0, 1.0, -2.0, 0.0};
const LeslieCoefficients kCoupled{1.0, -1.25, 0.75, 2.0, 1.0, 0.5, -2.0, 0.5};
const FrankConstants kOne{1.0, 1.0, 1.0};
const FrankConstants kGeneral{1.0, 1.05, 1.1};

State smooth_state(std::uint64_t seed, double amplitude = 0.15) {
    State s;
    s.u = random_divfree_velocity(kGrid, amplitude, 2, seed);
    s.d = random_smooth_director(kGrid, {1.0, 0.0, 0.6}, amplitude, 2, seed + 1);
    return s;
}

Vec3 random_unit(std::mt19937_64& rng) {
    for (;;) {
        const Vec3 v{synth::gaussian(rng), synth::gaussian(rng), synth::gaussian(rng)};
        const double n = norm(v);
        if (n > 1e-4) return v * (1.0 / n);
    }
}

Mat2 random_sym_tracefree(std::mt19937_64& rng, double scale = 1.0) {
    Mat2 A;
    A(0, 0) = scale * synth::gaussian(rng);
    A(1, 1) = -A(0, 0);
    A(0, 1) = A(1, 0) = scale * synth::gaussian(rng);
    return A;
}

} // namespace

TEST_CASE("dissipation form evaluates its definition") {
    const LeslieCoefficients l{1.0, -1.0, 1.0, 1.0, 1.0, 1.0, -2.0, 0.0};
    Mat2 A;
    A(0, 0) = 1.0;
    A(1, 1) = -1.0;
    CHECK(quadratic_form_Q({1.0, 0.0}, A, l) == Catch::Approx(5.0).margin(1e-14));
    CHECK(quadratic_form_Q({1.0, 0.0}, Mat2{}, l) == 0.0);
}

TEST_CASE("dissipation form rejects malformed strain") {
    Mat2 notsym;
    notsym(0, 1) = 1.0;
    CHECK_THROWS_AS(quadratic_form_Q({1.0, 0.0}, notsym, kReference), NotSymmetric);
    Mat2 traced;
    traced(0, 0) = traced(1, 1) = 1.0;
    CHECK_THROWS_AS(quadratic_form_Q({1.0, 0.0}, traced, kReference), NotTraceFree);
}

TEST_CASE("dissipation form dominates the floor on admissible samples") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const LeslieCoefficients& l = (i % 2 == 0) ? kReference : kCoupled;
        const double floor = mu_floor(l);
        const Vec3 d = random_unit(rng);
        const Mat2 A = random_sym_tracefree(rng);
        const double q = quadratic_form_Q(leslie::in_plane(d), A, l);
        const double a2 = contract(A, A);
        CHECK(q - floor * a2 >= -1e-12 * std::max(1.0, a2));
    }
}

TEST_CASE("original stress reductions") {
    SECTION("nothing moves, nothing stresses") {
        State s;
        s.u = VectorField2(kGrid);
        s.d = DirectorField(kGrid);
        for (std::size_t p = 0; p < kGrid.size(); ++p) set_vec3(s.d, p, {1.0, 0.0, 0.0});
        CHECK(max_abs(leslie_stress_original(s.u, s.d, DirectorField(kGrid), kReference)) == 0.0);
    }
    SECTION("isotropic viscosity only gives mu4 A") {
        const LeslieCoefficients only4{0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0};
        const State s = smooth_state(3);
        const TensorField22 gu = gradient(s.u);
        const TensorField22 sig =
            leslie_stress_original(s.u, s.d, DirectorField(kGrid), only4);
        double worst = 0.0;
        for (std::size_t p = 0; p < kGrid.size(); ++p)
            worst = std::max(
                worst, frobenius(mat2_at(sig, p) - sym(mat2_at(gu, p)) * only4.mu4));
        CHECK(worst <= 1e-12 * std::max(1.0, max_abs(gu)));
    }
    SECTION("without mu2 and mu3 the director rate is irrelevant") {
        LeslieCoefficients l = kReference;
        l.mu2 = l.mu3 = 0.0; // breaks the lambda1 relation, but the stress assembly is total
        const State s = smooth_state(4);
        DirectorField rate(kGrid);
        for (std::size_t p = 0; p < kGrid.size(); ++p) set_vec3(rate, p, {0.4, -0.1, 0.9});
        const TensorField22 s0 = leslie_stress_original(s.u, s.d, DirectorField(kGrid), l);
        const TensorField22 s1 = leslie_stress_original(s.u, s.d, rate, l);
        CHECK(relative_field_residual(s0, s1) <= 1e-14);
    }
}

TEST_CASE("decomposed stress splits consistently") {
    const State s = smooth_state(5);
    const auto forms = leslie_stress_decomposed(s.u, s.d, kGeneral, kCoupled);
    double worst = 0.0;
    for (std::size_t p = 0; p < kGrid.size(); ++p) {
        const Mat2 sum = mat2_at(forms.strain_part, p) + mat2_at(forms.laplacian_part, p) +
                         mat2_at(forms.constraint_part, p);
        worst = std::max(worst, frobenius(sum - mat2_at(forms.main, p)));
    }
    CHECK(worst <= 1e-12 * std::max(1.0, max_abs(forms.main)));

    SECTION("one-constant elasticity kills the perturbation part") {
        const auto iso = leslie_stress_decomposed(s.u, s.d, kOne, kCoupled);
        CHECK(max_abs(iso.perturbation) <= 1e-10);
    }
    SECTION("constant director kills the laplacian and constraint parts") {
        State c = s;
        for (std::size_t p = 0; p < kGrid.size(); ++p) set_vec3(c.d, p, {0.0, 0.6, 0.8});
        const auto forms_c = leslie_stress_decomposed(c.u, c.d, kGeneral, kCoupled);
        CHECK(max_abs(forms_c.laplacian_part) <= 1e-12);
        CHECK(max_abs(forms_c.constraint_part) <= 1e-12);
        CHECK(relative_field_residual(forms_c.main, forms_c.strain_part) <= 1e-12);
    }
}

TEST_CASE("rewritten stress equals the original with the constitutive rate") {
    SECTION("resting constant state") {
        State s;
        s.u = VectorField2(kGrid);
        s.d = DirectorField(kGrid);
        for (std::size_t p = 0; p < kGrid.size(); ++p) set_vec3(s.d, p, {1.0, 0.0, 0.0});
        CHECK(check_equivalence_E0(s.u, s.d, kOne, kReference) <= 1e-14);
    }
    SECTION("one-constant smooth states") {
        for (std::uint64_t seed : {6ull, 7ull, 8ull}) {
            const State s = smooth_state(seed);
            CHECK(check_equivalence_E0(s.u, s.d, kOne, kReference) <= 1e-8);
        }
    }
    SECTION("general elasticity and full coupling") {
        for (std::uint64_t seed : {9ull, 10ull}) {
            const State s = smooth_state(seed);
            CHECK(check_equivalence_E0(s.u, s.d, kGeneral, kCoupled) <= 1e-8);
        }
    }
    SECTION("violating reciprocity breaks the equivalence") {
        // Shifting mu2 and mu3 together keeps both lambda definitions intact
        // but spoils mu2 + mu3 = -lambda2, the combination the regrouped d(x)d
        // blocks rely on. A mu5-only shift would be absorbed by c5.
        LeslieCoefficients broken = kCoupled;
        broken.mu2 += 0.15;
        broken.mu3 += 0.15;
        const State s = smooth_state(11);
        CHECK(check_equivalence_E0(s.u, s.d, kGeneral, broken) > 1e-4);
    }
}

TEST_CASE("strain-part contraction formula matches the assembled tensor") {
    std::mt19937_64 rng(99);
    const double a = isotropic_constant(kGeneral);
    int samples = 0;
    for (int rep = 0; rep < 40; ++rep) {
        const Grid g = Grid::make(16, 2.0 * M_PI);
        // Pointwise algebra: fabricate arbitrary unit directors, strains, and
        // laplacian values; no smoothness or consistency is required.
        DirectorField d(g);
        DirectorField lap(g);
        VectorField2 u(g);
        TensorField22 gu(g);
        for (std::size_t p = 0; p < g.size(); ++p) {
            set_vec3(d, p, random_unit(rng));
            set_vec3(lap, p,
                     {synth::gaussian(rng), synth::gaussian(rng), synth::gaussian(rng)});
            Mat2 m = random_sym_tracefree(rng);
            const Mat2 sk = [&] {
                Mat2 w;
                w(0, 1) = synth::gaussian(rng);
                w(1, 0) = -w(0, 1);
                return w;
            }();
            set_mat2(gu, p, m + sk);
        }
        MolecularField mf{DirectorField(g), DirectorField(g), DirectorField(g)};
        const auto forms = leslie_stress_decomposed(u, d, kGeneral, kCoupled, gu, lap, mf);

        for (std::size_t p = 0; p < g.size(); ++p) {
            Mat2 M;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) M(i, j) = synth::gaussian(rng);
            const Vec3 dv = vec3_at(d, p);
            const Vec2 dh = leslie::in_plane(dv);
            const Vec3 lv = vec3_at(lap, p);
            const Vec2 lh = leslie::in_plane(lv);
            const Mat2 A = sym(mat2_at(gu, p));
            const Mat2 Ms = sym(M), Ma = skew(M);
            const double r = kCoupled.lambda2 / kCoupled.lambda1;

            const double lhs = contract(mat2_at(forms.main, p), M);
            double rhs = contract_strain_part(dh, A, M, kCoupled);
            rhs += 2.0 * a * (r * dot(lh, mul(Ms, dh)) - dot(lh, mul(Ma, dh)));
            rhs += -2.0 * a * r * dot(lv, dv) * dot(dh, mul(Ms, dh));
            const double scale = std::max(1.0, frobenius(mat2_at(forms.main, p)) * frobenius(M));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
            ++samples;
        }
    }
    CHECK(samples >= 10000);
}

TEST_CASE("difference tensors telescope and obey their bounds") {
    std::mt19937_64 rng(314);
    const double a = 1.0;
    SECTION("coincident directors leave nothing") {
        const Vec3 d = random_unit(rng);
        const auto r = remainder_terms(d, d, random_sym_tracefree(rng),
                                       {0.3, -0.2, 0.9}, a, kCoupled);
        CHECK(frobenius(r.h_r) == 0.0);
        CHECK(frobenius(r.m_r) == 0.0);
        CHECK(frobenius(r.c_r) == 0.0);
    }
    SECTION("zero strain kills the strain-borne remainders") {
        const auto r = remainder_terms(random_unit(rng), random_unit(rng), Mat2{},
                                       {0.3, -0.2, 0.9}, a, kCoupled);
        CHECK(frobenius(r.h_r) == 0.0);
        CHECK(frobenius(r.m_r) == 0.0);
    }
    SECTION("seeded samples satisfy the product-rule bounds") {
        for (int i = 0; i < 10000; ++i) {
            const Vec3 d1 = random_unit(rng), d2 = random_unit(rng);
            const Mat2 A2 = random_sym_tracefree(rng, 2.0);
            const Vec3 lap{3.0 * synth::gaussian(rng), 3.0 * synth::gaussian(rng),
                           3.0 * synth::gaussian(rng)};
            const auto r = remainder_terms(d1, d2, A2, lap, a, kCoupled);
            const double scale = std::max(1.0, frobenius(A2) + norm(lap));
            CHECK(frobenius(r.h_r) <= r.h_bound + 1e-12 * scale);
            CHECK(frobenius(r.m_r) <= r.m_bound + 1e-12 * scale);
            CHECK(frobenius(r.c_r) <= r.c_bound + 1e-12 * scale);
        }
    }
    SECTION("unnormalized inputs are rejected") {
        CHECK_THROWS_AS(remainder_terms({2.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, Mat2{},
                                        {0.0, 0.0, 0.0}, a, kCoupled),
                        UnnormalizedDirector);
    }
}

TEST_CASE("director equation right-hand side") {
    SECTION("rest states are stationary") {
        State s;
        s.u = VectorField2(kGrid);
        s.d = DirectorField(kGrid);
        for (std::size_t p = 0; p < kGrid.size(); ++p) set_vec3(s.d, p, {0.6, 0.0, 0.8});
        const auto rhs = director_rhs(s.u, s.d, kOne, kReference);
        CHECK(max_abs(rhs.full) <= 1e-10);
    }
    SECTION("the twist profile relaxes nowhere under equal constants") {
        DirectorField d(kGrid);
        const double h = kGrid.spacing();
        for (std::size_t iy = 0; iy < kGrid.n; ++iy)
            for (std::size_t ix = 0; ix < kGrid.n; ++ix)
                set_vec3(d, iy * kGrid.n + ix, {std::cos(ix * h), std::sin(ix * h), 0.0});
        const auto rhs = director_rhs(VectorField2(kGrid), d, kOne, kReference);
        CHECK(max_abs(rhs.full) <= 1e-10);
    }
    SECTION("the rate stays tangent to the sphere") {
        for (std::uint64_t seed : {21ull, 22ull}) {
            const State s = smooth_state(seed);
            const auto rhs = director_rhs(s.u, s.d, kGeneral, kCoupled);
            double acc = 0.0;
            for (std::size_t p = 0; p < kGrid.size(); ++p)
                acc += std::abs(dot(vec3_at(s.d, p), vec3_at(rhs.full, p)));
            acc *= kGrid.cell_area();
            CHECK(acc <= 1e-6 * norms(rhs.full).l2 * norms(s.d).l2);
        }
    }
}
