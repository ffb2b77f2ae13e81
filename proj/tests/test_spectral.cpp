#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include <els/initial_data.hpp>
#include <els/spectral.hpp>

using namespace els;

namespace {

const Grid kGrid = Grid::make(64, 2.0 * M_PI);

ScalarField sampled(const Grid& g, double (*f)(double, double)) {
    ScalarField out(g);
    const double h = g.spacing();
    for (std::size_t iy = 0; iy < g.n; ++iy)
        for (std::size_t ix = 0; ix < g.n; ++ix) out.at(0, iy * g.n + ix) = f(ix * h, iy * h);
    return out;
}

VectorField2 sampled2(const Grid& g, double (*fx)(double, double), double (*fy)(double, double)) {
    VectorField2 out(g);
    const double h = g.spacing();
    for (std::size_t iy = 0; iy < g.n; ++iy)
        for (std::size_t ix = 0; ix < g.n; ++ix) {
            const std::size_t p = iy * g.n + ix;
            out.at(0, p) = fx(ix * h, iy * h);
            out.at(1, p) = fy(ix * h, iy * h);
        }
    return out;
}

} // namespace

TEST_CASE("grid construction guards its invariants") {
    CHECK_THROWS_AS(Grid::make(0, 1.0), Error);
    CHECK_THROWS_AS(Grid::make(7, 1.0), Error);
    CHECK_THROWS_AS(Grid::make(48, 1.0), Error);
    CHECK_THROWS_AS(Grid::make(64, 0.0), Error);
    const Grid g = Grid::make(8, 4.0);
    CHECK(g.spacing() == 0.5);
    CHECK(g.size() == 64);
}

TEST_CASE("quadrature norms match closed-form integrals") {
    ScalarField one(kGrid);
    for (double& v : one.data) v = 1.0;
    const auto n1 = norms(one);
    CHECK(n1.l2 * n1.l2 == Catch::Approx(4.0 * M_PI * M_PI).epsilon(1e-13));
    CHECK(n1.linf == 1.0);

    const ScalarField s = sampled(kGrid, [](double x, double) { return std::sin(x); });
    const auto n2 = norms(s);
    CHECK(n2.l2 * n2.l2 == Catch::Approx(2.0 * M_PI * M_PI).epsilon(1e-12));
    // int sin^4 = (3/8) L per axis; H1 picks up int cos^2 = L^2/2 as well.
    CHECK(std::pow(n2.l4, 4) == Catch::Approx(1.5 * M_PI * M_PI).epsilon(1e-12));
    CHECK(n2.h1 * n2.h1 == Catch::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("spectral derivatives are exact on resolved modes") {
    const ScalarField s = sampled(kGrid, [](double x, double) { return std::sin(x); });
    const ScalarField lap = laplacian(s);
    double worst = 0.0;
    for (std::size_t p = 0; p < s.points(); ++p)
        worst = std::max(worst, std::abs(lap.at(0, p) + s.at(0, p)));
    CHECK(worst <= 1e-12);

    // Non-unit box: laplacian(sin(2 pi x / L)) = -(2 pi / L)^2 sin(2 pi x / L).
    const Grid g3 = Grid::make(32, 3.0);
    ScalarField t(g3);
    const double w = 2.0 * M_PI / 3.0;
    for (std::size_t iy = 0; iy < g3.n; ++iy)
        for (std::size_t ix = 0; ix < g3.n; ++ix)
            t.at(0, iy * g3.n + ix) = std::sin(w * ix * g3.spacing());
    const ScalarField lt = laplacian(t);
    double worst3 = 0.0;
    for (std::size_t p = 0; p < t.points(); ++p)
        worst3 = std::max(worst3, std::abs(lt.at(0, p) + w * w * t.at(0, p)));
    CHECK(worst3 <= 1e-12 * w * w);
}

TEST_CASE("derivatives commute") {
    const ScalarField f = synth::scalar(kGrid, 6, 99);
    const auto g = gradient(f);          // (df/dx, df/dy)
    ScalarField fx(kGrid), fy(kGrid);
    fx.data = std::vector<double>(g.data.begin(), g.data.begin() + kGrid.size());
    fy.data = std::vector<double>(g.data.begin() + kGrid.size(), g.data.end());
    const auto gxy = gradient(fx); // d/dy of df/dx lives in component 1
    const auto gyx = gradient(fy); // d/dx of df/dy lives in component 0
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < kGrid.size(); ++p) {
        const double a = gxy.at(1, p), b = gyx.at(0, p);
        num += (a - b) * (a - b);
        den += a * a;
    }
    CHECK(std::sqrt(num / std::max(den, 1e-30)) <= 1e-12);
}

TEST_CASE("directional conventions of gradient, divergence, curl") {
    // d = (cos x, sin x, 0): div of the in-plane part is -sin x and the
    // embedded curl is (0, 0, cos x).
    DirectorField d(kGrid);
    const double h = kGrid.spacing();
    for (std::size_t iy = 0; iy < kGrid.n; ++iy)
        for (std::size_t ix = 0; ix < kGrid.n; ++ix) {
            const std::size_t p = iy * kGrid.n + ix;
            d.at(0, p) = std::cos(ix * h);
            d.at(1, p) = std::sin(ix * h);
            d.at(2, p) = 0.0;
        }
    const DirectorField c = curl3(d);
    VectorField2 dh(kGrid);
    for (std::size_t p = 0; p < kGrid.size(); ++p) {
        dh.at(0, p) = d.at(0, p);
        dh.at(1, p) = d.at(1, p);
    }
    const ScalarField div = divergence(dh);
    double worst = 0.0;
    for (std::size_t iy = 0; iy < kGrid.n; ++iy)
        for (std::size_t ix = 0; ix < kGrid.n; ++ix) {
            const std::size_t p = iy * kGrid.n + ix;
            worst = std::max(worst, std::abs(div.at(0, p) + std::sin(ix * h)));
            worst = std::max(worst, std::abs(c.at(0, p)));
            worst = std::max(worst, std::abs(c.at(1, p)));
            worst = std::max(worst, std::abs(c.at(2, p) - std::cos(ix * h)));
        }
    CHECK(worst <= 1e-12);

    // Constant director: both derived fields vanish.
    DirectorField dc(kGrid);
    for (std::size_t p = 0; p < kGrid.size(); ++p) {
        dc.at(0, p) = 0.6;
        dc.at(1, p) = 0.0;
        dc.at(2, p) = 0.8;
    }
    CHECK(max_abs(curl3(dc)) == 0.0);
}

TEST_CASE("divergence-free projection") {
    SECTION("fixed point on a solenoidal mode") {
        const VectorField2 u =
            sampled2(kGrid, [](double, double y) { return std::sin(y); },
                     [](double, double) { return 0.0; });
        const VectorField2 p = leray_project(u);
        CHECK(relative_field_residual(p, u) <= 1e-12);
    }
    SECTION("gradients are annihilated") {
        const auto g = gradient(sampled(kGrid, [](double x, double y) {
            return std::cos(x) * std::sin(2 * y);
        }));
        VectorField2 gradphi(kGrid);
        gradphi.data = g.data;
        const VectorField2 p = leray_project(gradphi);
        CHECK(max_abs(p) <= 1e-12 * max_abs(gradphi));
    }
    SECTION("random fields: divergence, idempotence, orthogonality, Pythagoras") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            VectorField2 v(kGrid);
            const ScalarField f1 = synth::scalar(kGrid, 8, seed);
            const ScalarField f2 = synth::scalar(kGrid, 8, seed ^ 0xdeadbeefull);
            for (std::size_t p = 0; p < kGrid.size(); ++p) {
                v.at(0, p) = f1.at(0, p);
                v.at(1, p) = f2.at(0, p);
            }
            const VectorField2 pv = leray_project(v);
            const VectorField2 rest = leray_complement(v);
            CHECK(max_divergence(pv) <= 1e-10 * (norms(v).linf / kGrid.spacing() + 1.0));
            CHECK(relative_field_residual(leray_project(pv), pv) <= 1e-12);
            CHECK(std::abs(inner_l2(pv, rest)) <=
                  1e-10 * norms(pv).l2 * std::max(norms(rest).l2, 1.0));
            const double total = integral_sq(v);
            CHECK(integral_sq(pv) + integral_sq(rest) == Catch::Approx(total).epsilon(1e-10));
            VectorField2 sum(kGrid);
            for (std::size_t i = 0; i < sum.data.size(); ++i)
                sum.data[i] = pv.data[i] + rest.data[i];
            CHECK(relative_field_residual(sum, v) <= 1e-12);
        }
    }
}

TEST_CASE("screened Poisson inverse") {
    SECTION("single mode halves") {
        const VectorField2 u =
            sampled2(kGrid, [](double, double y) { return std::sin(y); },
                     [](double, double) { return 0.0; });
        const VectorField2 xi = helmholtz_inverse(u);
        double worst = 0.0;
        for (std::size_t p = 0; p < kGrid.size(); ++p)
            worst = std::max(worst, std::abs(xi.at(0, p) - 0.5 * u.at(0, p)) +
                                        std::abs(xi.at(1, p)));
        CHECK(worst <= 1e-13);
    }
    SECTION("mean mode passes through") {
        VectorField2 u(kGrid);
        for (std::size_t p = 0; p < kGrid.size(); ++p) {
            u.at(0, p) = 2.5;
            u.at(1, p) = -1.0;
        }
        const VectorField2 xi = helmholtz_inverse(u);
        CHECK(relative_field_residual(xi, u) <= 1e-14);
    }
    SECTION("forward operator inverts it and the norm contracts") {
        VectorField2 u(kGrid);
        const ScalarField f1 = synth::scalar(kGrid, 10, 77);
        const ScalarField f2 = synth::scalar(kGrid, 10, 78);
        for (std::size_t p = 0; p < kGrid.size(); ++p) {
            u.at(0, p) = f1.at(0, p);
            u.at(1, p) = f2.at(0, p);
        }
        const VectorField2 xi = helmholtz_inverse(u);
        VectorField2 back(kGrid);
        const VectorField2 lap = laplacian(xi);
        for (std::size_t i = 0; i < back.data.size(); ++i)
            back.data[i] = xi.data[i] - lap.data[i];
        CHECK(relative_field_residual(back, u) <= 1e-12);
        CHECK(norms(xi).l2 <= norms(u).l2);
        // Divergence-free input gives a divergence-free lift.
        const VectorField2 pu = leray_project(u);
        CHECK(max_divergence(helmholtz_inverse(pu)) <=
              1e-10 * (norms(pu).linf / kGrid.spacing() + 1.0));
    }
}

TEST_CASE("symmetric and skew split") {
    Mat2 m;
    m(0, 0) = 0.0;
    m(0, 1) = 1.0;
    m(1, 0) = 0.0;
    m(1, 1) = 0.0;
    const Mat2 s = sym(m), a = skew(m);
    CHECK(s(0, 1) == 0.5);
    CHECK(s(1, 0) == 0.5);
    CHECK(a(0, 1) == 0.5);
    CHECK(a(1, 0) == -0.5);

    const VectorField2 u = leray_project([&] {
        VectorField2 v(kGrid);
        const ScalarField f1 = synth::scalar(kGrid, 6, 5);
        const ScalarField f2 = synth::scalar(kGrid, 6, 6);
        for (std::size_t p = 0; p < kGrid.size(); ++p) {
            v.at(0, p) = f1.at(0, p);
            v.at(1, p) = f2.at(0, p);
        }
        return v;
    }());
    const TensorField22 g = gradient(u);
    auto [A, Om] = sym_skew(g);
    double worst_sum = 0.0, worst_tr = 0.0, worst_sym = 0.0;
    for (std::size_t p = 0; p < kGrid.size(); ++p) {
        const Mat2 gs = mat2_at(A, p) + mat2_at(Om, p);
        worst_sum = std::max(worst_sum, frobenius(gs - mat2_at(g, p)));
        worst_tr = std::max(worst_tr, std::abs(trace(mat2_at(A, p))));
        worst_sym = std::max(worst_sym, std::abs(mat2_at(Om, p)(0, 0)) +
                                            std::abs(mat2_at(Om, p)(1, 1)));
    }
    CHECK(worst_sum <= 1e-15 * std::max(1.0, max_abs(g)));
    CHECK(worst_tr <= 1e-10);  // trace A = div u = 0
    CHECK(worst_sym == 0.0);
}

TEST_CASE("lift identities") {
    SECTION("zero velocity") {
        const XiIdentityReport r = check_xi_identities(VectorField2(kGrid));
        CHECK(r.worst() <= 1e-15);
    }
    SECTION("single solenoidal mode") {
        const VectorField2 u =
            sampled2(kGrid, [](double, double y) { return std::sin(y); },
                     [](double, double) { return 0.0; });
        const XiIdentityReport r = check_xi_identities(u);
        CHECK(r.worst() <= 1e-12);
    }
    SECTION("seeded random solenoidal fields") {
        for (std::uint64_t seed : {11ull, 12ull, 13ull, 14ull, 15ull}) {
            const VectorField2 u = random_divfree_velocity(kGrid, 0.5, 6, seed);
            const XiIdentityReport r = check_xi_identities(u);
            CAPTURE(seed, r.sym_l2, r.sym_h1, r.strain, r.rotation);
            CHECK(r.worst() <= 1e-10);
        }
    }
}

TEST_CASE("aliasing mask") {
    const ScalarField f = synth::scalar(kGrid, 20, 4);
    const ScalarField fd = dealias(f);
    // Applying the mask twice changes nothing.
    CHECK(relative_field_residual(dealias(fd), fd) <= 1e-15);
    // Low-frequency content is untouched.
    const ScalarField low = synth::scalar(kGrid, 5, 4);
    CHECK(relative_field_residual(dealias(low), low) <= 1e-13);
}

TEST_CASE("embedding inequality observed at desk scale (diagnostic)") {
    double worst = 0.0;
    for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
        const ScalarField f = synth::scalar(kGrid, 8, seed);
        const auto n = norms(f);
        worst = std::max(worst, n.l4 * n.l4 / (n.l2 * n.h1));
    }
    std::printf("observed L4^2 / (L2 H1) ratio: %.4f\n", worst);
    CHECK(std::isfinite(worst));
}
