#include "levyifpt/errors.hpp"
#include "levyifpt/mc.hpp"
#include "levyifpt/qid.hpp"
#include "levyifpt/wiener_hopf.hpp"

#include <doctest.h>

#include "fixtures.hpp"

#include <cmath>

using namespace levyifpt;
using fixtures::kou;
using fixtures::mixed_signed;
using fixtures::mixed_two;

TEST_CASE("factors are 1 at theta = 0") {
    for (const LevyModel& m : {kou(), mixed_two(), fixtures::brownian(-1.0)}) {
        CHECK(std::abs(wh_plus(m, Complex(1.0), Complex(0.0)).value - 1.0) == 0.0);
        CHECK(std::abs(wh_minus(m, Complex(1.0), Complex(0.0)).value - 1.0) == 0.0);
    }
}

TEST_CASE("Brownian closed form: Psi+(q,theta) = 3i/(theta + 3i) at q = 1.5") {
    const LevyModel m = fixtures::brownian(-1.0);
    for (double theta : {0.2, 1.0, 4.0, -2.5}) {
        const Complex expect = Complex(0.0, 3.0) / (Complex(theta) + Complex(0.0, 3.0));
        CHECK(std::abs(wh_plus(m, Complex(1.5), Complex(theta)).value - expect) < 1e-12);
        const Complex expect_minus = Complex(0.0, -1.0) / (Complex(theta) + Complex(0.0, -1.0));
        CHECK(std::abs(wh_minus(m, Complex(1.5), Complex(theta)).value - expect_minus) < 1e-12);
    }
}

TEST_CASE("characteristic-function bound |Psi+| <= 1 for real arguments") {
    PathRng rng(11, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const LevyModel m = fixtures::random_admissible(rng);
        const double q = 0.2 + 2.0 * rng.uniform();
        const RootSet rs = cramer_lundberg_roots(m, Complex(q));
        for (double theta = -8.0; theta <= 8.0; theta += 0.5) {
            CHECK(std::abs(wh_plus(m, rs, Complex(theta)).value) <= 1.0 + 1e-12);
            CHECK(std::abs(wh_minus(m, rs, Complex(theta)).value) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("factorization identity on a (q, theta) grid") {
    for (const LevyModel& m : {kou(), mixed_two(), mixed_signed(), fixtures::brownian(-0.8)}) {
        for (double q : {0.3, 1.0, 2.5})
            for (double theta : {-3.0, -0.7, 0.0, 1.3, 6.0})
                CHECK(wh_product_residual(m, Complex(q), Complex(theta)) < 1e-10);
    }
}

TEST_CASE("factorization identity for complex q with positive real part") {
    const LevyModel m = mixed_two();
    for (const Complex q : {Complex(0.5, 1.5), Complex(2.0, -3.0)})
        for (double theta : {-1.0, 0.4, 2.2})
            CHECK(wh_product_residual(m, q, Complex(theta)) < 1e-10);
}

TEST_CASE("extension identity at q = -lambda") {
    for (const LevyModel& m : {kou(), mixed_two(), mixed_signed()}) {
        const double lstar = compute_spectral(m).lambda_star;
        for (double f : {0.25, 0.5, 0.75})
            for (double theta : {-2.0, 0.5, 3.0})
                CHECK(wh_product_residual(m, Complex(-f * lstar), Complex(theta)) < 1e-10);
    }
}

TEST_CASE("theta = 0 residual is exactly zero") {
    CHECK(wh_product_residual(kou(), Complex(1.0), Complex(0.0)) == 0.0);
}

TEST_CASE("Esscher change-of-variable identity") {
    SUBCASE("s = 0 is exact") {
        CHECK(esscher_factor_identity_residual(kou(), 1.0, 0.1, Complex(0.0)) < 1e-14);
    }
    SUBCASE("Brownian point from the closed forms") {
        CHECK(esscher_factor_identity_residual(fixtures::brownian(-1.0), 1.0, 0.375,
                                               Complex(0.7)) < 1e-10);
    }
    SUBCASE("mixed models at random points") {
        PathRng rng(5, 0);
        for (const LevyModel& m : {kou(), mixed_two(), mixed_signed()}) {
            const double lstar = compute_spectral(m).lambda_star;
            for (int k = 0; k < 3; ++k) {
                const double q = 0.3 + 2.0 * rng.uniform();
                const double lam = (0.2 + 0.6 * rng.uniform()) * lstar;
                const double s = -1.0 + 3.0 * rng.uniform();
                CHECK(esscher_factor_identity_residual(m, q, lam, Complex(s)) < 1e-9);
            }
        }
    }
}

TEST_CASE("extension agrees with the Esscher route (q = 0 factor of the tilted model)") {
    for (const LevyModel& m : {kou(), mixed_two(), fixtures::brownian(-1.2)}) {
        const double lstar = compute_spectral(m).lambda_star;
        for (double f : {0.25, 0.5, 0.75}) {
            const double lam = f * lstar;
            const double r = phi_bar(m, lam);
            const LevyModel tilted = esscher_shift(canonical(m), r);
            const RootSet roots0 = cramer_lundberg_roots(tilted, Complex(0.0));
            const RootSet roots_ext = cramer_lundberg_roots(m, Complex(-lam));
            for (double u : {0.3, 1.1, 4.0}) {
                const Complex lhs = wh_plus(m, roots_ext, Complex(0.0, u)).value;
                const Complex rhs = wh_plus(tilted, roots0, Complex(0.0, u + r)).value /
                                    wh_plus(tilted, roots0, Complex(0.0, r)).value;
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
        }
    }
}

TEST_CASE("continuity of the extension in lambda") {
    const LevyModel m = kou();
    const double lstar = compute_spectral(m).lambda_star;
    const double del = 1e-6 * lstar;
    for (double f : {0.3, 0.6, 0.9}) {
        const double lam = f * lstar;
        const Complex a = wh_plus(m, Complex(-lam), Complex(0.0, 0.8)).value;
        const Complex b = wh_plus(m, Complex(-lam - del), Complex(0.0, 0.8)).value;
        CHECK(std::abs(a - b) < 1e-3);
    }
}

TEST_CASE("k_hat closed form and decay") {
    const LevyModel m = fixtures::brownian(-1.0);
    // Psi+(1.5, i) = 3/4, Psi-(1.5, -2i) = 1/3, so K_hat = (3/4)(1/3)/3 = 1/12.
    CHECK(std::abs(k_hat(m, 1.0, 1.5, 2.0) - Complex(1.0 / 12.0)) < 1e-12);
    const double v1 = std::abs(k_hat(m, 1.0, 1.5, 100.0));
    const double v2 = std::abs(k_hat(m, 1.0, 1.5, 200.0));
    CHECK(v1 < 0.02);
    CHECK(v2 < v1);
    CHECK(v1 / v2 == doctest::Approx(2.0).epsilon(0.1)); // ~ 1/u decay
    CHECK_THROWS_AS(k_hat(m, -1.0, 1.0, 1.0), OutOfRange);
}

TEST_CASE("k_hat matches a Monte Carlo transform oracle") {
    const LevyModel model = kou();
    const MixedExpLevy m = canonical(model);
    const double theta = 0.8, q = 1.2, u = 1.5;

    // K(x) = E_x[e^{-theta X(e(q))}; tau > e(q)] on an x-grid, then the
    // Laplace transform in x by the midpoint rule.
    const double x_max = 10.0;
    const int nodes = 21;
    McParams params;
    params.max_step = 0.02;
    std::vector<double> kx(nodes, 0.0);
    const std::uint64_t paths = 20000;
    for (int i = 0; i < nodes; ++i) {
        const double x = x_max * (i + 0.5) / nodes;
        double acc = 0.0;
        for (std::uint64_t p = 0; p < paths; ++p) {
            VariateStream rng(777 + static_cast<std::uint64_t>(i), p, false);
            const double horizon = rng.exponential(q);
            const auto s = simulate_path(m, x, horizon, rng, params, true);
            if (censored(s)) acc += std::exp(-theta * s.position);
        }
        kx[i] = acc / static_cast<double>(paths);
    }
    double transform = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double x = x_max * (i + 0.5) / nodes;
        transform += std::exp(-u * x) * kx[i] * (x_max / nodes);
    }
    const Complex expect = k_hat(model, theta, q, u);
    CHECK(std::abs(transform - expect.real()) < 1e-2);
}

TEST_CASE("pecherskii_rogozin total probability and exponential law") {
    const LevyModel m = kou();
    const double lstar = compute_spectral(m).lambda_star;
    const double lam = 0.5 * lstar;
    const QuasiInvariantDist mu = build_qid(m, lam);

    SUBCASE("q -> 0+ gives total mass 1") {
        const Complex v = pecherskii_rogozin(m, mu, Complex(1e-9), Complex(0.0));
        CHECK(std::abs(v - 1.0) < 1e-6);
    }
    SUBCASE("theta = 0 recovers the exponential law lambda/(lambda+q)") {
        for (double q : {0.2, 0.9, 3.1}) {
            const Complex v = pecherskii_rogozin(m, mu, Complex(q), Complex(0.0));
            CHECK(std::abs(v - lam / (lam + q)) < 1e-10);
        }
    }
}

TEST_CASE("pecherskii_rogozin matches the Brownian scalar quadrature oracle") {
    const LevyModel m = fixtures::brownian(-1.0);
    const double lam = 0.375;
    const QuasiInvariantDist mu = build_qid(m, lam);
    for (double q : {0.4, 1.5}) {
        // E_x[e^{-q tau}] = e^{rho0- x}; mix over the two-exponential density.
        const double rho_minus = 1.0 - std::sqrt(1.0 + 2.0 * q); // negative root
        const double oracle = fixtures::simpson(
            [&](double x) { return std::exp(rho_minus * x) * mu.density(x); }, 0.0, 80.0, 40000);
        const Complex v = pecherskii_rogozin(m, mu, Complex(q), Complex(0.0));
        CHECK(std::abs(v - oracle) < 1e-9);
    }
}
