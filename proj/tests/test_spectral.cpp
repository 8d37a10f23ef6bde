#include "levyifpt/errors.hpp"
#include "levyifpt/spectral.hpp"

#include <doctest.h>

#include "fixtures.hpp"

#include <cmath>

using namespace levyifpt;
using fixtures::kou;
using fixtures::mixed_signed;
using fixtures::mixed_two;

TEST_CASE("Brownian spectral closed forms: theta* = -eta, lambda* = eta^2/2") {
    for (double eta : {-0.5, -1.0, -2.0}) {
        const auto sp = compute_spectral(fixtures::brownian(eta));
        CHECK(sp.theta_star == doctest::Approx(-eta).epsilon(1e-10));
        CHECK(sp.lambda_star == doctest::Approx(0.5 * eta * eta).epsilon(1e-10));
    }
    const auto sp = compute_spectral(fixtures::brownian(-std::sqrt(2.0)));
    CHECK(sp.lambda_star == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theta* satisfies the first-order condition for mixed models") {
    for (const LevyModel& m : {kou(), mixed_two(), mixed_signed()}) {
        const auto sp = compute_spectral(m);
        CHECK(std::abs(psi_derivative(m, Complex(sp.theta_star)).real()) < 1e-9);
        CHECK(sp.lambda_star > 0.0);
        CHECK(laplace_exponent(m, Complex(sp.theta_star)).real() ==
              doctest::Approx(-sp.lambda_star).epsilon(1e-10));
    }
}

TEST_CASE("positive drift is rejected") {
    MixedExpLevy m = canonical(kou());
    m.eta = 1.0;
    CHECK_THROWS_AS(compute_spectral(LevyModel(m)), NotNegativeDrift);
}

TEST_CASE("phi_bar closed form for Brownian drift") {
    // phi_bar(-lambda) = -eta - sqrt(eta^2 - 2 lambda)
    const LevyModel m = fixtures::brownian(-1.0);
    CHECK(phi_bar(m, 0.375) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(phi_bar(m, 0.5) == doctest::Approx(1.0).epsilon(1e-8));   // lambda = lambda*
    CHECK(phi_bar(m, 0.18) == doctest::Approx(1.0 - 0.8).epsilon(1e-10));
}

TEST_CASE("phi_bar solves psi = -lambda and is increasing in lambda") {
    for (const LevyModel& m : {kou(), mixed_two(), mixed_signed()}) {
        const auto sp = compute_spectral(m);
        double prev = 0.0;
        for (double f : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
            const double lam = f * sp.lambda_star;
            const double x = phi_bar(m, lam);
            CHECK(x > prev);
            CHECK(x <= sp.theta_star * (1.0 + 1e-9));
            CHECK(std::abs(laplace_exponent(m, Complex(x)).real() + lam) < 1e-10);
            prev = x;
        }
    }
}

TEST_CASE("phi_bar tends to zero as lambda -> 0+") {
    const LevyModel m = mixed_two();
    CHECK(std::abs(laplace_exponent(m, Complex(phi_bar(m, 1e-8))).real() + 1e-8) < 1e-12);
    CHECK(phi_bar(m, 1e-8) < 1e-6);
}

TEST_CASE("phi_bar range checks") {
    const LevyModel m = kou();
    const auto sp = compute_spectral(m);
    CHECK_THROWS_AS(phi_bar(m, 0.0), OutOfRange);
    CHECK_THROWS_AS(phi_bar(m, sp.lambda_star * 1.01), OutOfRange);
}

TEST_CASE("Brownian quadratic roots at q = 1.5") {
    const RootSet rs = cramer_lundberg_roots(fixtures::brownian(-1.0), Complex(1.5));
    REQUIRE(rs.plus_roots.size() == 1);
    REQUIRE(rs.minus_roots.size() == 1);
    CHECK(rs.plus_roots[0].real() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rs.minus_roots[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("q = 0 pins the trivial root") {
    for (const LevyModel& m : {kou(), fixtures::brownian(-1.0)}) {
        const RootSet rs = cramer_lundberg_roots(m, Complex(0.0));
        bool found_zero = false;
        for (const auto& r : rs.minus_roots) found_zero = found_zero || std::abs(r) == 0.0;
        CHECK(found_zero);
    }
}

TEST_CASE("root counts and residuals for mixed models, q > 0") {
    for (const LevyModel& model : {kou(), mixed_two(), mixed_signed()}) {
        const MixedExpLevy m = canonical(model);
        for (double q : {0.2, 1.0, 3.5}) {
            const RootSet rs = cramer_lundberg_roots(model, Complex(q));
            CHECK(rs.plus_roots.size() == m.up.size() + 1);
            CHECK(rs.minus_roots.size() == m.down.size() + 1);
            for (const auto& r : rs.plus_roots) {
                CHECK(r.real() > 0.0);
                CHECK(std::abs(laplace_exponent(model, r) - q) < 1e-9 * (1.0 + q));
            }
            for (const auto& r : rs.minus_roots) CHECK(r.real() < 0.0);
        }
    }
}

TEST_CASE("complex q with positive real part keeps the family split") {
    const LevyModel m = mixed_two();
    const MixedExpLevy c = canonical(m);
    for (const Complex q : {Complex(0.8, 2.0), Complex(2.0, -5.0), Complex(0.05, 40.0)}) {
        const RootSet rs = cramer_lundberg_roots(m, q);
        CHECK(rs.plus_roots.size() == c.up.size() + 1);
        CHECK(rs.minus_roots.size() == c.down.size() + 1);
        for (const auto& r : rs.plus_roots)
            CHECK(std::abs(laplace_exponent(m, r) - q) < 1e-9 * (1.0 + std::abs(q)));
    }
}

TEST_CASE("Vieta checks on randomized admissible models") {
    PathRng rng(2024, 7);
    for (int trial = 0; trial < 25; ++trial) {
        const LevyModel model = fixtures::random_admissible(rng);
        const MixedExpLevy m = canonical(model);
        const double q = 0.1 + 3.0 * rng.uniform();
        RootSet rs;
        try {
            rs = cramer_lundberg_roots(model, Complex(q));
        } catch (const RepeatedRoots&) {
            continue; // randomized draw landed on a near-confluent case
        }
        CHECK(rs.plus_roots.size() == m.up.size() + 1);
        CHECK(rs.minus_roots.size() == m.down.size() + 1);

        // Vieta in factored form: the cleared polynomial (psi - q) D(rho)
        // must equal cn * prod (x - root) identically; two probe points pin
        // every elementary symmetric function of the roots at once.
        const double cn = 0.5 * m.sigma * m.sigma * (m.up.size() % 2 == 1 ? -1.0 : 1.0);
        const auto poly_at = [&](Complex x) {
            Complex v = laplace_exponent(model, x) - q;
            for (const auto& t : m.up) v *= t.alpha - x;
            for (const auto& t : m.down) v *= t.alpha + x;
            return v;
        };
        const auto from_roots = [&](Complex x) {
            Complex v = cn;
            for (const auto& r : rs.plus_roots) v *= x - r;
            for (const auto& r : rs.minus_roots) v *= x - r;
            return v;
        };
        for (const Complex probe : {Complex(37.5, 11.0), Complex(-29.0, 17.0)}) {
            const Complex lhs = poly_at(probe);
            CHECK(std::abs(lhs - from_roots(probe)) < 1e-8 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("extension q = -lambda classifies phi_bar and the plus family") {
    for (const LevyModel& model : {kou(), mixed_two(), mixed_signed()}) {
        const MixedExpLevy m = canonical(model);
        const auto sp = compute_spectral(model);
        for (double f : {0.25, 0.5, 0.75}) {
            const double lam = f * sp.lambda_star;
            const RootSet rs = cramer_lundberg_roots(model, Complex(-lam));
            REQUIRE(rs.phi_bar.has_value());
            const double pb = *rs.phi_bar;
            CHECK(std::abs(pb - phi_bar(model, lam)) < 1e-9);
            CHECK(pb > 0.0);
            CHECK(pb <= sp.theta_star);
            CHECK(rs.minus_roots.size() == m.down.size() + 1);
            CHECK(rs.minus_roots[0].real() == doctest::Approx(pb));
            CHECK(rs.plus_roots.size() == m.up.size() + 1);
            for (const auto& r : rs.plus_roots) CHECK(r.real() > pb);
        }
    }
}

TEST_CASE("repeated roots at lambda = lambda* are rejected") {
    CHECK_THROWS_AS(cramer_lundberg_roots(fixtures::brownian(-1.0), Complex(-0.5)),
                    RepeatedRoots);
}

TEST_CASE("root cache returns shared results") {
    RootCache cache;
    const LevyModel m = kou();
    const auto a = cache.get(m, Complex(1.5));
    const auto b = cache.get(m, Complex(1.5));
    CHECK(a.get() == b.get());
    const auto c = cache.get(m, Complex(2.5));
    CHECK(a.get() != c.get());
}
