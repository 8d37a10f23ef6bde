#include "levyifpt/errors.hpp"
#include "levyifpt/mc.hpp"
#include "levyifpt/qid.hpp"

#include <doctest.h>

#include "fixtures.hpp"

#include <cmath>

using namespace levyifpt;
using fixtures::kou;
using fixtures::mixed_signed;
using fixtures::mixed_two;

TEST_CASE("mu_hat is 1 at theta = 0") {
    for (const LevyModel& m : {kou(), mixed_two(), fixtures::brownian(-1.0)}) {
        const double lam = 0.4 * compute_spectral(m).lambda_star;
        CHECK(std::abs(mu_hat(m, lam, Complex(0.0)) - 1.0) < 1e-12);
    }
}

TEST_CASE("Brownian mu_hat closed form at eta = -1, lambda = 0.375") {
    // theta_pm = eta -+ sqrt(eta^2 - 2 lambda) gives rates 0.5 and 1.5:
    // mu_hat(theta) = 0.75 (1/(theta+0.5) - 1/(theta+1.5)).
    const LevyModel m = fixtures::brownian(-1.0);
    for (double theta : {0.0, 0.3, 1.0, 5.0}) {
        const double expect = 0.75 * (1.0 / (theta + 0.5) - 1.0 / (theta + 1.5));
        CHECK(std::abs(mu_hat(m, 0.375, Complex(theta)) - expect) < 1e-12);
    }
}

TEST_CASE("product form agrees with the Esscher evaluation of the extension") {
    for (const LevyModel& m : {kou(), mixed_two(), mixed_signed(), fixtures::brownian(-0.9)}) {
        const double lstar = compute_spectral(m).lambda_star;
        for (double f : {0.3, 0.6, 0.9}) {
            const double lam = f * lstar;
            for (double theta : {0.2, 1.0, 3.5}) {
                const Complex a = mu_hat(m, lam, Complex(theta));
                const Complex b = mu_hat_esscher(m, lam, Complex(theta));
                CHECK(std::abs(a - b) < 1e-10);
            }
        }
    }
}

TEST_CASE("build_qid reproduces the Brownian two-exponential mixture") {
    const QuasiInvariantDist dist = build_qid(fixtures::brownian(-1.0), 0.375);
    REQUIRE(dist.terms().size() == 2);
    CHECK(dist.all_real());
    const auto rates = dist.real_rates();
    const auto weights = dist.real_weights();
    CHECK(rates[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rates[1] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(weights[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(weights[1] == doctest::Approx(-0.5).epsilon(1e-10));
    // density 0.75 (e^{-x/2} - e^{-3x/2}); total mass 1; mean 8/3.
    for (double x : {0.1, 0.7, 2.0})
        CHECK(dist.density(x) ==
              doctest::Approx(0.75 * (std::exp(-0.5 * x) - std::exp(-1.5 * x))).epsilon(1e-12));
    CHECK(dist.mean() == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    CHECK(dist.cdf(0.0) == 0.0);
    CHECK(dist.cdf(100.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("laplace transform of the built distribution matches mu_hat on a grid") {
    for (const LevyModel& m : {kou(), mixed_two(), mixed_signed()}) {
        const double lam = 0.55 * compute_spectral(m).lambda_star;
        const QuasiInvariantDist dist = build_qid(m, lam);
        for (double theta : {0.0, 0.4, 1.7, 6.0})
            CHECK(std::abs(dist.laplace(Complex(theta)) - mu_hat(m, lam, Complex(theta))) <
                  1e-10);
    }
}

TEST_CASE("weights sum to one for randomized models") {
    PathRng rng(31, 2);
    int built = 0;
    while (built < 8) {
        const LevyModel m = fixtures::random_admissible(rng);
        const double lam = (0.2 + 0.7 * rng.uniform()) * compute_spectral(m).lambda_star;
        QuasiInvariantDist dist = build_qid(m, lam); // constructor enforces sum == 1
        double total = 0.0;
        for (const auto& t : dist.terms()) total += t.weight.real();
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        ++built;
    }
}

TEST_CASE("cdf agrees with quadrature of the density") {
    const QuasiInvariantDist dist = build_qid(kou(), 0.5 * compute_spectral(kou()).lambda_star);
    for (double x : {0.5, 1.0, 5.0}) {
        const double quad =
            fixtures::simpson([&](double y) { return dist.density(y); }, 0.0, x, 20000);
        CHECK(dist.cdf(x) == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("cdf is monotone with values in [0,1]") {
    const QuasiInvariantDist dist =
        build_qid(mixed_signed(), 0.7 * compute_spectral(mixed_signed()).lambda_star);
    double prev = 0.0;
    for (double x = 0.0; x <= 20.0; x += 0.05) {
        const double c = dist.cdf(x);
        CHECK(c >= prev - 1e-14);
        CHECK(c <= 1.0);
        prev = c;
    }
}

TEST_CASE("sampler: degenerate single-exponential term behaves like Exp") {
    const QuasiInvariantDist dist(0.3, 1.0, {{Complex(2.0), Complex(1.0)}},
                                  fixtures::brownian(-1.0));
    PathRng rng(99, 0);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i) xs.push_back(dist.sample(rng));
    const double ks =
        ks_distance(xs, [](double x) { return 1.0 - std::exp(-2.0 * x); });
    CHECK(ks < 1.63 / std::sqrt(100000.0)); // 1% KS level
    double mean = 0.0;
    for (double x : xs) mean += x;
    CHECK(mean / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("sampler mean matches the moment integral for the Brownian mixture") {
    const QuasiInvariantDist dist = build_qid(fixtures::brownian(-1.0), 0.375);
    PathRng rng(123, 7);
    double mean = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) mean += dist.sample(rng);
    mean /= n;
    CHECK(mean == doctest::Approx(8.0 / 3.0).epsilon(0.01));
}

TEST_CASE("sampler passes a KS test against the closed-form cdf") {
    const QuasiInvariantDist dist = build_qid(kou(), 0.4 * compute_spectral(kou()).lambda_star);
    PathRng rng(2718, 1);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i) xs.push_back(dist.sample(rng));
    const double ks = ks_distance(xs, [&](double x) { return dist.cdf(x); });
    CHECK(ks < 1.63 / std::sqrt(100000.0));
}

TEST_CASE("lambda = lambda* is confluent for Brownian drift and rejected") {
    CHECK_THROWS_AS(build_qid(fixtures::brownian(-1.0), 0.5), RepeatedRoots);
    CHECK_THROWS_AS(build_qid(fixtures::brownian(-1.0), 0.6), OutOfRange);
}

TEST_CASE("invariance residual via residues") {
    SUBCASE("Brownian closed-form point") {
        CHECK(invariance_residual_residue(fixtures::brownian(-1.0), 0.375, 1.0, 0.3) < 1e-10);
    }
    SUBCASE("theta -> 0 normalization limit") {
        CHECK(invariance_residual_residue(fixtures::brownian(-1.0), 0.375, 1.0, 1e-9) < 1e-10);
    }
    SUBCASE("mixed models on a small grid") {
        for (const LevyModel& m : {kou(), mixed_two(), mixed_signed()}) {
            const double lstar = compute_spectral(m).lambda_star;
            for (double f : {0.3, 0.8})
                for (double q : {0.5, 2.0})
                    for (double theta : {0.4, 2.5})
                        CHECK(invariance_residual_residue(m, f * lstar, q, theta) < 1e-9);
        }
    }
}

TEST_CASE("invariance residual via the Bromwich contour") {
    CHECK(invariance_residual_bromwich(fixtures::brownian(-1.0), 0.375, 1.0, 0.3) < 1e-7);
    const double lstar = compute_spectral(kou()).lambda_star;
    CHECK(invariance_residual_bromwich(kou(), 0.5 * lstar, 1.0, 0.7) < 1e-7);
    CHECK(invariance_residual_bromwich(kou(), 0.8 * lstar, 2.3, 1.4) < 1e-7);
}
