#pragma once

#include "levyifpt/model.hpp"
#include "levyifpt/rng.hpp"

#include <cmath>
#include <functional>

namespace fixtures {

using levyifpt::BrownianDriftLevy;
using levyifpt::Complex;
using levyifpt::ExpTerm;
using levyifpt::LevyModel;
using levyifpt::MixedExpLevy;

inline LevyModel brownian(double eta) { return BrownianDriftLevy{eta}; }

/// Kou double-exponential jump diffusion with negative mean.
inline LevyModel kou() {
    MixedExpLevy m;
    m.sigma = 0.3;
    m.eta = -0.35;
    m.ell = 0.8;
    m.p = 0.45;
    m.up = {{1.0, 2.5}};
    m.down = {{1.0, 3.0}};
    return m;
}

/// Two terms per side, all weights positive.
inline LevyModel mixed_two() {
    MixedExpLevy m;
    m.sigma = 0.25;
    m.eta = -0.3;
    m.ell = 1.1;
    m.p = 0.4;
    m.up = {{0.6, 3.0}, {0.4, 6.0}};
    m.down = {{0.7, 2.5}, {0.3, 5.0}};
    return m;
}

/// A Bartholomew-admissible mixture with a negative weight on the up side.
inline LevyModel mixed_signed() {
    MixedExpLevy m;
    m.sigma = 0.3;
    m.eta = -0.4;
    m.ell = 0.9;
    m.p = 0.35;
    m.up = {{1.4, 3.0}, {-0.4, 4.5}};
    m.down = {{1.0, 2.8}};
    return m;
}

/// Randomized admissible mixed-exponential models (positive weights keep
/// the Bartholomew conditions automatic; the drift is then pushed negative).
inline LevyModel random_admissible(levyifpt::PathRng& rng, int max_terms = 2) {
    MixedExpLevy m;
    m.sigma = 0.1 + 0.4 * rng.uniform();
    m.ell = 0.2 + 1.5 * rng.uniform();
    m.p = 0.15 + 0.7 * rng.uniform();
    const auto side = [&](double lo) {
        const int n = 1 + static_cast<int>(rng.uniform() * max_terms) % max_terms;
        std::vector<ExpTerm> terms;
        double mass = 0.0, rate = lo;
        for (int i = 0; i < n; ++i) {
            rate += 0.5 + 4.0 * rng.uniform();
            terms.push_back({0.2 + rng.uniform(), rate});
            mass += terms.back().a;
        }
        for (auto& t : terms) t.a /= mass;
        return terms;
    };
    m.up = side(1.5);
    m.down = side(1.0);
    double mean_jump = 0.0;
    for (const auto& t : m.up) mean_jump += m.p * t.a / t.alpha;
    for (const auto& t : m.down) mean_jump -= (1.0 - m.p) * t.a / t.alpha;
    m.eta = -m.ell * mean_jump - 0.1 - 0.5 * rng.uniform();
    return m;
}

/// Numerical integration of a smooth function on [a, b] (composite Simpson).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + h * i) * (i % 2 == 0 ? 2.0 : 4.0);
    return acc * h / 3.0;
}

/// Mixed-exponential jump density evaluated directly.
inline double jump_density(const MixedExpLevy& m, double x) {
    double v = 0.0;
    if (x > 0.0)
        for (const auto& t : m.up) v += m.p * t.a * t.alpha * std::exp(-t.alpha * x);
    else
        for (const auto& t : m.down) v += (1.0 - m.p) * t.a * t.alpha * std::exp(t.alpha * x);
    return v;
}

/// First-passage CDF below zero for unit-volatility Brownian motion with
/// drift eta started at x0 > 0:
///   P(tau <= t) = Phi((-x0 - eta t)/sqrt(t)) + e^{-2 eta x0} Phi((-x0 + eta t)/sqrt(t)).
inline double brownian_fp_cdf(double eta, double x0, double t) {
    if (t <= 0.0) return 0.0;
    const auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    const double s = std::sqrt(t);
    return Phi((-x0 - eta * t) / s) + std::exp(-2.0 * eta * x0) * Phi((-x0 + eta * t) / s);
}

} // namespace fixtures
