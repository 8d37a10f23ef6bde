#include "levyifpt/wiener_hopf.hpp"
#include "levyifpt/errors.hpp"

#include <cmath>
#include <vector>

namespace levyifpt {

namespace {

void guard_factor(Complex denom) {
    if (std::abs(denom) < 1e-13)
        throw PoleEvaluation("Wiener-Hopf factor evaluated at a pole");
}

// Psi+(q, theta) with iota = i theta substituted through the product form.
Complex plus_product(const MixedExpLevy& m, const RootSet& roots, Complex theta) {
    const Complex it = Complex(0.0, 1.0) * theta;
    Complex v = 1.0;
    for (const auto& t : effective_up(m)) v *= 1.0 - it / t.alpha;
    for (const auto& r : roots.plus_roots) {
        const Complex d = 1.0 - it / r;
        guard_factor(d);
        v /= d;
    }
    return v;
}

Complex minus_product(const MixedExpLevy& m, const RootSet& roots, Complex theta) {
    const Complex it = Complex(0.0, 1.0) * theta;
    Complex v = 1.0;
    for (const auto& t : effective_down(m)) v *= 1.0 + it / t.alpha;
    for (const auto& r : roots.minus_roots) {
        const Complex d = 1.0 - it / r;
        guard_factor(d);
        v /= d;
    }
    return v;
}

// Psi-(q, -i w) as a function of the transform variable w.
Complex minus_at(const MixedExpLevy& m, const RootSet& roots, Complex w) {
    Complex v = 1.0;
    for (const auto& t : effective_down(m)) v *= 1.0 + w / t.alpha;
    for (const auto& r : roots.minus_roots) {
        const Complex d = 1.0 - w / r;
        guard_factor(d);
        v /= d;
    }
    return v;
}

// Residue of Psi-(q, -i w) at w = minus root with index j.
Complex minus_residue(const MixedExpLevy& m, const RootSet& roots, std::size_t j) {
    const Complex rho = roots.minus_roots[j];
    Complex v = -rho;
    for (const auto& t : effective_down(m)) v *= 1.0 + rho / t.alpha;
    for (std::size_t k = 0; k < roots.minus_roots.size(); ++k) {
        if (k == j) continue;
        v /= 1.0 - rho / roots.minus_roots[k];
    }
    return v;
}

} // namespace

WhFactorValue wh_plus(const LevyModel& model, const RootSet& roots, Complex theta) {
    return {plus_product(canonical(model), roots, theta), roots.q, theta};
}

WhFactorValue wh_plus(const LevyModel& model, Complex q, Complex theta) {
    return wh_plus(model, cramer_lundberg_roots(model, q), theta);
}

WhFactorValue wh_minus(const LevyModel& model, const RootSet& roots, Complex theta) {
    return {minus_product(canonical(model), roots, theta), roots.q, theta};
}

WhFactorValue wh_minus(const LevyModel& model, Complex q, Complex theta) {
    return wh_minus(model, cramer_lundberg_roots(model, q), theta);
}

double wh_product_residual(const LevyModel& model, Complex q, Complex theta) {
    const RootSet roots = cramer_lundberg_roots(model, q);
    const Complex prod =
        wh_plus(model, roots, theta).value * wh_minus(model, roots, theta).value;
    const Complex target = q / (q - char_exponent(model, theta));
    return std::abs(prod - target);
}

double esscher_factor_identity_residual(const LevyModel& model, double q, double lam,
                                        Complex s) {
    if (!(q > 0.0)) throw OutOfRange("esscher identity requires q > 0");
    const double r = phi_bar(model, lam);
    const MixedExpLevy base = canonical(model);
    const LevyModel tilted = esscher_shift(base, r);

    const RootSet roots = cramer_lundberg_roots(model, Complex(q));
    const RootSet roots_r = cramer_lundberg_roots(tilted, Complex(q + lam));
    const Complex ir(0.0, r);

    const Complex plus_lhs = wh_plus(model, roots, s).value;
    const Complex plus_rhs =
        wh_plus(tilted, roots_r, s + ir).value / wh_plus(tilted, roots_r, ir).value;
    const Complex minus_lhs = wh_minus(model, roots, s).value;
    const Complex minus_rhs =
        wh_minus(tilted, roots_r, s + ir).value / wh_minus(tilted, roots_r, ir).value;

    return std::max(std::abs(plus_lhs - plus_rhs), std::abs(minus_lhs - minus_rhs));
}

Complex k_hat(const LevyModel& model, double theta, double q, double u) {
    if (!(theta > 0.0 && q > 0.0 && u > 0.0))
        throw OutOfRange("k_hat requires theta, q, u > 0");
    const RootSet roots = cramer_lundberg_roots(model, Complex(q));
    const Complex plus = wh_plus(model, roots, Complex(0.0, theta)).value;
    const Complex minus = wh_minus(model, roots, Complex(0.0, -u)).value;
    return plus * minus / (theta + u);
}

Complex pecherskii_rogozin(const LevyModel& model, const QuasiInvariantDist& mu,
                           const RootSet& roots, Complex theta) {
    const MixedExpLevy m = canonical(model);
    const Complex p_theta = minus_at(m, roots, theta);
    Complex sum = 0.0;
    for (std::size_t j = 0; j < roots.minus_roots.size(); ++j) {
        const Complex rho = roots.minus_roots[j];
        const Complex res = minus_residue(m, roots, j);
        sum += -mu.laplace(theta - rho) * res / (p_theta * (rho - theta));
    }
    return sum;
}

Complex pecherskii_rogozin(const LevyModel& model, const QuasiInvariantDist& mu, Complex q,
                           Complex theta) {
    return pecherskii_rogozin(model, mu, cramer_lundberg_roots(model, q), theta);
}

} // namespace levyifpt
