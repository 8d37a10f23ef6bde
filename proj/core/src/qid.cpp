#include "levyifpt/qid.hpp"
#include "levyifpt/errors.hpp"
#include "levyifpt/wiener_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levyifpt {

namespace {

// phi_bar(-lambda) followed by the plus roots, ascending real part.
std::vector<Complex> qid_rates(const RootSet& roots) {
    std::vector<Complex> rates;
    rates.push_back(roots.minus_roots.at(0));
    for (const auto& r : roots.plus_roots) rates.push_back(r);
    return rates;
}

void tidy_conjugate_pairs(std::vector<Complex>& rates) {
    for (auto& r : rates)
        if (std::abs(r.imag()) < 1e-9 * (1.0 + std::abs(r))) r = Complex(r.real());
    std::vector<bool> used(rates.size(), false);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (used[i] || rates[i].imag() == 0.0) continue;
        std::size_t partner = i;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < rates.size(); ++j) {
            if (j == i || used[j]) continue;
            const double d = std::abs(std::conj(rates[i]) - rates[j]);
            if (d < best) { best = d; partner = j; }
        }
        if (partner == i || best > 1e-6 * (1.0 + std::abs(rates[i])))
            throw NumericalError("complex rate without a conjugate partner");
        const Complex mean = 0.5 * (rates[i] + std::conj(rates[partner]));
        rates[i] = mean;
        rates[partner] = std::conj(mean);
        used[i] = used[partner] = true;
    }
}

} // namespace

QuasiInvariantDist::QuasiInvariantDist(double lam, double lambda_star,
                                       std::vector<QidTerm> terms, LevyModel model)
    : lam_(lam), lambda_star_(lambda_star), terms_(std::move(terms)), model_(std::move(model)) {
    double abs_w = 0.0, min_rate = std::numeric_limits<double>::infinity();
    Complex total = 0.0;
    for (const auto& t : terms_) {
        abs_w += std::abs(t.weight);
        min_rate = std::min(min_rate, t.rate.real());
        total += t.weight;
        if (!(t.rate.real() > 0.0))
            throw NumericalError("quasi-invariant rate with non-positive real part");
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw NumericalError("quasi-invariant weights do not sum to 1");
    x_tail_ = std::log(std::max(abs_w, 1.0) * 1e12) / min_rate;

    // The paper guarantees m_lambda is a density; a grid sweep guards the
    // partial-fraction arithmetic against sign bugs.
    const double x_lo = 1e-4, x_hi = std::log(std::max(abs_w, 1.0) * 1e10) / min_rate;
    const double step = std::pow(x_hi / x_lo, 1.0 / 2047.0);
    double x = x_lo;
    for (int i = 0; i < 2048; ++i, x *= step)
        if (density(x) < -1e-12)
            throw NumericalError("quasi-invariant density negative on the check grid");
}

Complex QuasiInvariantDist::laplace(Complex s) const {
    Complex v = 0.0;
    for (const auto& t : terms_) {
        const Complex d = t.rate + s;
        if (std::abs(d) < 1e-13 * (1.0 + std::abs(t.rate)))
            throw PoleEvaluation("mu_hat evaluated at a pole");
        v += t.weight * t.rate / d;
    }
    return v;
}

double QuasiInvariantDist::density(double x) const {
    Complex v = 0.0;
    for (const auto& t : terms_) v += t.weight * t.rate * std::exp(-t.rate * x);
    return v.real();
}

double QuasiInvariantDist::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    Complex tail = 0.0;
    for (const auto& t : terms_) tail += t.weight * std::exp(-t.rate * x);
    return std::clamp(1.0 - tail.real(), 0.0, 1.0);
}

double QuasiInvariantDist::mean() const {
    Complex v = 0.0;
    for (const auto& t : terms_) v += t.weight / t.rate;
    return v.real();
}

double QuasiInvariantDist::sample(PathRng& rng) const {
    const double u = rng.uniform();
    double lo = 0.0, hi = x_tail_;
    while (cdf(hi) < u) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

bool QuasiInvariantDist::all_real() const {
    for (const auto& t : terms_)
        if (t.rate.imag() != 0.0 || std::abs(t.weight.imag()) > 1e-10) return false;
    return true;
}

std::vector<double> QuasiInvariantDist::real_rates() const {
    std::vector<double> v;
    for (const auto& t : terms_) v.push_back(t.rate.real());
    return v;
}

std::vector<double> QuasiInvariantDist::real_weights() const {
    std::vector<double> v;
    for (const auto& t : terms_) v.push_back(t.weight.real());
    return v;
}

Complex mu_hat(const LevyModel& model, double lam, Complex theta) {
    const RootSet roots = cramer_lundberg_roots(model, Complex(-lam));
    const MixedExpLevy m = canonical(model);
    Complex v = 1.0;
    for (const auto& t : effective_up(m)) v *= 1.0 + theta / t.alpha;
    for (const auto& r : qid_rates(roots)) {
        const Complex d = r + theta;
        if (std::abs(d) < 1e-13 * (1.0 + std::abs(r)))
            throw PoleEvaluation("mu_hat evaluated at a pole");
        v *= r / d;
    }
    return v;
}

Complex mu_hat_esscher(const LevyModel& model, double lam, Complex theta) {
    const double r = phi_bar(model, lam);
    const LevyModel tilted = esscher_shift(canonical(model), r);
    const RootSet roots0 = cramer_lundberg_roots(tilted, Complex(0.0));
    const Complex num = wh_plus(tilted, roots0, Complex(0.0, 1.0) * (theta + r)).value;
    const Complex den = wh_plus(tilted, roots0, Complex(0.0, r)).value;
    return r / (r + theta) * num / den;
}

QuasiInvariantDist build_qid(const LevyModel& model, double lam) {
    const SpectralData sp = compute_spectral(model);
    if (!(lam > 0.0) || lam > sp.lambda_star * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "lambda = " << lam << " outside (0, lambda* = " << sp.lambda_star << "]";
        throw OutOfRange(os.str());
    }
    const RootSet roots = cramer_lundberg_roots(model, Complex(-lam));
    std::vector<Complex> rates = qid_rates(roots);
    tidy_conjugate_pairs(rates);
    std::sort(rates.begin(), rates.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    const MixedExpLevy m = canonical(model);
    std::vector<QidTerm> terms;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        Complex w = 1.0;
        for (const auto& t : effective_up(m)) w *= 1.0 - rates[i] / t.alpha;
        for (std::size_t j = 0; j < rates.size(); ++j)
            if (j != i) w /= 1.0 - rates[i] / rates[j];
        if (rates[i].imag() == 0.0) w = Complex(w.real());
        terms.push_back({rates[i], w});
    }
    return QuasiInvariantDist(lam, sp.lambda_star, std::move(terms), model);
}

double invariance_residual_residue(const LevyModel& model, double lam, double q,
                                   double theta) {
    if (!(q > 0.0) || !(theta > 0.0))
        throw OutOfRange("invariance residual requires q > 0 and theta > 0");
    const QuasiInvariantDist mu = build_qid(model, lam);
    const RootSet roots_q = cramer_lundberg_roots(model, Complex(q));
    const Complex plus = wh_plus(model, roots_q, Complex(0.0, theta)).value;

    Complex lhs = 0.0;
    for (const auto& t : mu.terms()) {
        const Complex minus = wh_minus(model, roots_q, Complex(0.0, -1.0) * t.rate).value;
        lhs += t.weight * t.rate * plus * minus / (t.rate + theta);
    }
    const Complex rhs = q / (q + lam) * mu.laplace(Complex(theta));
    return std::abs(lhs - rhs);
}

double invariance_residual_bromwich(const LevyModel& model, double lam, double q,
                                    double theta) {
    if (!(q > 0.0) || !(theta > 0.0))
        throw OutOfRange("invariance residual requires q > 0 and theta > 0");
    const QuasiInvariantDist mu = build_qid(model, lam);
    const RootSet roots_q = cramer_lundberg_roots(model, Complex(q));
    const Complex plus = wh_plus(model, roots_q, Complex(0.0, theta)).value;
    const double a = 0.5 * phi_bar(model, lam);

    const auto integrand = [&](double y) -> Complex {
        const Complex u(a, y);
        return plus * mu.laplace(-u) * wh_minus(model, roots_q, Complex(0.0, -1.0) * u).value /
               (u + theta);
    };

    // f decays like |u|^-4; the real-line trapezoid converges spectrally,
    // so truncation dominates the error.
    const double h = 0.01 / (1.0 + std::abs(theta));
    double cut = 128.0;
    while (std::abs(integrand(cut)) * cut / 3.0 > 1e-10) {
        cut *= 2.0;
        if (cut > 1e7) throw QuadratureFailure("Bromwich tail estimate did not converge");
    }
    const std::size_t n = static_cast<std::size_t>(cut / h) + 1;
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const Complex f = integrand(k * h);
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        acc_re += w * f.real();
        acc_im += w * f.imag();
    }
    (void)acc_im; // conjugate symmetry: the imaginary parts cancel pairwise
    const double integral = 2.0 * acc_re * h / (2.0 * 3.14159265358979323846);
    const Complex rhs = q / (q + lam) * mu.laplace(Complex(theta));
    return std::abs(integral - rhs.real()) + std::abs(rhs.imag());
}

} // namespace levyifpt
