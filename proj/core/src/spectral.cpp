#include "levyifpt/spectral.hpp"
#include "levyifpt/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

namespace levyifpt {

namespace {

constexpr double kThetaTol = 1e-12;

double psi_real(const LevyModel& model, double x) {
    return laplace_exponent(model, Complex(x)).real();
}

double dpsi_real(const LevyModel& model, double x) {
    return psi_derivative(model, Complex(x)).real();
}

// Polynomial coefficients, ascending powers. Multiplication by convolution.
std::vector<Complex> poly_mul(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> c(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

void poly_add(std::vector<Complex>& a, const std::vector<Complex>& b, Complex scale) {
    if (a.size() < b.size()) a.resize(b.size(), Complex(0.0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
}

std::vector<Complex> companion_roots(std::vector<Complex> c) {
    double maxc = 0.0;
    for (const auto& v : c) maxc = std::max(maxc, std::abs(v));
    if (maxc == 0.0) throw DegenerateModel("zero polynomial while clearing denominators");
    while (c.size() > 1 && std::abs(c.back()) < 1e-14 * maxc) c.pop_back();
    const std::size_t n = c.size() - 1;
    if (n == 0) throw DegenerateModel("exponent polynomial lost all degrees of freedom");

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) comp(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    std::vector<Complex> roots(n);
    for (std::size_t i = 0; i < n; ++i) roots[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return roots;
}

} // namespace

SpectralData compute_spectral(const LevyModel& model) {
    const MixedExpLevy m = canonical(model);
    const double mean = dpsi_real(model, 0.0);
    if (!(mean < 0.0)) {
        std::ostringstream os;
        os << "psi'(0) = " << mean << " >= 0: no strictly negative minimum";
        throw NotNegativeDrift(os.str());
    }

    const double ub = domain_upper(m);
    double hi;
    if (std::isfinite(ub)) {
        hi = ub - 1e-11 * (1.0 + ub);
        if (dpsi_real(model, hi) <= 0.0) {
            // Minimum pinned at the right domain endpoint.
            return {hi, -psi_real(model, hi)};
        }
    } else {
        hi = 1.0;
        while (dpsi_real(model, hi) <= 0.0) {
            hi *= 2.0;
            if (hi > 1e12) {
                const double inf = std::numeric_limits<double>::infinity();
                return {inf, inf};
            }
        }
    }

    double lo = 0.0;
    while (hi - lo > kThetaTol) {
        const double mid = 0.5 * (lo + hi);
        (dpsi_real(model, mid) < 0.0 ? lo : hi) = mid;
    }
    const double theta_star = 0.5 * (lo + hi);
    return {theta_star, -psi_real(model, theta_star)};
}

double phi_bar(const LevyModel& model, double lam) {
    const SpectralData sp = compute_spectral(model);
    if (!(lam > 0.0) || lam > sp.lambda_star * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "lambda = " << lam << " outside (0, lambda* = " << sp.lambda_star << "]";
        throw OutOfRange(os.str());
    }
    if (std::abs(lam - sp.lambda_star) <= 1e-14 * (1.0 + sp.lambda_star)) return sp.theta_star;

    // Bracketed Newton with bisection fallback on (0, theta*].
    double lo = 0.0, hi = sp.theta_star;
    double x = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
        const double f = psi_real(model, x) + lam;
        if (f > 0.0) lo = x;  // psi decreasing: psi(x) > -lam means x too small
        else hi = x;
        const double d = dpsi_real(model, x);
        double next = d != 0.0 ? x - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < kThetaTol && std::abs(f) < 1e-12 * (1.0 + lam)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

RootSet cramer_lundberg_roots(const LevyModel& model, Complex q) {
    const MixedExpLevy m = canonical(model);
    const bool real_q = q.imag() == 0.0;
    if (!(q.real() > 0.0) && !real_q)
        throw OutOfRange("cramer_lundberg_roots: complex q requires Re(q) > 0");

    const std::vector<ExpTerm>& up = effective_up(m);
    const std::vector<ExpTerm>& down = effective_down(m);

    // (psi(rho) - q) * prod_k (alpha_k^+ - rho) * prod_j (alpha_j^- + rho)
    std::vector<Complex> denom{Complex(1.0)};
    for (const auto& t : up) denom = poly_mul(denom, {Complex(t.alpha), Complex(-1.0)});
    for (const auto& t : down) denom = poly_mul(denom, {Complex(t.alpha), Complex(1.0)});

    const Complex c0 = -(q + Complex(m.ell > 0.0 ? m.ell : 0.0));
    std::vector<Complex> quad{c0, Complex(m.eta), Complex(0.5 * m.sigma * m.sigma)};
    while (quad.size() > 1 && quad.back() == Complex(0.0)) quad.pop_back();

    std::vector<Complex> poly = poly_mul(quad, denom);
    for (std::size_t k = 0; k < up.size(); ++k) {
        std::vector<Complex> part{Complex(1.0)};
        for (std::size_t k2 = 0; k2 < up.size(); ++k2)
            if (k2 != k) part = poly_mul(part, {Complex(up[k2].alpha), Complex(-1.0)});
        for (const auto& t : down) part = poly_mul(part, {Complex(t.alpha), Complex(1.0)});
        poly_add(poly, part, Complex(m.ell * m.p * up[k].a * up[k].alpha));
    }
    for (std::size_t j = 0; j < down.size(); ++j) {
        std::vector<Complex> part{Complex(1.0)};
        for (const auto& t : up) part = poly_mul(part, {Complex(t.alpha), Complex(-1.0)});
        for (std::size_t j2 = 0; j2 < down.size(); ++j2)
            if (j2 != j) part = poly_mul(part, {Complex(down[j2].alpha), Complex(1.0)});
        poly_add(poly, part, Complex(m.ell * (1.0 - m.p) * down[j].a * down[j].alpha));
    }

    std::vector<Complex> roots = companion_roots(std::move(poly));

    // Newton polish on the rational function itself.
    for (auto& r : roots) {
        Complex best = r;
        double best_res = std::numeric_limits<double>::infinity();
        Complex x = r;
        for (int it = 0; it < 20; ++it) {
            Complex f, d;
            try {
                f = laplace_exponent(model, x) - q;
                d = psi_derivative(model, x);
            } catch (const PoleEvaluation&) {
                break;
            }
            if (std::abs(f) < best_res) {
                best_res = std::abs(f);
                best = x;
            }
            if (std::abs(f) < 1e-14 * (1.0 + std::abs(q)) || d == Complex(0.0)) break;
            x -= f / d;
        }
        r = best;
    }

    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-7 * (1.0 + std::abs(roots[i]))) {
                std::ostringstream os;
                os << "roots of psi(rho) = q closer than 1e-7 relative near rho = "
                   << roots[i].real() << (roots[i].imag() < 0 ? "-" : "+")
                   << std::abs(roots[i].imag()) << "i";
                throw RepeatedRoots(os.str());
            }

    for (const auto& r : roots) {
        const double res = std::abs(laplace_exponent(model, r) - q);
        if (!(res < 1e-9 * (1.0 + std::abs(q))))
            throw NumericalError("Cramer-Lundberg root failed the residual check");
    }

    RootSet rs;
    rs.q = q;
    if (real_q && q.real() < 0.0) {
        const double lam = -q.real();
        const double pb = phi_bar(model, lam);
        rs.phi_bar = pb;
        // minus_roots[0] is the analytic continuation of the q>0 root that
        // vanishes at q=0; it has crossed into (0, theta*] and equals phi_bar.
        std::size_t nearest = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const double d = std::abs(roots[i] - Complex(pb));
            if (d < dist) { dist = d; nearest = i; }
        }
        if (!(dist < 1e-8 * (1.0 + pb)))
            throw NumericalError("no polynomial root matches phi_bar(-lambda)");
        rs.minus_roots.push_back(Complex(pb));
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (i == nearest) continue;
            if (roots[i].real() < 0.0) rs.minus_roots.push_back(roots[i]);
            else if (roots[i].real() > pb) rs.plus_roots.push_back(roots[i]);
            else throw NumericalError("root classification failed for q in [-lambda*, 0)");
        }
    } else if (real_q && q.real() == 0.0) {
        for (auto& r : roots) {
            if (std::abs(r) < 1e-9 * (1.0 + std::abs(r))) {
                rs.minus_roots.push_back(Complex(0.0)); // continuation of the q>0 minus family
            } else if (r.real() > 0.0) {
                rs.plus_roots.push_back(r);
            } else {
                rs.minus_roots.push_back(r);
            }
        }
    } else {
        for (const auto& r : roots)
            (r.real() > 0.0 ? rs.plus_roots : rs.minus_roots).push_back(r);
    }

    auto by_re = [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(rs.plus_roots.begin(), rs.plus_roots.end(), by_re);
    std::sort(rs.minus_roots.begin(), rs.minus_roots.end(),
              [&](const Complex& a, const Complex& b) { return by_re(b, a); });

    if (m.sigma > 0.0) {
        const std::size_t want_plus = up.size() + 1, want_minus = down.size() + 1;
        if (rs.plus_roots.size() != want_plus || rs.minus_roots.size() != want_minus)
            throw NumericalError("unexpected root counts after classification");
    }
    return rs;
}

std::size_t RootCache::KeyHash::operator()(const Key& k) const {
    auto h = std::hash<std::uint64_t>{};
    auto hd = std::hash<double>{};
    std::size_t v = h(k.fp);
    v ^= hd(k.re) + 0x9e3779b97f4a7c15ull + (v << 6) + (v >> 2);
    v ^= hd(k.im) + 0x9e3779b97f4a7c15ull + (v << 6) + (v >> 2);
    return v;
}

std::shared_ptr<const RootSet> RootCache::get(const LevyModel& model, Complex q) {
    const Key key{fingerprint(model), q.real(), q.imag()};
    {
        std::shared_lock lock(mutex_);
        if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    auto rs = std::make_shared<const RootSet>(cramer_lundberg_roots(model, q));
    std::unique_lock lock(mutex_);
    return map_.try_emplace(key, std::move(rs)).first->second;
}

} // namespace levyifpt
