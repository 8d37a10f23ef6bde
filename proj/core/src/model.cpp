#include "levyifpt/model.hpp"
#include "levyifpt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace levyifpt {

namespace {

constexpr double kPoleRelTol = 1e-12;

void check_off_poles(const MixedExpLevy& m, Complex theta) {
    for (const auto& t : m.up) {
        if (std::abs(theta - Complex(t.alpha)) < kPoleRelTol * (1.0 + t.alpha)) {
            std::ostringstream os;
            os << "theta within 1e-12 of up-jump pole alpha=" << t.alpha;
            throw PoleEvaluation(os.str());
        }
    }
    for (const auto& t : m.down) {
        if (std::abs(theta + Complex(t.alpha)) < kPoleRelTol * (1.0 + t.alpha)) {
            std::ostringstream os;
            os << "theta within 1e-12 of down-jump pole -alpha=" << -t.alpha;
            throw PoleEvaluation(os.str());
        }
    }
}

std::vector<ExpTerm> sorted_by_rate(std::vector<ExpTerm> terms) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const ExpTerm& x, const ExpTerm& y) { return x.alpha < y.alpha; });
    return terms;
}

void check_side(const std::vector<ExpTerm>& terms, const char* side,
                std::vector<std::string>& out) {
    if (terms.empty()) return;
    for (const auto& t : terms) {
        if (!(t.alpha > 0.0)) {
            out.push_back(std::string(side) + ": jump rate alpha must be > 0");
            return;
        }
    }
    const auto s = sorted_by_rate(terms);
    if (!(s.front().a > 0.0))
        out.push_back(std::string(side) + ": first (smallest-rate) weight must be positive");
    double partial = 0.0;
    for (std::size_t l = 0; l < s.size(); ++l) {
        partial += s[l].a * s[l].alpha;
        if (partial < -1e-12)
            out.push_back(std::string(side) + ": partial sum of a_k*alpha_k negative at l=" +
                          std::to_string(l + 1));
    }
    double total = 0.0;
    for (const auto& t : s) total += t.a;
    if (std::abs(total - 1.0) > 1e-9)
        out.push_back(std::string(side) + ": weights must sum to 1, got " + std::to_string(total));
}

} // namespace

const MixedExpLevy canonical(const LevyModel& model) {
    if (const auto* b = std::get_if<BrownianDriftLevy>(&model)) {
        MixedExpLevy m;
        m.sigma = 1.0;
        m.eta = b->eta;
        m.ell = 0.0;
        m.p = 0.0;
        return m;
    }
    return std::get<MixedExpLevy>(model);
}

ValidationReport validate(const LevyModel& model) {
    ValidationReport rep;
    if (const auto* b = std::get_if<BrownianDriftLevy>(&model)) {
        if (!(b->eta < 0.0)) rep.violations.push_back("brownian: drift eta must be < 0");
        return rep;
    }
    const auto& m = std::get<MixedExpLevy>(model);
    if (m.sigma < 0.0) rep.violations.push_back("sigma must be >= 0");
    if (m.ell < 0.0) rep.violations.push_back("ell must be >= 0");
    if (m.p < 0.0 || m.p > 1.0) rep.violations.push_back("p must lie in [0,1]");
    if (m.ell > 0.0) {
        if (m.p > 0.0 && m.up.empty())
            rep.violations.push_back("p > 0 requires at least one up term");
        if (m.p < 1.0 && m.down.empty())
            rep.violations.push_back("p < 1 requires at least one down term");
        if (m.p > 0.0) check_side(m.up, "up", rep.violations);
        if (m.p < 1.0) check_side(m.down, "down", rep.violations);
    }

    const bool down_mass = m.ell > 0.0 && (1.0 - m.p) > 0.0 && !m.down.empty();
    if (!(m.sigma > 0.0) && !down_mass)
        rep.violations.push_back("smoothness: need sigma > 0 or down-jump mass present");

    // Negative-mean condition, with the Poisson rate as an explicit factor.
    if (rep.violations.empty()) {
        double mean_jump = 0.0;
        for (const auto& t : m.up) mean_jump += m.p * t.a / t.alpha;
        for (const auto& t : m.down) mean_jump -= (1.0 - m.p) * t.a / t.alpha;
        const double psi1 = m.eta + m.ell * mean_jump;
        if (!(psi1 < 0.0)) {
            std::ostringstream os;
            os << "mean condition violated: psi'(0) = " << psi1 << " >= 0";
            rep.violations.push_back(os.str());
        }
    }
    return rep;
}

Complex jump_mgf(const MixedExpLevy& m, Complex theta) {
    Complex v = 0.0;
    for (const auto& t : m.up) v += m.p * t.a * t.alpha / (Complex(t.alpha) - theta);
    for (const auto& t : m.down) v += (1.0 - m.p) * t.a * t.alpha / (Complex(t.alpha) + theta);
    return v;
}

Complex laplace_exponent(const LevyModel& model, Complex theta) {
    const MixedExpLevy m = canonical(model);
    check_off_poles(m, theta);
    Complex v = 0.5 * m.sigma * m.sigma * theta * theta + m.eta * theta;
    if (m.ell > 0.0) v += m.ell * (jump_mgf(m, theta) - 1.0);
    return v;
}

Complex char_exponent(const LevyModel& model, Complex theta) {
    return laplace_exponent(model, Complex(0.0, 1.0) * theta);
}

Complex psi_derivative(const LevyModel& model, Complex theta) {
    const MixedExpLevy m = canonical(model);
    check_off_poles(m, theta);
    Complex v = m.sigma * m.sigma * theta + m.eta;
    for (const auto& t : m.up) {
        const Complex d = Complex(t.alpha) - theta;
        v += m.ell * m.p * t.a * t.alpha / (d * d);
    }
    for (const auto& t : m.down) {
        const Complex d = Complex(t.alpha) + theta;
        v -= m.ell * (1.0 - m.p) * t.a * t.alpha / (d * d);
    }
    return v;
}

double domain_upper(const MixedExpLevy& m) {
    double u = std::numeric_limits<double>::infinity();
    if (m.ell > 0.0 && m.p > 0.0)
        for (const auto& t : m.up) u = std::min(u, t.alpha);
    return u;
}

double domain_lower(const MixedExpLevy& m) {
    double l = -std::numeric_limits<double>::infinity();
    if (m.ell > 0.0 && m.p < 1.0)
        for (const auto& t : m.down) l = std::max(l, -t.alpha);
    return l;
}

bool psi_finite_at(const LevyModel& model, double theta) {
    const MixedExpLevy m = canonical(model);
    return theta > domain_lower(m) && theta < domain_upper(m);
}

MixedExpLevy esscher_shift(const MixedExpLevy& m, double r) {
    if (!(r > domain_lower(m) && r < domain_upper(m)))
        throw OutOfRange("esscher_shift: tilt parameter outside the exponent domain");
    MixedExpLevy s;
    s.sigma = m.sigma;
    s.eta = m.eta + m.sigma * m.sigma * r;
    if (m.ell == 0.0) return s;

    const double mgf = jump_mgf(m, Complex(r)).real();
    s.ell = m.ell * mgf;
    double up_mass = 0.0, down_mass = 0.0;
    for (const auto& t : m.up) {
        const double w = m.p * t.a * t.alpha / (t.alpha - r);
        s.up.push_back({w, t.alpha - r});
        up_mass += w;
    }
    for (const auto& t : m.down) {
        const double w = (1.0 - m.p) * t.a * t.alpha / (t.alpha + r);
        s.down.push_back({w, t.alpha + r});
        down_mass += w;
    }
    s.p = up_mass / mgf;
    for (auto& t : s.up)
        t.a = up_mass != 0.0 ? t.a / up_mass : 0.0;
    for (auto& t : s.down)
        t.a = down_mass != 0.0 ? t.a / down_mass : 0.0;
    if (up_mass == 0.0) s.up.clear();
    if (down_mass == 0.0) s.down.clear();
    return s;
}

const std::vector<ExpTerm>& effective_up(const MixedExpLevy& m) {
    static const std::vector<ExpTerm> kNone;
    return (m.ell > 0.0 && m.p > 0.0) ? m.up : kNone;
}

const std::vector<ExpTerm>& effective_down(const MixedExpLevy& m) {
    static const std::vector<ExpTerm> kNone;
    return (m.ell > 0.0 && m.p < 1.0) ? m.down : kNone;
}

std::uint64_t fingerprint(const LevyModel& model) {
    const MixedExpLevy m = canonical(model);
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](double x) {
        std::uint64_t b;
        std::memcpy(&b, &x, sizeof b);
        h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(m.sigma);
    mix(m.eta);
    mix(m.ell);
    mix(m.p);
    for (const auto& t : m.up) { mix(t.a); mix(t.alpha); }
    mix(std::numeric_limits<double>::max()); // separator between sides
    for (const auto& t : m.down) { mix(t.a); mix(t.alpha); }
    return h;
}

} // namespace levyifpt
