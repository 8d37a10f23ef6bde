#include "levyifpt/ifpt.hpp"
#include "levyifpt/errors.hpp"
#include "levyifpt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levyifpt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

QidTimeChange::QidTimeChange(SurvivalCurve curve, double lam)
    : curve_(std::move(curve)), lam_(lam) {
    if (!(lam > 0.0)) throw OutOfRange("time change requires lambda > 0");
}

double QidTimeChange::operator()(double t) const {
    const double s = curve_.survival(t);
    if (s <= 0.0) return kInf;
    return -std::log(s) / lam_;
}

double QidTimeChange::inverse(double s) const {
    if (s <= 0.0) return 0.0;
    return curve_.inverse_survival(std::exp(-lam_ * s));
}

QidTimeChange time_change_qid(const LevyModel& model, const SurvivalCurve& curve, double lam) {
    const SpectralData sp = compute_spectral(model);
    if (!(lam > 0.0) || lam > sp.lambda_star * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "lambda = " << lam << " outside (0, lambda* = " << sp.lambda_star << "]";
        throw OutOfRange(os.str());
    }
    return QidTimeChange(curve, lam);
}

RifptSolution solve_rifpt(const LevyModel& model, const SurvivalCurve& curve, double lam) {
    const SpectralData sp = compute_spectral(model);
    if (lam > sp.lambda_star * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "lambda = " << lam << " exceeds lambda* = " << sp.lambda_star;
        throw LambdaExceedsStar(os.str());
    }
    return RifptSolution{build_qid(model, lam), lam, curve, model};
}

RifptSolution solve_rifpt_normalized(const LevyModel& model, const SurvivalCurve& curve,
                                     double T) {
    if (!(T > 0.0)) throw OutOfRange("normalization horizon must be > 0");
    const double hbar = curve.survival(T);
    if (!(hbar > 0.0 && hbar < 1.0))
        throw OutOfRange("normalized lambda needs H-bar(T) in (0, 1)");
    const double lam0 = -std::log(hbar) / T;
    return solve_rifpt(model, curve, lam0);
}

std::vector<FirstPassageSample> simulate_time_changed_fp(const RifptSolution& solution,
                                                         const McParams& params) {
    const QidTimeChange tc(solution.curve, solution.lam);
    const double x_horizon = tc(params.horizon);
    if (!(x_horizon < kInf))
        throw OutOfRange("time change is infinite at the requested horizon");

    McParams xparams = params;
    xparams.horizon = x_horizon;
    std::vector<FirstPassageSample> samples =
        simulate_first_passage(solution.model, solution.dist, xparams);
    for (auto& s : samples) {
        if (censored(s)) continue;
        s.tau = std::min(tc.inverse(s.tau), params.horizon);
    }
    return samples;
}

EmpiricalTimeChange::EmpiricalTimeChange(std::vector<double> grid, std::vector<double> survival,
                                         SurvivalCurve curve)
    : grid_(std::move(grid)), survival_(std::move(survival)), curve_(std::move(curve)) {}

double EmpiricalTimeChange::invert_survival(double p) const {
    if (p >= survival_.front()) return grid_.front();
    std::size_t lo = 0, hi = survival_.size() - 1;
    if (p < survival_.back())
        throw InsufficientPaths("target survival below the resolved Monte Carlo range");
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (survival_[mid] > p ? lo : hi) = mid;
    }
    const double w = std::log(p / survival_[lo]) / std::log(survival_[hi] / survival_[lo]);
    return grid_[lo] + w * (grid_[hi] - grid_[lo]);
}

double EmpiricalTimeChange::operator()(double t) const {
    const double p = curve_.survival(t);
    if (p <= 0.0) return kInf;
    if (p >= 1.0) return 0.0;
    return invert_survival(p);
}

EmpiricalTimeChange time_change_general(const LevyModel& model, const InitialLawSampler& mu,
                                        const SurvivalCurve& curve, const McParams& params) {
    if (params.paths < 10000)
        throw OutOfRange("time_change_general needs at least 10^4 paths");
    const double p_min = curve.survival(curve.horizon());
    const double floor = 1.0 / static_cast<double>(params.paths);
    if (p_min < 2.0 * floor)
        throw InsufficientPaths("H-bar(horizon) is below the survival resolution 1/paths");

    const MixedExpLevy m = canonical(model);

    // Extend the simulation horizon until the tail of tau_0 is resolved
    // below the curve's terminal survival level.
    double x_horizon = 1.0;
    std::vector<double> taus;
    for (;;) {
        taus.assign(params.paths, kInf);
        McParams xp = params;
        xp.horizon = x_horizon;
        parallel_paths(params.paths, resolve_workers(params.workers),
                       [&](std::uint64_t first, std::uint64_t last) {
                           for (std::uint64_t i = first; i < last; ++i) {
                               VariateStream rng(params.seed, i, false);
                               const double x0 = mu(rng.raw());
                               taus[i] = simulate_path(m, x0, x_horizon, rng, xp).tau;
                           }
                       });
        std::size_t alive = 0;
        for (double tau : taus)
            if (!(tau < kInf)) ++alive;
        const double tail = static_cast<double>(alive) / static_cast<double>(params.paths);
        if (tail <= std::max(0.5 * p_min, 1.5 * floor)) break;
        if (x_horizon > 1e6)
            throw InsufficientPaths("first-passage tail did not resolve the curve's range");
        x_horizon *= 2.0;
    }

    std::vector<double> finite;
    finite.reserve(taus.size());
    for (double tau : taus)
        if (tau < kInf) finite.push_back(tau);
    if (finite.empty()) throw InsufficientPaths("no first passages observed");
    std::sort(finite.begin(), finite.end());

    const double t_lo = std::max(finite.front(), 1e-8 * x_horizon);
    std::vector<double> grid{0.0}, surv{1.0};
    const double ratio = std::pow(x_horizon / t_lo, 1.0 / 511.0);
    const double n = static_cast<double>(taus.size());
    double g = t_lo;
    for (int i = 0; i < 512; ++i, g *= ratio) {
        const auto crossed = std::upper_bound(finite.begin(), finite.end(), g) - finite.begin();
        const double p =
            std::max((n - static_cast<double>(crossed)) / n, floor); // clamp before inversion
        if (p < surv.back()) {
            grid.push_back(g);
            surv.push_back(p);
        }
    }
    return EmpiricalTimeChange(std::move(grid), std::move(surv), curve);
}

double FrailtySolution::joint_survival(const std::vector<double>& t) const {
    if (t.size() != spec.dimension())
        throw OutOfRange("joint_survival: wrong number of coordinates");
    double acc = 0.0;
    for (const auto& state : spec.states) {
        double prod = 1.0;
        for (std::size_t i = 0; i < t.size(); ++i) prod *= state.names[i].curve.survival(t[i]);
        acc += state.prob * prod;
    }
    return acc;
}

FrailtySolution solve_frailty(const FrailtySpec& spec) {
    if (spec.states.empty()) throw ValidationError("frailty spec has no states");
    double total = 0.0;
    const std::size_t d = spec.dimension();
    if (d == 0) throw ValidationError("frailty spec has no names");
    for (const auto& s : spec.states) {
        if (!(s.prob > 0.0)) throw ValidationError("state probabilities must be > 0");
        if (s.names.size() != d)
            throw ValidationError("every state must cover the same number of names");
        total += s.prob;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("state probabilities must sum to 1");

    FrailtySolution sol;
    sol.spec = spec;
    for (const auto& s : spec.states) {
        std::vector<RifptSolution> row;
        row.reserve(d);
        for (const auto& name : s.names) row.push_back(solve_rifpt(name.model, name.curve, name.lam));
        sol.per_state.push_back(std::move(row));
    }
    return sol;
}

std::vector<std::vector<double>> simulate_frailty(const FrailtySolution& sol,
                                                  const McParams& params) {
    const std::size_t d = sol.spec.dimension();
    std::vector<std::vector<double>> out(params.paths, std::vector<double>(d, kInf));

    std::vector<double> cum;
    double acc = 0.0;
    for (const auto& s : sol.spec.states) {
        acc += s.prob;
        cum.push_back(acc);
    }

    std::vector<std::vector<QidTimeChange>> changes;
    for (std::size_t j = 0; j < sol.per_state.size(); ++j) {
        std::vector<QidTimeChange> row;
        for (const auto& r : sol.per_state[j]) row.emplace_back(r.curve, r.lam);
        changes.push_back(std::move(row));
    }

    parallel_paths(params.paths, resolve_workers(params.workers),
                   [&](std::uint64_t first, std::uint64_t last) {
                       for (std::uint64_t i = first; i < last; ++i) {
                           VariateStream rng(params.seed, i, false);
                           const double u = rng.uniform();
                           std::size_t j = 0;
                           while (j + 1 < cum.size() && u > cum[j]) ++j;
                           for (std::size_t k = 0; k < d; ++k) {
                               const RifptSolution& r = sol.per_state[j][k];
                               const QidTimeChange& tc = changes[j][k];
                               const double xh = tc(params.horizon);
                               McParams xp = params;
                               xp.horizon = xh;
                               const double x0 = r.dist.sample(rng.raw());
                               const auto s =
                                   simulate_path(canonical(r.model), x0, xh, rng, xp);
                               if (!censored(s))
                                   out[i][k] = std::min(tc.inverse(s.tau), params.horizon);
                           }
                       }
                   });
    return out;
}

} // namespace levyifpt
