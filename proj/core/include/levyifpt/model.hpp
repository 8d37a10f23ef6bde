#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace levyifpt {

using Complex = std::complex<double>;

/// One exponential component of a jump-size mixture: weight `a`, rate `alpha > 0`.
struct ExpTerm {
    double a = 0.0;
    double alpha = 0.0;
};

/// Mixed-exponential jump-diffusion
///   X_t = X_0 + eta t + sigma W_t + sum_{j<=N_t} U_j,
/// where N is Poisson with rate `ell` and the U_j are up-jumps with
/// probability `p` (density sum_k a_k alpha_k e^{-alpha_k x}, x > 0) and
/// down-jumps otherwise (mirrored density on x < 0). Weights may be
/// negative subject to the Bartholomew admissibility conditions.
struct MixedExpLevy {
    double sigma = 0.0;
    double eta = 0.0;
    double ell = 0.0;
    double p = 0.0;
    std::vector<ExpTerm> up;
    std::vector<ExpTerm> down;
};

/// Unit-volatility Brownian motion with drift eta < 0.
struct BrownianDriftLevy {
    double eta = 0.0;
};

using LevyModel = std::variant<MixedExpLevy, BrownianDriftLevy>;

/// Equivalent mixed-exponential parameters (Brownian maps to sigma=1, ell=0).
const MixedExpLevy canonical(const LevyModel& model);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks Bartholomew admissibility of both jump mixtures, the negative-mean
/// condition psi'(0) < 0 and the smoothness condition (sigma > 0 or
/// down-jump mass present). Returns a report instead of throwing.
ValidationReport validate(const LevyModel& model);

/// Laplace exponent psi(theta) = log E[e^{theta X_1}], analytically continued
/// off the real axis. Throws PoleEvaluation within relative tolerance 1e-12
/// of a rate pole alpha_k^+ or -alpha_k^-.
Complex laplace_exponent(const LevyModel& model, Complex theta);

/// Characteristic exponent Psi(theta) = psi(i theta).
Complex char_exponent(const LevyModel& model, Complex theta);

/// Analytic derivative psi'(theta).
Complex psi_derivative(const LevyModel& model, Complex theta);

/// E[e^{theta U}] for the jump law (1 if there are no jumps).
Complex jump_mgf(const MixedExpLevy& m, Complex theta);

/// Open domain (theta_lower, theta_upper) on which psi is finite for real
/// arguments: theta_upper = min alpha_k^+ (or +inf), theta_lower =
/// -min alpha_k^- (or -inf).
double domain_upper(const MixedExpLevy& m);
double domain_lower(const MixedExpLevy& m);

/// True if psi(theta) is finite at the real point theta.
bool psi_finite_at(const LevyModel& model, double theta);

/// Exponential tilt by e^{r x}: the process under the Esscher measure
/// P^(r) is again mixed-exponential with shifted jump rates; requires
/// r inside the domain. psi_r(s) = psi(s + r) - psi(r).
MixedExpLevy esscher_shift(const MixedExpLevy& m, double r);

/// Jump terms actually present in the exponent (empty when ell = 0 or the
/// side has zero probability).
const std::vector<ExpTerm>& effective_up(const MixedExpLevy& m);
const std::vector<ExpTerm>& effective_down(const MixedExpLevy& m);

/// Stable 64-bit digest of the parameter set, for memoization keys.
std::uint64_t fingerprint(const LevyModel& model);

} // namespace levyifpt
