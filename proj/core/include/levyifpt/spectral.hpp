#pragma once

#include "levyifpt/model.hpp"

#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace levyifpt {

/// Location and depth of the minimum of the Laplace exponent:
/// psi(theta_star) = -lambda_star < 0. Both are +inf when psi is
/// unbounded below (no up-jump mass and sigma = 0).
struct SpectralData {
    double theta_star = 0.0;
    double lambda_star = 0.0;
};

/// Classified roots of psi(rho) = q.
///
/// For Re(q) > 0 the split is by sign of the real part: plus_roots has
/// m+ + 1 entries (Re > 0, ascending real part), minus_roots m- + 1
/// (Re < 0, descending real part, so minus_roots[0] is the root that
/// tends to 0 as q -> 0+).
///
/// For real q = -lambda in [-lambda*, 0) the same families are continued
/// analytically: minus_roots[0] equals phi_bar(-lambda) (it has crossed
/// into (0, theta*]) and every plus root satisfies Re(rho) > phi_bar.
struct RootSet {
    Complex q;
    std::vector<Complex> plus_roots;
    std::vector<Complex> minus_roots;
    std::optional<double> phi_bar;
};

/// Minimizer of psi over (0, theta_bar), by bisection on psi'.
/// Throws NotNegativeDrift when psi'(0) >= 0.
SpectralData compute_spectral(const LevyModel& model);

/// Inverse of psi on (0, theta*]: the unique x with psi(x) = -lam.
/// Requires lam in (0, lambda*].
double phi_bar(const LevyModel& model, double lam);

/// All roots of the Cramer-Lundberg equation psi(rho) = q, obtained from
/// the polynomial that clears the rational exponent's denominators
/// (companion-matrix eigenvalues, then up to 20 Newton steps on
/// psi(rho) - q). Supported arguments: Re(q) > 0, or real q in
/// [-lambda*, 0]. Throws RepeatedRoots when two roots are closer than
/// 1e-7 relative.
RootSet cramer_lundberg_roots(const LevyModel& model, Complex q);

/// Read-mostly memo of RootSets keyed by (model fingerprint, q); safe for
/// concurrent readers.
class RootCache {
public:
    std::shared_ptr<const RootSet> get(const LevyModel& model, Complex q);

private:
    struct Key {
        std::uint64_t fp;
        double re, im;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, std::shared_ptr<const RootSet>, KeyHash> map_;
};

} // namespace levyifpt
