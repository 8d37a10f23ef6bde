#pragma once

#include "levyifpt/model.hpp"
#include "levyifpt/qid.hpp"
#include "levyifpt/spectral.hpp"
#include "levyifpt/survival.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace levyifpt {

struct CvaNumerics {
    double alpha = 0.75;    // Fourier damping
    double xi_max = 200.0;  // Fourier truncation
    int xi_points = 4096;   // trapezoid nodes on [0, xi_max]
    int laplace_terms = 51; // Bromwich nodes (2 n + 1) for the Euler inversion
};

/// Vulnerable-call valuation inputs. The credit driver X controls the
/// counterparty's distance to default through the solved inverse
/// first-passage construction with lambda0 = -log H-bar(T) / T; the equity
/// driver Z and the coupling rho * X(I(t)) move the stock.
struct CvaSpec {
    double S0 = 0.0;
    double K = 0.0;
    double T = 0.0;
    double r = 0.0;
    double d = 0.0;
    double rho = 0.0;
    LevyModel X;
    LevyModel Z;
    SurvivalCurve curve = SurvivalCurve::exponential(1.0, 1.0);
    CvaNumerics numerics;
};

struct ExposurePoint {
    double t;
    double value;
};

struct CvaDiagnostics {
    double fourier_tail_ratio = 0.0; // worst |integrand(xi_max)| / peak
    double negative_clip = 0.0;      // most negative raw exposure seen
    double origin_strip_bound = 0.0; // bound on the unintegrated [0, eps T] mass
};

struct CvaResult {
    double pi = 0.0;
    std::vector<ExposurePoint> exposure_curve;
    CvaDiagnostics diagnostics;
};

struct CvaMcResult {
    double pi;
    double se;
};

/// kappa_{t1,t2}(u) = Psi_Z(u) t1 + Psi_X(u rho) t2 for Im(u) in [-1-alpha, 0].
Complex kappa(const CvaSpec& spec, double t1, double t2, Complex u);

/// f_u(q) = E^mu[e^{-q tau + u (X_tau - X_0)}] with mu the lambda0-invariant
/// law of the credit driver; closed form through the Pecherskii-Rogozin
/// residue sum.
Complex f_transform(const CvaSpec& spec, Complex u, Complex q);

/// Semi-analytical pricer; construction validates the moment conditions
/// and builds mu_{lambda0} once.
class CvaPricer {
public:
    explicit CvaPricer(CvaSpec spec);

    double lambda0() const { return lam0_; }
    const QuasiInvariantDist& mu() const { return *mu_; }
    const CvaSpec& spec() const { return spec_; }

    /// Expected positive exposure P_t = E[V_tau | tau = t], t in (0, T].
    double exposure(double t) const;

    /// Pi plus the exposure curve on a fixed grid.
    CvaResult value() const;

    /// e^{-rT} E[(S_T - K)^+], the default-free call price (upper bound
    /// oracle and the rho = 0 independence reference).
    double default_free_price() const;

    /// Joint Monte Carlo of (S_T, tau): Pi = E[e^{-rT}(S_T - K)^+ ; tau <= T].
    CvaMcResult value_mc(std::uint64_t paths, std::uint64_t seed, int workers = 0) const;

private:
    double exposure_impl(double t, CvaDiagnostics* diag) const;

    CvaSpec spec_;
    MixedExpLevy x_, z_;
    double lam0_ = 0.0;
    std::shared_ptr<QuasiInvariantDist> mu_;
    double psi_z1_ = 0.0;   // psi_Z(1)
    double psi_x_rho_ = 0.0; // psi_X(rho)
    mutable RootCache cache_;
};

/// One-shot helpers mirroring the pricer surface.
double exposure(const CvaSpec& spec, double t);
CvaResult cva_value(const CvaSpec& spec);

} // namespace levyifpt
