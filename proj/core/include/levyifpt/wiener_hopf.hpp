#pragma once

#include "levyifpt/model.hpp"
#include "levyifpt/qid.hpp"
#include "levyifpt/spectral.hpp"

namespace levyifpt {

struct WhFactorValue {
    Complex value;
    Complex q;
    Complex theta;
};

/// Positive Wiener-Hopf factor Psi+(q, theta) = E[exp(i theta X*_{e(q)})]
/// as the rational product over the plus roots of psi(rho) = q; for real
/// q in [-lambda*, 0) the analytically continued roots are used.
WhFactorValue wh_plus(const LevyModel& model, Complex q, Complex theta);
WhFactorValue wh_plus(const LevyModel& model, const RootSet& roots, Complex theta);

/// Negative factor Psi-(q, theta) = E[exp(i theta X_*(e(q)))], over the
/// minus roots (whose first member is phi_bar(-lambda) when q = -lambda).
WhFactorValue wh_minus(const LevyModel& model, Complex q, Complex theta);
WhFactorValue wh_minus(const LevyModel& model, const RootSet& roots, Complex theta);

/// |Psi+ Psi- - q/(q - Psi(theta))|: the factorization identity defect,
/// valid for q > 0 and, by extension, q = -lambda with lambda in (0, lambda*].
double wh_product_residual(const LevyModel& model, Complex q, Complex theta);

/// Defect of the Esscher change-of-variable identity
///   Psi±(q, s) = Psi±_r(q + lam, s + i r) / Psi±_r(q + lam, i r),
/// r = phi_bar(-lam), evaluated with the tilted model; returns the larger
/// of the two sides' residuals.
double esscher_factor_identity_residual(const LevyModel& model, double q, double lam, Complex s);

/// Laplace transform of K_{theta,q}(x) = E_x[e^{-theta X(e(q))}; tau_0 > e(q)]:
///   K_hat(u) = Psi+(q, i theta) Psi-(q, -i u) / (theta + u).
Complex k_hat(const LevyModel& model, double theta, double q, double u);

/// E^mu[e^{-q tau_0 + theta (X_tau - X_0)}] for an initial law with rational
/// Laplace transform, in closed form: the Bromwich integral of
///   mu_hat(theta - u) (1 - Psi-(q,-iu)/Psi-(q,-i theta)) / (u - theta)
/// closed to the left picks up exactly the poles of Psi-(q, -i u).
Complex pecherskii_rogozin(const LevyModel& model, const QuasiInvariantDist& mu, Complex q,
                           Complex theta);
Complex pecherskii_rogozin(const LevyModel& model, const QuasiInvariantDist& mu,
                           const RootSet& roots, Complex theta);

} // namespace levyifpt
