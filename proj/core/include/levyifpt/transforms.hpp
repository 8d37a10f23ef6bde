#pragma once

#include "levyifpt/model.hpp"

#include <functional>

namespace levyifpt {

/// Bromwich inversion by the Abate-Whitt Euler method: the damped
/// trapezoid partial sums
///   s_n = e^{A/2}/(2t) * sum_{|j|<=n} (-1)^j fhat((A + 2 pi i j)/(2t))
/// are binomially averaged over the last 11 orders. `terms` is the total
/// node count 2 n_max + 1 (default 51). Works termwise for complex-valued
/// transforms, which lack the conjugate symmetry of real ones.
Complex laplace_invert_euler(const std::function<Complex(Complex)>& fhat, double t,
                             int terms = 51, double decay = 18.4);

/// E[(e^Y - e^k)^+] from the moment function mgf(u) = E[e^{u Y}], by the
/// damped Fourier representation with u = 1 + alpha + i xi on a trapezoid
/// grid over [0, xi_max].
double carr_madan_expectation(const std::function<Complex(Complex)>& mgf, double k,
                              double alpha, double xi_max, int points);

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 16);

} // namespace levyifpt
