#include "levyifpt/transforms.hpp"
#include "levyifpt/errors.hpp"

#include <cmath>
#include <vector>

namespace levyifpt {

namespace {
constexpr double kPi = 3.14159265358979323846;

double simpson_slice(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_slice(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_slice(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

Complex laplace_invert_euler(const std::function<Complex(Complex)>& fhat, double t, int terms,
                             double decay) {
    if (!(t > 0.0)) throw OutOfRange("laplace_invert_euler requires t > 0");
    if (terms < 5) throw OutOfRange("laplace_invert_euler needs at least 5 terms");
    const int n_max = (terms - 1) / 2;
    const int euler_m = std::min(10, n_max - 1);
    const int start = n_max - euler_m;

    const double a0 = decay / (2.0 * t);
    const double scale = std::exp(0.5 * decay) / (2.0 * t);

    Complex partial = fhat(Complex(a0, 0.0));
    std::vector<Complex> sums;
    sums.reserve(static_cast<std::size_t>(n_max) + 1);
    double sign = -1.0;
    for (int j = 1; j <= n_max; ++j, sign = -sign) {
        const double y = kPi * static_cast<double>(j) / t;
        partial += sign * (fhat(Complex(a0, y)) + fhat(Complex(a0, -y)));
        if (j >= start) sums.push_back(partial);
    }

    // Binomial averaging of the last euler_m + 1 partial sums.
    double binom = 1.0, total_w = 0.0;
    Complex acc = 0.0;
    for (int m = 0; m <= euler_m; ++m) {
        acc += binom * sums.at(static_cast<std::size_t>(m));
        total_w += binom;
        binom *= static_cast<double>(euler_m - m) / static_cast<double>(m + 1);
    }
    return scale * acc / total_w;
}

double carr_madan_expectation(const std::function<Complex(Complex)>& mgf, double k,
                              double alpha, double xi_max, int points) {
    if (!(alpha > 0.0)) throw OutOfRange("carr_madan_expectation requires alpha > 0");
    if (points < 8) throw OutOfRange("carr_madan_expectation needs at least 8 points");
    const double h = xi_max / static_cast<double>(points - 1);
    double acc = 0.0;
    for (int j = 0; j < points; ++j) {
        const double xi = h * static_cast<double>(j);
        const Complex u(1.0 + alpha, xi);
        const Complex damp = std::exp(-(u - 1.0) * k);
        const Complex v = damp * mgf(u) / (u * (u - 1.0));
        acc += (j == 0 || j == points - 1 ? 0.5 : 1.0) * v.real();
    }
    return acc * h / kPi;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_slice(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

} // namespace levyifpt
