#include "levyifpt/cva.hpp"
#include "levyifpt/errors.hpp"
#include "levyifpt/mc.hpp"
#include "levyifpt/transforms.hpp"
#include "levyifpt/wiener_hopf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levyifpt {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDecay = 18.4; // Bromwich damping exponent for the Euler inversion
} // namespace

Complex kappa(const CvaSpec& spec, double t1, double t2, Complex u) {
    const double a = spec.numerics.alpha;
    if (u.imag() > 1e-12 || u.imag() < -(1.0 + a) - 1e-12)
        throw MomentCondition("kappa: Im(u) outside the moment strip [-1-alpha, 0]");
    if (!psi_finite_at(spec.Z, -u.imag()) || !psi_finite_at(spec.X, -spec.rho * u.imag()))
        throw MomentCondition("kappa: exponent infinite at the requested argument");
    return char_exponent(spec.Z, u) * t1 + char_exponent(spec.X, u * spec.rho) * t2;
}

CvaPricer::CvaPricer(CvaSpec spec) : spec_(std::move(spec)) {
    if (!(spec_.S0 > 0.0 && spec_.K > 0.0 && spec_.T > 0.0))
        throw ValidationError("cva spec needs S0, K, T > 0");
    if (std::abs(spec_.rho) > 1.0) throw ValidationError("cva spec needs |rho| <= 1");
    if (!(spec_.numerics.alpha > 0.0)) throw ValidationError("cva damping alpha must be > 0");
    x_ = canonical(spec_.X);
    z_ = canonical(spec_.Z);

    const double a = spec_.numerics.alpha;
    const double probe = (1.0 + a) * std::abs(spec_.rho);
    if (!psi_finite_at(spec_.X, probe) || !psi_finite_at(spec_.X, -probe))
        throw MomentCondition("psi_X must be finite at +/- (1+alpha)|rho|");
    if (!psi_finite_at(spec_.Z, 1.0 + a))
        throw MomentCondition("psi_Z must be finite at 1+alpha");
    if (!psi_finite_at(spec_.Z, 1.0) || !psi_finite_at(spec_.X, spec_.rho))
        throw MomentCondition("martingale compensator needs psi_Z(1) and psi_X(rho) finite");

    const double hbar_T = spec_.curve.survival(spec_.T);
    if (!(hbar_T > 0.0 && hbar_T < 1.0))
        throw OutOfRange("cva needs H-bar(T) in (0, 1)");
    lam0_ = -std::log(hbar_T) / spec_.T;
    const SpectralData sp = compute_spectral(spec_.X);
    if (lam0_ > sp.lambda_star * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "lambda0 = " << lam0_ << " exceeds lambda*_X = " << sp.lambda_star;
        throw LambdaExceedsStar(os.str());
    }
    mu_ = std::make_shared<QuasiInvariantDist>(build_qid(spec_.X, lam0_));
    psi_z1_ = laplace_exponent(spec_.Z, Complex(1.0)).real();
    psi_x_rho_ = spec_.rho != 0.0 ? laplace_exponent(spec_.X, Complex(spec_.rho)).real() : 0.0;
}

Complex f_transform(const CvaSpec& spec, Complex u, Complex q) {
    if (!(q.real() > 0.0)) throw OutOfRange("f_transform requires Re(q) > 0");
    CvaPricer pricer(spec);
    return pecherskii_rogozin(spec.X, pricer.mu(), q, u);
}

double CvaPricer::exposure_impl(double t, CvaDiagnostics* diag) const {
    if (!(t > 0.0 && t <= spec_.T)) throw OutOfRange("exposure requires t in (0, T]");
    const double hbar = spec_.curve.survival(t);
    if (!(hbar > 0.0)) throw OutOfRange("exposure requires H-bar(t) > 0");

    const double T = spec_.T, r = spec_.r, d = spec_.d, rho = spec_.rho;
    const double s = -std::log(hbar) / lam0_;          // I(t)
    const double sT = -std::log(spec_.curve.survival(T)) / lam0_; // I(T) = T
    const double kbar_t = psi_z1_ * t + psi_x_rho_ * s;
    const double kbar_T = psi_z1_ * T + psi_x_rho_ * sT;
    const double cprime = std::exp((r - d) * (T - t) - kbar_T + kbar_t);

    // Bromwich nodes for the Laplace inversion at s, shared by every
    // Fourier node.
    const int n_max = (spec_.numerics.laplace_terms - 1) / 2;
    const int euler_m = std::min(10, n_max - 1);
    const int start = n_max - euler_m;
    const double a0 = kDecay / (2.0 * s);
    const double lap_scale = std::exp(0.5 * kDecay) / (2.0 * s);
    std::vector<std::shared_ptr<const RootSet>> rsets;
    rsets.reserve(2 * static_cast<std::size_t>(n_max) + 1);
    for (int j = -n_max; j <= n_max; ++j)
        rsets.push_back(cache_.get(spec_.X, Complex(a0, kPi * static_cast<double>(j) / s)));
    const auto root_at = [&](int j) -> const RootSet& {
        return *rsets[static_cast<std::size_t>(j + n_max)];
    };

    const double h = spec_.numerics.xi_max / static_cast<double>(spec_.numerics.xi_points - 1);
    double acc = 0.0, peak = 0.0, last_mag = 0.0;
    for (int m = 0; m < spec_.numerics.xi_points; ++m) {
        const double xi = h * static_cast<double>(m);
        const Complex u(1.0 + spec_.numerics.alpha, xi);
        const Complex theta = rho * u;

        // Euler-accelerated inversion of f_theta at s.
        Complex partial = pecherskii_rogozin(spec_.X, *mu_, root_at(0), theta);
        Complex esum = 0.0;
        double binom = 1.0, wsum = 0.0;
        double sign = -1.0;
        for (int j = 1; j <= n_max; ++j, sign = -sign) {
            partial += sign * (pecherskii_rogozin(spec_.X, *mu_, root_at(j), theta) +
                               pecherskii_rogozin(spec_.X, *mu_, root_at(-j), theta));
            if (j >= start) {
                esum += binom * partial;
                wsum += binom;
                const int mth = j - start;
                binom *= static_cast<double>(euler_m - mth) / static_cast<double>(mth + 1);
            }
        }
        const Complex gv = lap_scale * esum / wsum;

        const Complex dfac = std::exp(laplace_exponent(spec_.Z, u) * (T - t) +
                                      (rho != 0.0 ? laplace_exponent(spec_.X, theta) * (sT - s)
                                                  : Complex(0.0)));
        const Complex w = std::pow(spec_.K, 1.0 - u) * std::pow(spec_.S0 * cprime, u) *
                          std::exp(((r - d) * t - kbar_t) * u + laplace_exponent(spec_.Z, u) * t) *
                          gv * dfac / (u * (u - 1.0));
        const double mag = std::abs(w);
        peak = std::max(peak, mag);
        last_mag = mag;
        acc += (m == 0 || m == spec_.numerics.xi_points - 1 ? 0.5 : 1.0) * w.real();
    }

    const double tail_ratio = peak > 0.0 ? last_mag / peak : 0.0;
    if (tail_ratio > 1e-8)
        throw InversionFailure("Fourier integrand tail above 1e-8 of its peak; raise xi_max");
    if (diag) diag->fourier_tail_ratio = std::max(diag->fourier_tail_ratio, tail_ratio);

    double p = std::exp(-r * T) / (lam0_ * hbar) * acc * h / kPi;
    if (p < 0.0) {
        if (p < -1e-8 * std::max(1.0, spec_.S0))
            throw InversionFailure("exposure came out negative beyond inversion noise");
        if (diag) diag->negative_clip = std::min(diag->negative_clip, p);
        p = 0.0;
    }
    return p;
}

double CvaPricer::exposure(double t) const { return exposure_impl(t, nullptr); }

CvaResult CvaPricer::value() const {
    CvaResult out;
    const double T = spec_.T;
    for (int i = 1; i <= 40; ++i) {
        const double t = T * static_cast<double>(i) / 40.0;
        out.exposure_curve.push_back({t, exposure_impl(t, &out.diagnostics)});
    }

    const double t_lo = 1e-6 * T;
    double scale = 0.0;
    for (const auto& pt : out.exposure_curve)
        scale = std::max(scale, pt.value * spec_.curve.density(pt.t));
    const double tol = std::max(scale * T, 1e-12) * 1e-5;
    out.pi = adaptive_simpson(
        [&](double t) { return exposure_impl(t, nullptr) * spec_.curve.density(t); }, t_lo, T,
        tol, 14);
    out.diagnostics.origin_strip_bound =
        out.exposure_curve.front().value * spec_.curve.cdf(t_lo);
    return out;
}

double CvaPricer::default_free_price() const {
    const double T = spec_.T;
    const double sT = -std::log(spec_.curve.survival(T)) / lam0_;
    const double kbar_T = psi_z1_ * T + psi_x_rho_ * sT;
    const auto mgf = [&](Complex u) {
        return std::exp(((spec_.r - spec_.d) * T - kbar_T) * u +
                        laplace_exponent(spec_.Z, u) * T +
                        (spec_.rho != 0.0
                             ? laplace_exponent(spec_.X, spec_.rho * u) * sT
                             : Complex(0.0)));
    };
    const double val =
        carr_madan_expectation(mgf, std::log(spec_.K / spec_.S0), spec_.numerics.alpha,
                               spec_.numerics.xi_max, spec_.numerics.xi_points);
    return std::exp(-spec_.r * T) * spec_.S0 * val;
}

CvaMcResult CvaPricer::value_mc(std::uint64_t paths, std::uint64_t seed, int workers) const {
    const double T = spec_.T;
    const double sT = -std::log(spec_.curve.survival(T)) / lam0_;
    const double kbar_T = psi_z1_ * T + psi_x_rho_ * sT;
    const double drift = (spec_.r - spec_.d) * T - kbar_T;

    McParams mcp;
    mcp.max_step = 0.01;
    std::vector<double> payoffs(paths, 0.0);
    parallel_paths(paths, resolve_workers(workers),
                   [&](std::uint64_t first, std::uint64_t last) {
                       for (std::uint64_t i = first; i < last; ++i) {
                           VariateStream rng(seed, i, false);
                           const double x0 = mu_->sample(rng.raw());
                           const auto path = simulate_path(x_, x0, sT, rng, mcp,
                                                           /*stop_at_crossing=*/false);
                           const bool defaulted = !censored(path);
                           const double x_inc = path.position - x0; // X(I(T)), driver from 0
                           const double z_inc = simulate_terminal_increment(z_, T, rng);
                           if (!defaulted) continue;
                           const double sT_price =
                               spec_.S0 * std::exp(drift + spec_.rho * x_inc + z_inc);
                           payoffs[i] = std::exp(-spec_.r * T) * std::max(sT_price - spec_.K, 0.0);
                       }
                   });

    double mean = 0.0;
    for (double p : payoffs) mean += p;
    mean /= static_cast<double>(paths);
    double var = 0.0;
    for (double p : payoffs) var += (p - mean) * (p - mean);
    var /= static_cast<double>(paths - 1);
    return {mean, std::sqrt(var / static_cast<double>(paths))};
}

double exposure(const CvaSpec& spec, double t) { return CvaPricer(spec).exposure(t); }

CvaResult cva_value(const CvaSpec& spec) { return CvaPricer(spec).value(); }

} // namespace levyifpt
