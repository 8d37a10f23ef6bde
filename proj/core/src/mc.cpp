#include "levyifpt/mc.hpp"
#include "levyifpt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace levyifpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sample_side(const std::vector<ExpTerm>& terms, VariateStream& rng) {
    bool all_positive = true;
    for (const auto& t : terms)
        if (t.a < 0.0) { all_positive = false; break; }
    if (all_positive) {
        double u = rng.uniform();
        for (const auto& t : terms) {
            if (u < t.a || &t == &terms.back()) return rng.exponential(t.alpha);
            u -= t.a;
        }
        return rng.exponential(terms.back().alpha);
    }
    // Signed mixture: f(x) <= M e^{-alpha_min x} with M the positive mass rate.
    double alpha_min = kInf, envelope = 0.0;
    for (const auto& t : terms) {
        alpha_min = std::min(alpha_min, t.alpha);
        if (t.a > 0.0) envelope += t.a * t.alpha;
    }
    for (;;) {
        const double x = rng.exponential(alpha_min);
        double f = 0.0;
        for (const auto& t : terms) f += t.a * t.alpha * std::exp(-t.alpha * x);
        if (rng.uniform() * envelope * std::exp(-alpha_min * x) <= f) return x;
    }
}

} // namespace

double sample_jump(const MixedExpLevy& m, VariateStream& rng) {
    const bool up = rng.uniform() < m.p;
    return up ? sample_side(m.up, rng) : -sample_side(m.down, rng);
}

FirstPassageSample simulate_path(const MixedExpLevy& m, double x0, double horizon,
                                 VariateStream& rng, const McParams& params,
                                 bool stop_at_crossing) {
    FirstPassageSample out{kInf, 0.0, false, x0};
    double x = x0;
    double t = 0.0;
    bool crossed = false;

    if (x0 <= 0.0) {
        out.tau = 0.0;
        out.overshoot = x0;
        if (stop_at_crossing) return out;
        crossed = true;
    }

    const double sigma2 = m.sigma * m.sigma;
    double next_jump = m.ell > 0.0 ? rng.exponential(m.ell) : kInf;

    while (t < horizon) {
        const double segment_end = std::min(next_jump, horizon);

        if (crossed && m.sigma > 0.0) {
            // Only the endpoint law matters once the crossing is recorded.
            const double len = segment_end - t;
            x += m.eta * len + m.sigma * std::sqrt(len) * rng.normal();
            t = segment_end;
        } else if (m.sigma == 0.0) {
            if (!crossed && m.eta < 0.0 && x + m.eta * (segment_end - t) <= 0.0) {
                const double tc = t + x / -m.eta;
                out.tau = tc;
                out.overshoot = 0.0;
                out.crossed_by_diffusion = true;
                if (stop_at_crossing) return out;
                crossed = true;
                continue;
            }
            x += m.eta * (segment_end - t);
            t = segment_end;
        } else {
            const double len = segment_end - t;
            const std::size_t nsub =
                std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / params.max_step)));
            const double h = len / static_cast<double>(nsub);
            const double sd = m.sigma * std::sqrt(h);
            for (std::size_t k = 0; k < nsub; ++k) {
                const double x_end = x + m.eta * h + sd * rng.normal();
                if (!crossed) {
                    if (x_end <= 0.0) {
                        // Continuous crossing inside the substep; linear
                        // interpolation of the endpoints locates it.
                        out.tau = t + h * (x / std::max(x - x_end, 1e-300));
                        out.overshoot = 0.0;
                        out.crossed_by_diffusion = true;
                        if (stop_at_crossing) return out;
                        crossed = true;
                    } else if (params.bridge_correction &&
                               rng.uniform() < std::exp(-2.0 * x * x_end / (sigma2 * h))) {
                        out.tau = t + 0.5 * h;
                        out.overshoot = 0.0;
                        out.crossed_by_diffusion = true;
                        if (stop_at_crossing) return out;
                        crossed = true;
                    }
                }
                x = x_end;
                t += h;
            }
            t = segment_end; // absorb rounding drift in t
        }

        if (t >= horizon) break;

        // Jump epoch.
        const double jump = sample_jump(m, rng);
        x += jump;
        if (!crossed && x < 0.0) {
            out.tau = t;
            out.overshoot = x;
            out.crossed_by_diffusion = false;
            if (stop_at_crossing) return out;
            crossed = true;
        }
        next_jump = t + rng.exponential(m.ell);
    }

    out.position = x;
    return out;
}

double simulate_terminal_increment(const MixedExpLevy& m, double horizon, VariateStream& rng) {
    double x = 0.0;
    double t = 0.0;
    double next_jump = m.ell > 0.0 ? rng.exponential(m.ell) : kInf;
    while (t < horizon) {
        const double segment_end = std::min(next_jump, horizon);
        const double len = segment_end - t;
        x += m.eta * len;
        if (m.sigma > 0.0) x += m.sigma * std::sqrt(len) * rng.normal();
        t = segment_end;
        if (t >= horizon) break;
        x += sample_jump(m, rng);
        next_jump = t + rng.exponential(m.ell);
    }
    return x;
}

int resolve_workers(int hint) {
    if (hint > 0) return hint;
    if (const char* env = std::getenv("LEVY_IFPT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_paths(std::uint64_t n, int workers,
                    const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
    const int w = std::min<std::uint64_t>(std::max(workers, 1), std::max<std::uint64_t>(n, 1));
    if (w <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(w));
    const std::uint64_t chunk = (n + w - 1) / w;
    for (int i = 0; i < w; ++i) {
        const std::uint64_t first = chunk * static_cast<std::uint64_t>(i);
        const std::uint64_t last = std::min(n, first + chunk);
        if (first >= last) break;
        threads.emplace_back([&fn, first, last] { fn(first, last); });
    }
    for (auto& th : threads) th.join();
}

std::vector<FirstPassageSample> simulate_first_passage(const LevyModel& model, double x0,
                                                       const McParams& params) {
    const MixedExpLevy m = canonical(model);
    std::vector<FirstPassageSample> out(params.paths);
    parallel_paths(params.paths, resolve_workers(params.workers),
                   [&](std::uint64_t first, std::uint64_t last) {
                       for (std::uint64_t i = first; i < last; ++i) {
                           VariateStream rng(params.seed, params.antithetic ? i / 2 : i,
                                             params.antithetic && (i % 2 == 1));
                           out[i] = simulate_path(m, x0, params.horizon, rng, params);
                       }
                   });
    return out;
}

std::vector<FirstPassageSample> simulate_first_passage(const LevyModel& model,
                                                       const QuasiInvariantDist& mu0,
                                                       const McParams& params,
                                                       bool stop_at_crossing) {
    const MixedExpLevy m = canonical(model);
    std::vector<FirstPassageSample> out(params.paths);
    parallel_paths(params.paths, resolve_workers(params.workers),
                   [&](std::uint64_t first, std::uint64_t last) {
                       for (std::uint64_t i = first; i < last; ++i) {
                           VariateStream rng(params.seed, params.antithetic ? i / 2 : i,
                                             params.antithetic && (i % 2 == 1));
                           const double x0 = mu0.sample(rng.raw());
                           out[i] = simulate_path(m, x0, params.horizon, rng, params,
                                                  stop_at_crossing);
                       }
                   });
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw EmptySample("ks_distance needs at least one sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

std::vector<SurvivalPoint> survival_grid(const std::vector<double>& taus,
                                         const std::vector<double>& grid) {
    if (taus.empty()) throw EmptySample("survival_grid needs at least one sample");
    const double n = static_cast<double>(taus.size());
    std::vector<SurvivalPoint> out;
    out.reserve(grid.size());
    for (double t : grid) {
        std::size_t alive = 0;
        for (double tau : taus)
            if (tau > t) ++alive;
        const double p = static_cast<double>(alive) / n;
        out.push_back({t, p, std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n)});
    }
    return out;
}

} // namespace levyifpt
