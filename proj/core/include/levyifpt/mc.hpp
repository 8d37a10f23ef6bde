#pragma once

#include "levyifpt/model.hpp"
#include "levyifpt/qid.hpp"
#include "levyifpt/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace levyifpt {

struct McParams {
    std::uint64_t paths = 100000;
    double horizon = 1.0;
    std::uint64_t seed = 42;
    bool bridge_correction = true;
    bool antithetic = false;
    double max_step = 0.01; // diffusion substep cap between event epochs
    int workers = 0;        // 0: use LEVY_IFPT_THREADS, else hardware
};

/// One simulated path. `tau` is +inf when the path survives the horizon;
/// `position` is the terminal value X(horizon), tracked past the crossing
/// when the path was simulated in continue mode.
struct FirstPassageSample {
    double tau;
    double overshoot;            // X at the crossing; exactly 0 for diffusion crossings
    bool crossed_by_diffusion;
    double position;
};

inline bool censored(const FirstPassageSample& s) {
    return !(s.tau < std::numeric_limits<double>::infinity());
}

/// Mirrors the underlying stream when `antithetic` is set: uniforms are
/// reflected and normals negated.
class VariateStream {
public:
    VariateStream(std::uint64_t seed, std::uint64_t stream, bool antithetic)
        : rng_(seed, stream), anti_(antithetic) {}

    double uniform() {
        const double u = rng_.uniform();
        return anti_ ? 1.0 - u : u;
    }
    double normal() { return anti_ ? -rng_.normal() : rng_.normal(); }
    double exponential(double rate) { return -std::log(uniform()) / rate; }
    PathRng& raw() { return rng_; }

private:
    PathRng rng_;
    bool anti_;
};

/// Draw from the two-sided mixed-exponential jump law. Sides with negative
/// weights are sampled by rejection against the dominating Exp(min alpha).
double sample_jump(const MixedExpLevy& m, VariateStream& rng);

/// Simulate one path from x0 up to `horizon` in the natural clock of X.
/// Jump epochs are exact; diffusion segments advance in substeps of at most
/// params.max_step, with the Brownian-bridge minimum test
/// P(cross | endpoints a, b > 0) = exp(-2 a b / (sigma^2 dt)) applied per
/// substep when params.bridge_correction is set. With stop_at_crossing
/// false the path keeps evolving so `position` holds X(horizon).
FirstPassageSample simulate_path(const MixedExpLevy& m, double x0, double horizon,
                                 VariateStream& rng, const McParams& params,
                                 bool stop_at_crossing = true);

/// Batch drivers (parallel over paths, deterministic by path index).
std::vector<FirstPassageSample> simulate_first_passage(const LevyModel& model, double x0,
                                                       const McParams& params);
std::vector<FirstPassageSample> simulate_first_passage(const LevyModel& model,
                                                       const QuasiInvariantDist& mu0,
                                                       const McParams& params,
                                                       bool stop_at_crossing = true);

/// X(horizon) - X(0) without any barrier logic (one normal per inter-jump
/// segment; exact in distribution).
double simulate_terminal_increment(const MixedExpLevy& m, double horizon, VariateStream& rng);

/// Kolmogorov-Smirnov distance between the sample and a reference CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

struct SurvivalPoint {
    double t;
    double survival;
    double se; // binomial standard error
};

/// Empirical survival with binomial standard errors; +inf entries are
/// right-censored beyond every grid point.
std::vector<SurvivalPoint> survival_grid(const std::vector<double>& taus,
                                         const std::vector<double>& grid);

/// Worker-count resolution: explicit hint, else LEVY_IFPT_THREADS, else
/// hardware concurrency.
int resolve_workers(int hint);

/// Runs fn(first, last) over a partition of [0, n); results must be written
/// by index so the merge is scheduling-independent.
void parallel_paths(std::uint64_t n, int workers,
                    const std::function<void(std::uint64_t, std::uint64_t)>& fn);

} // namespace levyifpt
