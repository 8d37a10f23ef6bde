#pragma once

#include "levyifpt/mc.hpp"
#include "levyifpt/model.hpp"
#include "levyifpt/qid.hpp"
#include "levyifpt/survival.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace levyifpt {

/// Deterministic time change I(t) = -log H-bar(t) / lambda, with
/// I(t) = +inf where the curve vanishes.
class QidTimeChange {
public:
    QidTimeChange(SurvivalCurve curve, double lam);
    double operator()(double t) const;
    /// inf{t : I(t) >= s}; maps a first-passage time of X back to the
    /// market clock.
    double inverse(double s) const;
    double lambda() const { return lam_; }

private:
    SurvivalCurve curve_;
    double lam_;
};

/// Checks lambda against (0, lambda*] and returns the closed-form time change.
QidTimeChange time_change_qid(const LevyModel& model, const SurvivalCurve& curve, double lam);

/// Solution bundle of the randomized, time-changed inverse first-passage
/// problem: start X from `dist` and run it on the clock I; the passage time
/// below zero of X(I(t)) then has survival function H-bar.
struct RifptSolution {
    QuasiInvariantDist dist;
    double lam;
    SurvivalCurve curve;
    LevyModel model;

    double time_change(double t) const { return QidTimeChange(curve, lam)(t); }
    double time_change_inverse(double s) const { return QidTimeChange(curve, lam).inverse(s); }
};

/// Explicit killing rate.
RifptSolution solve_rifpt(const LevyModel& model, const SurvivalCurve& curve, double lam);

/// Normalized choice lambda0 = -log H-bar(T) / T, which makes I(T) = T.
/// Throws LambdaExceedsStar when lambda0 > lambda*.
RifptSolution solve_rifpt_normalized(const LevyModel& model, const SurvivalCurve& curve,
                                     double T);

/// First-passage times of the time-changed process in the market clock
/// (params.horizon refers to that clock).
std::vector<FirstPassageSample> simulate_time_changed_fp(const RifptSolution& solution,
                                                         const McParams& params);

/// Numerically estimated time change for an arbitrary sampleable initial
/// law: the survival function of tau_0 under mu is estimated by Monte
/// Carlo on a log-spaced grid (clamped below at 1/paths), interpolated
/// log-linearly, and inverted against the target curve.
class EmpiricalTimeChange {
public:
    EmpiricalTimeChange(std::vector<double> grid, std::vector<double> survival,
                        SurvivalCurve curve);
    double operator()(double t) const;

private:
    double invert_survival(double p) const;
    std::vector<double> grid_, survival_;
    SurvivalCurve curve_;
};

using InitialLawSampler = std::function<double(PathRng&)>;

EmpiricalTimeChange time_change_general(const LevyModel& model, const InitialLawSampler& mu,
                                        const SurvivalCurve& curve, const McParams& params);

/// One name under one frailty state: the driver process, the conditional
/// target curve and the killing rate lambda_{i|u}.
struct FrailtyName {
    LevyModel model;
    SurvivalCurve curve;
    double lam;
};

struct FrailtyState {
    double prob;
    std::vector<FrailtyName> names; // one entry per dimension
};

struct FrailtySpec {
    std::vector<FrailtyState> states;
    std::size_t dimension() const { return states.empty() ? 0 : states.front().names.size(); }
};

struct FrailtySolution {
    FrailtySpec spec;
    std::vector<std::vector<RifptSolution>> per_state; // [state][name]

    /// S(t_1..t_d) = sum_j p_j prod_i H-bar_i(t_i | u_j).
    double joint_survival(const std::vector<double>& t) const;
};

FrailtySolution solve_frailty(const FrailtySpec& spec);

/// Correlated default times: draw the state, then run each name's solution.
/// Returns per-path vectors of passage times in the market clock.
std::vector<std::vector<double>> simulate_frailty(const FrailtySolution& sol,
                                                  const McParams& params);

} // namespace levyifpt
