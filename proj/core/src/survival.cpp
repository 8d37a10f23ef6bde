#include "levyifpt/survival.hpp"
#include "levyifpt/errors.hpp"

#include <cmath>
#include <limits>

namespace levyifpt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_horizon(const SurvivalCurve& c) {
    if (!(c.horizon() > 0.0)) throw ValidationError("curve horizon must be > 0");
    if (!(c.survival(c.horizon()) > 0.0))
        throw ValidationError("curve must satisfy H-bar(horizon) > 0");
}
} // namespace

SurvivalCurve SurvivalCurve::exponential(double rate, double horizon) {
    if (!(rate > 0.0)) throw ValidationError("exponential curve: rate must be > 0");
    SurvivalCurve c;
    c.kind_ = CurveKind::exponential;
    c.rate_ = rate;
    c.horizon_ = horizon;
    check_horizon(c);
    return c;
}

SurvivalCurve SurvivalCurve::weibull(double shape, double scale, double horizon) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw ValidationError("weibull curve: shape and scale must be > 0");
    SurvivalCurve c;
    c.kind_ = CurveKind::weibull;
    c.shape_ = shape;
    c.scale_ = scale;
    c.horizon_ = horizon;
    check_horizon(c);
    return c;
}

SurvivalCurve SurvivalCurve::piecewise_hazard(std::vector<double> breakpoints,
                                              std::vector<double> rates, double horizon) {
    if (rates.size() != breakpoints.size() + 1)
        throw ValidationError("piecewise hazard: need one more rate than breakpoints");
    double prev = 0.0;
    for (double b : breakpoints) {
        if (!(b > prev)) throw ValidationError("piecewise hazard: breakpoints must increase");
        prev = b;
    }
    for (double r : rates)
        if (r < 0.0) throw ValidationError("piecewise hazard: rates must be >= 0");
    SurvivalCurve c;
    c.kind_ = CurveKind::piecewise_hazard;
    c.breakpoints_ = std::move(breakpoints);
    c.rates_ = std::move(rates);
    c.horizon_ = horizon;
    check_horizon(c);
    return c;
}

SurvivalCurve SurvivalCurve::table(std::vector<double> t, std::vector<double> survival,
                                   double horizon) {
    if (t.size() != survival.size() || t.size() < 2)
        throw ValidationError("table curve: need matching t/survival arrays of size >= 2");
    if (t.front() != 0.0 || survival.front() != 1.0)
        throw ValidationError("table curve: first node must be (0, 1)");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) throw ValidationError("table curve: times must increase");
        if (!(survival[i] > 0.0)) throw ValidationError("table curve: survival must stay > 0");
        if (survival[i] > survival[i - 1])
            throw ValidationError("table curve: survival must be nonincreasing");
    }
    SurvivalCurve c;
    c.kind_ = CurveKind::table;
    c.t_ = std::move(t);
    c.s_ = std::move(survival);
    c.horizon_ = horizon;
    check_horizon(c);
    return c;
}

double SurvivalCurve::hazard(double t) const {
    switch (kind_) {
        case CurveKind::exponential:
            return rate_;
        case CurveKind::weibull:
            if (t <= 0.0) return shape_ > 1.0 ? 0.0 : (shape_ == 1.0 ? 1.0 / scale_ : kInf);
            return shape_ / scale_ * std::pow(t / scale_, shape_ - 1.0);
        case CurveKind::piecewise_hazard: {
            std::size_t i = 0;
            while (i < breakpoints_.size() && t >= breakpoints_[i]) ++i;
            return rates_[i];
        }
        case CurveKind::table: {
            std::size_t i = 1;
            while (i + 1 < t_.size() && t >= t_[i]) ++i;
            return std::log(s_[i - 1] / s_[i]) / (t_[i] - t_[i - 1]);
        }
    }
    return 0.0;
}

double SurvivalCurve::survival(double t) const {
    if (t <= 0.0) return 1.0;
    switch (kind_) {
        case CurveKind::exponential:
            return std::exp(-rate_ * t);
        case CurveKind::weibull:
            return std::exp(-std::pow(t / scale_, shape_));
        case CurveKind::piecewise_hazard: {
            double acc = 0.0, prev = 0.0;
            for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
                if (t <= breakpoints_[i]) return std::exp(-(acc + rates_[i] * (t - prev)));
                acc += rates_[i] * (breakpoints_[i] - prev);
                prev = breakpoints_[i];
            }
            return std::exp(-(acc + rates_.back() * (t - prev)));
        }
        case CurveKind::table: {
            if (t >= t_.back()) {
                const double rate = hazard(t_.back());
                return s_.back() * std::exp(-rate * (t - t_.back()));
            }
            std::size_t i = 1;
            while (t > t_[i]) ++i;
            const double w = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
            return s_[i - 1] * std::pow(s_[i] / s_[i - 1], w);
        }
    }
    return 0.0;
}

double SurvivalCurve::density(double t) const { return hazard(t) * survival(t); }

double SurvivalCurve::inverse_survival(double p) const {
    if (!(p > 0.0 && p <= 1.0)) throw OutOfRange("inverse_survival: p must lie in (0, 1]");
    if (p == 1.0) return 0.0;
    const double target = -std::log(p); // cumulative hazard to reach
    switch (kind_) {
        case CurveKind::exponential:
            return target / rate_;
        case CurveKind::weibull:
            return scale_ * std::pow(target, 1.0 / shape_);
        case CurveKind::piecewise_hazard: {
            double acc = 0.0, prev = 0.0;
            for (std::size_t i = 0; i < rates_.size(); ++i) {
                const double end = i < breakpoints_.size() ? breakpoints_[i] : kInf;
                if (rates_[i] > 0.0) {
                    const double t = prev + (target - acc) / rates_[i];
                    if (t <= end) return t;
                    acc += rates_[i] * (end - prev);
                }
                prev = end;
            }
            return kInf;
        }
        case CurveKind::table: {
            if (p >= s_.back()) {
                std::size_t i = 1;
                while (s_[i] > p) ++i;
                if (s_[i - 1] == s_[i]) return t_[i - 1];
                const double w = std::log(p / s_[i - 1]) / std::log(s_[i] / s_[i - 1]);
                return t_[i - 1] + w * (t_[i] - t_[i - 1]);
            }
            const double rate = hazard(t_.back());
            if (rate == 0.0) return kInf;
            return t_.back() + std::log(s_.back() / p) / rate;
        }
    }
    return kInf;
}

} // namespace levyifpt
