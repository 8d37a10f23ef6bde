#pragma once

#include <vector>

namespace levyifpt {

enum class CurveKind { exponential, weibull, piecewise_hazard, table };

/// Target default-time distribution: a continuous, nonincreasing survival
/// function H-bar with H-bar(0) = 1, strictly positive on [0, horizon].
/// Tabulated curves are interpolated log-linearly (piecewise-constant
/// hazard), which preserves positivity and monotonicity; beyond the last
/// node the final hazard is continued.
class SurvivalCurve {
public:
    static SurvivalCurve exponential(double rate, double horizon);
    static SurvivalCurve weibull(double shape, double scale, double horizon);
    static SurvivalCurve piecewise_hazard(std::vector<double> breakpoints,
                                          std::vector<double> rates, double horizon);
    static SurvivalCurve table(std::vector<double> t, std::vector<double> survival,
                               double horizon);

    CurveKind kind() const { return kind_; }
    double horizon() const { return horizon_; }

    /// H-bar(t).
    double survival(double t) const;
    /// H(t) = 1 - H-bar(t).
    double cdf(double t) const { return 1.0 - survival(t); }
    /// h(t) = hazard(t) * H-bar(t).
    double density(double t) const;
    double hazard(double t) const;

    /// Generalized inverse inf{t >= 0 : H-bar(t) <= p}; +inf when the curve
    /// never reaches p.
    double inverse_survival(double p) const;

    // Parameter accessors (for serialization).
    double rate() const { return rate_; }
    double shape() const { return shape_; }
    double scale() const { return scale_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& rates() const { return rates_; }
    const std::vector<double>& table_t() const { return t_; }
    const std::vector<double>& table_survival() const { return s_; }

private:
    SurvivalCurve() = default;

    CurveKind kind_ = CurveKind::exponential;
    double horizon_ = 0.0;
    double rate_ = 0.0;            // exponential
    double shape_ = 0.0, scale_ = 0.0; // weibull
    std::vector<double> breakpoints_, rates_; // piecewise hazard
    std::vector<double> t_, s_;    // table nodes
};

} // namespace levyifpt
