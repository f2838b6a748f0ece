#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "factdeck/config.hpp"
#include "factdeck/fact.hpp"
#include "factdeck/frame.hpp"

namespace factdeck {

/// Ordinary least squares of value against series index.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::optional<double> r2; ///< absent when the values have no variance
};

inline LinearFit fit_line(const std::vector<SeriesPoint>& series) {
    const auto n = static_cast<double>(series.size());
    double mean_x = (n - 1.0) / 2.0;
    double mean_y = 0.0;
    for (const auto& p : series) mean_y += p.value;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        double dx = static_cast<double>(i) - mean_x;
        double dy = series[i].value - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinearFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy > 0.0 && sxx > 0.0) fit.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

namespace detail {

inline DataFact new_fact(const AnalysisFrame& frame, FactType type, std::vector<std::string> focus,
                         FactParameters params, double significance) {
    DataFact f;
    f.subspace = frame.subspace;
    f.measure = frame.measure;
    f.dimension = frame.dimension;
    f.fact_type = type;
    f.parameters = params;
    f.focus = std::move(focus);
    f.score.significance = significance;
    f.chart_id = frame.chart_id;
    f.chart_index = frame.chart_index;
    f.chart_type = frame.chart_type;
    f.id = make_fact_id(f);
    return f;
}

inline std::pair<double, double> value_range(const std::vector<SeriesPoint>& s) {
    auto [lo, hi] = std::minmax_element(s.begin(), s.end(),
                                        [](const SeriesPoint& a, const SeriesPoint& b) { return a.value < b.value; });
    return {lo->value, hi->value};
}

} // namespace detail

/// Largest and smallest points. Significance is the gap to the runner-up over the value range.
inline std::vector<DataFact> detect_extreme(const AnalysisFrame& frame) {
    const auto& s = frame.series;
    if (s.size() < 2) return {};
    auto [lo, hi] = detail::value_range(s);
    double spread = hi - lo;
    if (!(spread > 0.0)) return {};

    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].value > s[imax].value) imax = i;
        if (s[i].value < s[imin].value) imin = i;
    }
    double runner_max = -INFINITY, runner_min = INFINITY;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i != imax) runner_max = std::max(runner_max, s[i].value);
        if (i != imin) runner_min = std::min(runner_min, s[i].value);
    }
    FactParameters pmax, pmin;
    pmax.polarity = Polarity::Max;
    pmin.polarity = Polarity::Min;
    return {detail::new_fact(frame, FactType::Extreme, {s[imax].label}, pmax, (s[imax].value - runner_max) / spread),
            detail::new_fact(frame, FactType::Extreme, {s[imin].label}, pmin, (runner_min - s[imin].value) / spread)};
}

/// Three-sigma rule on the full series with population standard deviation.
/// Significance is 0 just past 3 sigma and saturates at 6 sigma.
inline std::vector<DataFact> detect_outlier(const AnalysisFrame& frame) {
    const auto& s = frame.series;
    if (s.size() < 4) return {};
    const auto n = static_cast<double>(s.size());
    double mean = 0.0;
    for (const auto& p : s) mean += p.value;
    mean /= n;
    double var = 0.0;
    for (const auto& p : s) var += (p.value - mean) * (p.value - mean);
    double sigma = std::sqrt(var / n);
    if (!(sigma > 0.0)) return {};
    std::vector<DataFact> out;
    for (const auto& p : s) {
        double z = std::abs(p.value - mean) / sigma;
        if (z > 3.0) out.push_back(detail::new_fact(frame, FactType::Outlier, {p.label}, {}, std::min(1.0, (z - 3.0) / 3.0)));
    }
    return out;
}

/// Regression over (index, value); emitted when r2 clears the threshold and the slope is non-zero.
inline std::vector<DataFact> detect_trend(const AnalysisFrame& frame, double r2_threshold = 0.5) {
    const auto& s = frame.series;
    if (s.size() < 3 || !frame.ordered()) return {};
    LinearFit fit = fit_line(s);
    if (!fit.r2 || *fit.r2 < r2_threshold || fit.slope == 0.0) return {};
    FactParameters params;
    params.direction = fit.slope > 0.0 ? Direction::Increasing : Direction::Decreasing;
    params.slope = fit.slope;
    params.intercept = fit.intercept;
    std::vector<std::string> focus;
    focus.reserve(s.size());
    for (const auto& p : s) focus.push_back(p.label);
    return {detail::new_fact(frame, FactType::Trend, std::move(focus), params, *fit.r2)};
}

/// The strongest interior point where the first difference changes sign.
inline std::vector<DataFact> detect_turning_point(const AnalysisFrame& frame) {
    const auto& s = frame.series;
    if (s.size() < 3 || !frame.ordered()) return {};
    auto [lo, hi] = detail::value_range(s);
    double spread = hi - lo;
    if (!(spread > 0.0)) return {};
    std::optional<std::size_t> best;
    double best_sig = -1.0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        double before = s[i].value - s[i - 1].value;
        double after = s[i + 1].value - s[i].value;
        if (!((before > 0.0 && after < 0.0) || (before < 0.0 && after > 0.0))) continue;
        double sig = std::min(std::abs(before), std::abs(after)) / spread;
        if (sig > best_sig) {
            best_sig = sig;
            best = i;
        }
    }
    if (!best) return {};
    return {detail::new_fact(frame, FactType::TurningPoint, {s[*best].label}, {}, best_sig)};
}

/// One fact per consecutive pair; significance is the min-max normalised relative difference.
inline std::vector<DataFact> detect_difference(const AnalysisFrame& frame) {
    const auto& s = frame.series;
    if (s.size() < 2 || !frame.ordered()) return {};
    struct Pair {
        std::size_t i;
        double rel;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i].value == 0.0) continue;
        pairs.push_back({i, std::abs(s[i + 1].value - s[i].value) / std::abs(s[i].value)});
    }
    if (pairs.empty()) return {};
    auto [lo_it, hi_it] =
        std::minmax_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.rel < b.rel; });
    double lo = lo_it->rel, hi = hi_it->rel;
    std::vector<DataFact> out;
    out.reserve(pairs.size());
    for (const auto& pr : pairs) {
        double sig = hi > lo ? (pr.rel - lo) / (hi - lo) : 0.0;
        double ratio = (s[pr.i + 1].value - s[pr.i].value) / s[pr.i].value;
        FactParameters params;
        params.ratio = ratio;
        params.direction = ratio >= 0.0 ? Direction::Increasing : Direction::Decreasing;
        out.push_back(detail::new_fact(frame, FactType::Difference, {s[pr.i].label, s[pr.i + 1].label}, params, sig));
    }
    return out;
}

/// Top category's share of the series total, reported when it reaches the threshold.
inline std::vector<DataFact> detect_majority(const AnalysisFrame& frame, double threshold = 0.5) {
    const auto& s = frame.series;
    if (s.size() < 2) return {};
    double total = 0.0;
    std::size_t top = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].value < 0.0) return {};
        total += s[i].value;
        if (s[i].value > s[top].value) top = i;
    }
    if (!(total > 0.0)) return {};
    double share = s[top].value / total;
    if (share < threshold) return {};
    FactParameters params;
    params.ratio = share;
    return {detail::new_fact(frame, FactType::Majority, {s[top].label}, params, share)};
}

/// Every detector applicable to the frame, in fact-type order.
inline std::vector<DataFact> detect_all(const AnalysisFrame& frame, const MiningConfig& cfg) {
    std::vector<DataFact> out;
    auto append = [&](std::vector<DataFact> facts) {
        for (auto& f : facts) out.push_back(std::move(f));
    };
    append(detect_majority(frame, cfg.majority_threshold));
    append(detect_extreme(frame));
    append(detect_outlier(frame));
    append(detect_turning_point(frame));
    append(detect_difference(frame));
    append(detect_trend(frame, cfg.trend_r2_threshold));
    return out;
}

} // namespace factdeck
