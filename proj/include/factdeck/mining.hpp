#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "factdeck/config.hpp"
#include "factdeck/detectors.hpp"
#include "factdeck/fact.hpp"
#include "factdeck/frame.hpp"

namespace factdeck {

/// Fraction of dataset rows behind the focus. A trend covers the whole subspace.
inline double impact_focus(const DataFact& fact, const AnalysisFrame& frame) {
    if (frame.dataset_row_count == 0) return 0.0;
    std::size_t rows = 0;
    if (fact.fact_type == FactType::Trend) {
        rows = frame.subspace_row_count;
    } else {
        for (const auto& label : fact.focus) {
            const SeriesPoint* p = frame.find(label);
            if (!p) throw Error(ErrorCode::FocusNotInChart, "focus '" + label + "' is not in chart '" + frame.chart_id + "'");
            rows += p->rows;
        }
    }
    return static_cast<double>(rows) / static_cast<double>(frame.dataset_row_count);
}

inline double suitability(FactType type, ChartType chart, const MiningConfig& cfg) {
    auto it = cfg.suitability_table.find({type, chart});
    return it == cfg.suitability_table.end() ? cfg.suitability_floor : it->second;
}

inline double combine(const ScoreBreakdown& s, const ScoreWeights& w) {
    return w.significance * s.significance + w.impact * s.impact_f + w.suitability * s.suitability;
}

/// Weighted sum of significance, focus impact and suitability. User facts score zero.
inline ScoreBreakdown score_fact(const DataFact& fact, const AnalysisFrame& frame, const MiningConfig& cfg) {
    if (fact.origin == FactOrigin::User) return {};
    ScoreBreakdown s;
    s.significance = std::clamp(fact.score.significance, 0.0, 1.0);
    s.impact_f = impact_focus(fact, frame);
    s.suitability = suitability(fact.fact_type, frame.chart_type, cfg);
    s.total = combine(s, cfg.weights);
    return s;
}

/// Descending total; ties by fact-type order, then focus values.
inline bool ranks_before(const DataFact& a, const DataFact& b) {
    if (a.score.total != b.score.total) return a.score.total > b.score.total;
    if (a.fact_type != b.fact_type) return a.fact_type < b.fact_type;
    if (a.focus != b.focus) return a.focus < b.focus;
    return a.id < b.id;
}

/// Diversity-first ranking: the best fact of every type (by score), then the
/// remaining candidates by score. Truncating to k gives the top-k, and the
/// result for k is a prefix of the result for any larger k.
inline std::vector<DataFact> rank_diverse(std::vector<DataFact> candidates) {
    std::sort(candidates.begin(), candidates.end(), ranks_before);
    std::vector<DataFact> leaders, rest;
    std::set<FactType> seen;
    for (auto& f : candidates) {
        if (seen.insert(f.fact_type).second) leaders.push_back(std::move(f));
        else rest.push_back(std::move(f));
    }
    for (auto& f : rest) leaders.push_back(std::move(f));
    return leaders;
}

/// All scored candidates in ranked order (untruncated).
inline std::vector<DataFact> mine_candidates(const AnalysisFrame& frame, const MiningConfig& cfg) {
    auto candidates = detect_all(frame, cfg);
    for (auto& f : candidates) f.score = score_fact(f, frame, cfg);
    return rank_diverse(std::move(candidates));
}

inline std::vector<DataFact> mine_facts(const AnalysisFrame& frame, const MiningConfig& cfg) {
    auto ranked = mine_candidates(frame, cfg);
    if (ranked.size() > cfg.k) ranked.resize(cfg.k);
    return ranked;
}

/// Builds a fact of the requested type around a user-chosen focus, computing
/// whatever parameters the type needs directly from the frame. Used when the
/// user retypes a fact or highlights a point; the result is a user fact.
inline DataFact fact_for_focus(const AnalysisFrame& frame, FactType type, std::vector<std::string> focus) {
    const auto& s = frame.series;
    auto index_of = [&](const std::string& label) -> std::size_t {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i].label == label) return i;
        throw Error(ErrorCode::FocusNotInChart, "focus '" + label + "' is not in chart '" + frame.chart_id + "'");
    };
    for (const auto& label : focus) (void)index_of(label);

    FactParameters params;
    switch (type) {
    case FactType::Trend: {
        focus.clear();
        for (const auto& p : s) focus.push_back(p.label);
        LinearFit fit = fit_line(s);
        params.direction = fit.slope >= 0.0 ? Direction::Increasing : Direction::Decreasing;
        params.slope = fit.slope;
        params.intercept = fit.intercept;
        break;
    }
    case FactType::Difference: {
        if (s.size() < 2) throw Error(ErrorCode::FocusNotInChart, "difference needs two points");
        if (focus.empty()) focus.push_back(s.front().label);
        if (focus.size() == 1) {
            std::size_t i = index_of(focus[0]);
            focus = i + 1 < s.size() ? std::vector{s[i].label, s[i + 1].label} : std::vector{s[i - 1].label, s[i].label};
        }
        focus.resize(2);
        double from = s[index_of(focus[0])].value;
        double to = s[index_of(focus[1])].value;
        params.ratio = from != 0.0 ? (to - from) / from : 0.0;
        params.direction = to >= from ? Direction::Increasing : Direction::Decreasing;
        break;
    }
    default: {
        if (focus.empty()) focus.push_back(s.front().label);
        focus.resize(1);
        const double v = s[index_of(focus[0])].value;
        if (type == FactType::Extreme) {
            double above = 0.0, below = 0.0;
            for (const auto& p : s) {
                above += p.value > v ? 1.0 : 0.0;
                below += p.value < v ? 1.0 : 0.0;
            }
            params.polarity = above <= below ? Polarity::Max : Polarity::Min;
        } else if (type == FactType::Majority) {
            double total = 0.0;
            for (const auto& p : s) total += p.value;
            params.ratio = total != 0.0 ? v / total : 0.0;
        }
    }
    }
    DataFact f = detail::new_fact(frame, type, std::move(focus), params, 0.0);
    f.origin = FactOrigin::User;
    f.score = {};
    return f;
}

} // namespace factdeck
