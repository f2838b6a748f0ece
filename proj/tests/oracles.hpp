#pragma once
// Naive reference implementations used to cross-check the library. They are
// written from the definitions, favouring obviousness over speed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "factdeck.hpp"

namespace oracle {

using factdeck::AnalysisFrame;
using factdeck::ColumnKind;

/// A frame over labels "p0".."pn-1" (temporal ordering keeps them as given).
inline AnalysisFrame make_frame(const std::vector<double>& values, ColumnKind kind = ColumnKind::Temporal,
                                factdeck::ChartType chart = factdeck::ChartType::Line, std::size_t dataset_rows = 0) {
    AnalysisFrame f;
    f.measure = {"Value", factdeck::Aggregate::Sum};
    f.dimension = "Key";
    f.dimension_kind = kind;
    f.chart_type = chart;
    f.chart_id = "c";
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::string label = std::to_string(i);
        f.series.push_back({"p" + std::string(label.size() < 3 ? 3 - label.size() : 0, '0') + label, values[i], 1});
    }
    f.subspace_row_count = values.size();
    f.dataset_row_count = dataset_rows ? dataset_rows : values.size();
    return f;
}

struct Expected {
    std::vector<std::size_t> focus; ///< indices into the series
    double significance;
};

inline std::optional<std::pair<Expected, Expected>> extreme(const std::vector<double>& v) {
    if (v.size() < 2) return std::nullopt;
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    // Stable sort: first occurrence wins among ties.
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    double range = v[idx.front()] - v[idx.back()];
    if (range <= 0) return std::nullopt;
    std::vector<std::size_t> asc(v.size());
    std::iota(asc.begin(), asc.end(), 0);
    std::stable_sort(asc.begin(), asc.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    Expected mx{{idx[0]}, (v[idx[0]] - v[idx[1]]) / range};
    Expected mn{{asc[0]}, (v[asc[1]] - v[asc[0]]) / range};
    return std::make_pair(mx, mn);
}

inline std::vector<Expected> outliers(const std::vector<double>& v) {
    std::vector<Expected> out;
    if (v.size() < 4) return out;
    double n = static_cast<double>(v.size());
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / n);
    if (sd == 0) return out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double z = std::fabs(v[i] - mean) / sd;
        if (z > 3) out.push_back({{i}, std::min(1.0, (z - 3) / 3)});
    }
    return out;
}

/// r2 through the textbook correlation formula.
inline std::optional<std::pair<double, double>> trend(const std::vector<double>& v, double threshold = 0.5) {
    if (v.size() < 3) return std::nullopt;
    double n = static_cast<double>(v.size()), sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double x = static_cast<double>(i);
        sx += x;
        sy += v[i];
        sxy += x * v[i];
        sxx += x * x;
        syy += v[i] * v[i];
    }
    double num = n * sxy - sx * sy;
    double den = (n * sxx - sx * sx) * (n * syy - sy * sy);
    if (den <= 0) return std::nullopt;
    double slope = num / (n * sxx - sx * sx);
    double r2 = num * num / den;
    if (r2 < threshold || slope == 0) return std::nullopt;
    return std::make_pair(r2, slope);
}

inline std::optional<Expected> turning_point(const std::vector<double>& v) {
    if (v.size() < 3) return std::nullopt;
    double range = *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
    if (range <= 0) return std::nullopt;
    std::optional<Expected> best;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        bool peak = v[i] > v[i - 1] && v[i] > v[i + 1];
        bool valley = v[i] < v[i - 1] && v[i] < v[i + 1];
        if (!peak && !valley) continue;
        double nearer = std::min(std::fabs(v[i] - v[i - 1]), std::fabs(v[i] - v[i + 1]));
        double sig = nearer / range;
        if (!best || sig > best->significance) best = Expected{{i}, sig};
    }
    return best;
}

inline std::vector<Expected> differences(const std::vector<double>& v) {
    std::vector<std::pair<std::size_t, double>> rel;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] != 0) rel.emplace_back(i, std::fabs(v[i + 1] - v[i]) / std::fabs(v[i]));
    std::vector<Expected> out;
    if (rel.empty()) return out;
    double lo = rel[0].second, hi = rel[0].second;
    for (auto& [i, r] : rel) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    for (auto& [i, r] : rel) out.push_back({{i, i + 1}, hi == lo ? 0.0 : (r - lo) / (hi - lo)});
    return out;
}

inline std::optional<Expected> majority(const std::vector<double>& v, double threshold = 0.5) {
    if (v.size() < 2) return std::nullopt;
    for (double x : v)
        if (x < 0) return std::nullopt;
    double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (total <= 0) return std::nullopt;
    std::size_t top = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    double share = v[top] / total;
    if (share < threshold) return std::nullopt;
    return Expected{{top}, share};
}

/// Diverse top-k selection by the stated rule: the best fact of each type in
/// descending score, then the remaining candidates in descending score.
inline std::vector<std::string> select_top_k(std::vector<factdeck::DataFact> c, std::size_t k) {
    auto better = [](const factdeck::DataFact& a, const factdeck::DataFact& b) {
        if (a.score.total != b.score.total) return a.score.total > b.score.total;
        if (a.fact_type != b.fact_type) return a.fact_type < b.fact_type;
        if (a.focus != b.focus) return a.focus < b.focus;
        return a.id < b.id;
    };
    std::map<factdeck::FactType, factdeck::DataFact> best;
    for (const auto& f : c) {
        auto it = best.find(f.fact_type);
        if (it == best.end() || better(f, it->second)) best.insert_or_assign(f.fact_type, f);
    }
    std::vector<factdeck::DataFact> leaders, rest;
    for (auto& [t, f] : best) leaders.push_back(f);
    std::sort(leaders.begin(), leaders.end(), better);
    for (const auto& f : c)
        if (best.at(f.fact_type).id != f.id) rest.push_back(f);
    std::sort(rest.begin(), rest.end(), better);
    std::vector<std::string> out;
    for (auto& f : leaders) out.push_back(f.id);
    for (auto& f : rest) out.push_back(f.id);
    if (out.size() > k) out.resize(k);
    return out;
}

/// Minimum path cost over every permutation that keeps pinned items in order
/// and starts with `head` when given.
template <typename Cost>
double brute_force_min(std::size_t n, Cost cost, const std::vector<std::size_t>& pinned = {},
                       std::optional<std::size_t> head = {}) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        if (head && perm.front() != *head) continue;
        std::vector<std::size_t> pos(n);
        for (std::size_t i = 0; i < n; ++i) pos[perm[i]] = i;
        bool ok = true;
        for (std::size_t i = 1; i < pinned.size() && ok; ++i) ok = pos[pinned[i - 1]] < pos[pinned[i]];
        if (!ok) continue;
        double total = 0;
        for (std::size_t i = 1; i < n; ++i) total += cost(perm[i - 1], perm[i]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Transition cost recomputed term by term.
inline double fact_cost(const factdeck::DataFact& a, const factdeck::DataFact& b, const factdeck::CostConfig& c) {
    double cost = 0;
    cost += (a.dimension != b.dimension) * c.dimension_change;
    cost += (!(a.measure == b.measure)) * c.measure_change;
    auto sa = a.subspace, sb = b.subspace;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    auto subset = [](const auto& small, const auto& big) {
        for (const auto& p : small)
            if (std::find(big.begin(), big.end(), p) == big.end()) return false;
        return true;
    };
    double grade;
    if (sa == sb) grade = 0;
    else if (subset(sa, sb)) grade = c.drill_down;
    else if (subset(sb, sa)) grade = c.roll_up;
    else {
        std::vector<std::string> ca, cb;
        for (auto& p : sa) ca.push_back(p.column);
        for (auto& p : sb) cb.push_back(p.column);
        std::sort(ca.begin(), ca.end());
        ca.erase(std::unique(ca.begin(), ca.end()), ca.end());
        std::sort(cb.begin(), cb.end());
        cb.erase(std::unique(cb.begin(), cb.end()), cb.end());
        grade = ca == cb ? c.sibling_shift : c.unrelated;
    }
    cost += c.subspace_weight * grade;
    std::vector<std::string> fa = a.focus, fb = b.focus, inter, uni;
    std::sort(fa.begin(), fa.end());
    fa.erase(std::unique(fa.begin(), fa.end()), fa.end());
    std::sort(fb.begin(), fb.end());
    fb.erase(std::unique(fb.begin(), fb.end()), fb.end());
    std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(inter));
    std::set_union(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(uni));
    double jac = uni.empty() ? 0.0 : 1.0 - static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    cost += c.focus_overlap * jac;
    cost += (a.fact_type != b.fact_type) * c.fact_type_change;
    double gap = std::fabs(static_cast<double>(b.chart_index) - static_cast<double>(a.chart_index));
    cost += c.chart_order_penalty * (gap / (gap + 1) + (b.chart_index < a.chart_index ? 1.0 : 0.0));
    return cost;
}

/// True when `sub` appears in `seq` in the same relative order.
inline bool is_subsequence(const std::vector<std::string>& sub, const std::vector<std::string>& seq) {
    std::size_t j = 0;
    for (const auto& s : seq)
        if (j < sub.size() && s == sub[j]) ++j;
    return j == sub.size();
}

} // namespace oracle
