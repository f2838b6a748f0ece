#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "factdeck/chart_spec.hpp"
#include "factdeck/dataset.hpp"
#include "factdeck/error.hpp"

namespace factdeck {

struct SeriesPoint {
    std::string label;      ///< dimension value as text
    double value = 0.0;     ///< aggregated measure
    std::size_t rows = 0;   ///< filtered rows that fed this point

    bool operator==(const SeriesPoint&) const = default;
};

/// The aggregated view of a chart that all mining runs on.
struct AnalysisFrame {
    std::vector<Predicate> subspace;
    MeasureRef measure;
    std::string dimension;
    ColumnKind dimension_kind = ColumnKind::Nominal;
    std::vector<SeriesPoint> series;
    std::size_t dataset_row_count = 0;
    std::size_t subspace_row_count = 0;
    ChartType chart_type = ChartType::Bar;
    std::string chart_id;
    std::size_t chart_index = 0;

    [[nodiscard]] bool ordered() const { return dimension_kind != ColumnKind::Nominal; }

    [[nodiscard]] const SeriesPoint* find(std::string_view label) const {
        for (const auto& p : series)
            if (p.label == label) return &p;
        return nullptr;
    }

    bool operator==(const AnalysisFrame&) const = default;
};

/// True when the row's cell satisfies the predicate. Numeric comparison for
/// numbers, lexicographic for text (ISO dates order correctly as text).
inline bool matches(const Predicate& p, const Cell& cell) {
    auto compare = [&](const Cell& literal) -> int {
        if (const auto* d = std::get_if<double>(&cell)) {
            double rhs = 0.0;
            if (const auto* ld = std::get_if<double>(&literal)) rhs = *ld;
            else if (auto parsed = parse_number(std::get<std::string>(literal))) rhs = *parsed;
            else return 2; // incomparable
            return *d < rhs ? -1 : (*d > rhs ? 1 : 0);
        }
        const auto& text = std::get<std::string>(cell);
        std::string rhs = cell_label(literal);
        int c = text.compare(rhs);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    };
    switch (p.op) {
    case PredicateOp::Eq: return compare(p.values.front()) == 0;
    case PredicateOp::Neq: return compare(p.values.front()) != 0;
    case PredicateOp::Lt: return compare(p.values.front()) == -1;
    case PredicateOp::Lte: { int c = compare(p.values.front()); return c == -1 || c == 0; }
    case PredicateOp::Gt: return compare(p.values.front()) == 1;
    case PredicateOp::Gte: { int c = compare(p.values.front()); return c == 1 || c == 0; }
    case PredicateOp::In:
        return std::any_of(p.values.begin(), p.values.end(), [&](const Cell& v) { return compare(v) == 0; });
    }
    return false;
}

/// Filters, groups by the dimension and aggregates the measure. Ordered
/// dimensions sort ascending; nominal ones sort by descending measure with
/// ties broken by label.
inline AnalysisFrame extract_frame(const ChartSpec& spec, const Dataset& ds) {
    ChartRoles roles = chart_roles(spec, ds);
    auto dim_idx = ds.column_index(roles.dimension);
    auto measure_idx = ds.column_index(roles.measure.column);
    if (!dim_idx) throw Error(ErrorCode::UnknownColumn, "unknown dimension '" + roles.dimension + "'");
    if (!measure_idx) throw Error(ErrorCode::UnknownColumn, "unknown measure '" + roles.measure.column + "'");

    std::vector<std::size_t> filter_idx;
    for (const auto& p : spec.filters) {
        auto idx = ds.column_index(p.column);
        if (!idx) throw Error(ErrorCode::UnknownColumn, "filter references unknown column '" + p.column + "'");
        filter_idx.push_back(*idx);
    }

    struct Acc {
        double sum = 0.0;
        double min = std::numeric_limits<double>::infinity();
        double max = -std::numeric_limits<double>::infinity();
        std::size_t count = 0;
        double sort_number = 0.0;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, Acc> groups;
    std::size_t kept = 0;
    for (const auto& row : ds.rows()) {
        bool keep = true;
        for (std::size_t i = 0; i < spec.filters.size() && keep; ++i) keep = matches(spec.filters[i], row[filter_idx[i]]);
        if (!keep) continue;
        ++kept;
        const Cell& key_cell = row[*dim_idx];
        std::string key = cell_label(key_cell);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) {
            order.push_back(key);
            if (const auto* d = std::get_if<double>(&key_cell)) it->second.sort_number = *d;
        }
        Acc& acc = it->second;
        const Cell& m = row[*measure_idx];
        double v = std::holds_alternative<double>(m) ? std::get<double>(m) : 0.0;
        acc.sum += v;
        acc.min = std::min(acc.min, v);
        acc.max = std::max(acc.max, v);
        ++acc.count;
    }
    if (kept == 0) throw Error(ErrorCode::EmptySubspace, "no rows of '" + ds.id() + "' survive the filters of chart '" + spec.id + "'");

    AnalysisFrame frame;
    frame.subspace = spec.filters;
    frame.measure = roles.measure;
    frame.dimension = roles.dimension;
    frame.dimension_kind = ds.columns()[*dim_idx].kind;
    frame.dataset_row_count = ds.row_count();
    frame.subspace_row_count = kept;
    frame.chart_type = spec.chart_type;
    frame.chart_id = spec.id;
    frame.chart_index = spec.creation_index;

    std::vector<std::pair<SeriesPoint, double>> points;
    points.reserve(order.size());
    for (const auto& key : order) {
        const Acc& acc = groups.at(key);
        double value = 0.0;
        switch (roles.measure.aggregate) {
        case Aggregate::Sum: value = acc.sum; break;
        case Aggregate::Mean: value = acc.sum / static_cast<double>(acc.count); break;
        case Aggregate::Count: value = static_cast<double>(acc.count); break;
        case Aggregate::Min: value = acc.min; break;
        case Aggregate::Max: value = acc.max; break;
        }
        points.push_back({SeriesPoint{key, value, acc.count}, acc.sort_number});
    }
    switch (frame.dimension_kind) {
    case ColumnKind::Quantitative:
        std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
        break;
    case ColumnKind::Temporal:
        std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.first.label < b.first.label; });
        break;
    case ColumnKind::Nominal:
        std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
            if (a.first.value != b.first.value) return a.first.value > b.first.value;
            return a.first.label < b.first.label;
        });
        break;
    }
    frame.series.reserve(points.size());
    for (auto& p : points) frame.series.push_back(std::move(p.first));
    return frame;
}

inline json to_json(const AnalysisFrame& f) {
    json subspace = json::array();
    for (const auto& p : f.subspace) subspace.push_back(detail::predicate_to_json(p));
    json series = json::array();
    for (const auto& p : f.series) series.push_back({{"label", p.label}, {"value", p.value}, {"rows", p.rows}});
    return {{"subspace", std::move(subspace)},
            {"measure", {{"field", f.measure.column}, {"aggregate", std::string(to_string(f.measure.aggregate))}}},
            {"dimension", f.dimension},
            {"dimension_kind", std::string(to_string(f.dimension_kind))},
            {"series", std::move(series)},
            {"dataset_row_count", f.dataset_row_count},
            {"subspace_row_count", f.subspace_row_count},
            {"chart_type", std::string(to_string(f.chart_type))},
            {"chart_id", f.chart_id},
            {"chart_index", f.chart_index}};
}

inline AnalysisFrame frame_from_json(const json& j) {
    try {
        AnalysisFrame f;
        json holder = {{"id", ""}, {"dataset", ""}, {"mark", "bar"}, {"encoding", json::object()}, {"creation_index", 0}};
        if (!j.at("subspace").empty()) holder["transform"] = {{"filter", j["subspace"]}};
        f.subspace = chart_spec_from_json(holder).filters;
        auto agg = aggregate_from_string(j.at("measure").at("aggregate").get<std::string>());
        auto kind = column_kind_from_string(j.at("dimension_kind").get<std::string>());
        auto type = chart_type_from_string(j.at("chart_type").get<std::string>());
        if (!agg || !kind || !type) throw Error(ErrorCode::MalformedInput, "frame has an unknown enum value");
        f.measure = {j["measure"].at("field").get<std::string>(), *agg};
        f.dimension = j.at("dimension").get<std::string>();
        f.dimension_kind = *kind;
        for (const auto& p : j.at("series"))
            f.series.push_back({p.at("label").get<std::string>(), p.at("value").get<double>(), p.at("rows").get<std::size_t>()});
        f.dataset_row_count = j.at("dataset_row_count").get<std::size_t>();
        f.subspace_row_count = j.at("subspace_row_count").get<std::size_t>();
        f.chart_type = *type;
        f.chart_id = j.at("chart_id").get<std::string>();
        f.chart_index = j.at("chart_index").get<std::size_t>();
        if (f.series.empty()) throw Error(ErrorCode::MalformedInput, "frame series is empty");
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("frame: ") + e.what());
    }
}

} // namespace factdeck
