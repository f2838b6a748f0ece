#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "factdeck/chart_spec.hpp"
#include "factdeck/error.hpp"

namespace factdeck {

/// Declaration order is the tie-break order used across ranking and ordering.
enum class FactType { Majority, Extreme, Outlier, TurningPoint, Difference, Trend };

inline constexpr std::array<FactType, 6> kAllFactTypes = {FactType::Majority,     FactType::Extreme,
                                                          FactType::Outlier,      FactType::TurningPoint,
                                                          FactType::Difference,   FactType::Trend};

constexpr std::string_view to_string(FactType t) {
    switch (t) {
    case FactType::Majority: return "majority";
    case FactType::Extreme: return "extreme";
    case FactType::Outlier: return "outlier";
    case FactType::TurningPoint: return "turning_point";
    case FactType::Difference: return "difference";
    case FactType::Trend: return "trend";
    }
    return "majority";
}

constexpr std::string_view display_name(FactType t) {
    switch (t) {
    case FactType::Majority: return "Majority";
    case FactType::Extreme: return "Extreme";
    case FactType::Outlier: return "Outlier";
    case FactType::TurningPoint: return "Turning point";
    case FactType::Difference: return "Difference";
    case FactType::Trend: return "Trend";
    }
    return "Majority";
}

constexpr std::string_view camel_name(FactType t) {
    switch (t) {
    case FactType::Majority: return "Majority";
    case FactType::Extreme: return "Extreme";
    case FactType::Outlier: return "Outlier";
    case FactType::TurningPoint: return "TurningPoint";
    case FactType::Difference: return "Difference";
    case FactType::Trend: return "Trend";
    }
    return "Majority";
}

/// Accepts "turning_point", "Turning point" and "TurningPoint".
inline std::optional<FactType> fact_type_from_string(std::string_view s) {
    for (auto t : kAllFactTypes)
        if (to_string(t) == s || display_name(t) == s || camel_name(t) == s) return t;
    return std::nullopt;
}

/// Number of focus values a fact of this type carries; nullopt means "all points".
constexpr std::optional<std::size_t> focus_cardinality(FactType t) {
    switch (t) {
    case FactType::Difference: return 2;
    case FactType::Trend: return std::nullopt;
    default: return 1;
    }
}

enum class Direction { Increasing, Decreasing };
enum class Polarity { Max, Min };

constexpr std::string_view to_string(Direction d) { return d == Direction::Increasing ? "increasing" : "decreasing"; }
constexpr std::string_view to_string(Polarity p) { return p == Polarity::Max ? "max" : "min"; }

/// Type-specific details. Which members are set depends on the fact type:
/// Majority{ratio}, Extreme{polarity}, Outlier{}, TurningPoint{},
/// Difference{ratio, direction}, Trend{direction, slope, intercept}.
struct FactParameters {
    std::optional<Direction> direction;
    std::optional<Polarity> polarity;
    std::optional<double> ratio;
    std::optional<double> slope;
    std::optional<double> intercept;

    bool operator==(const FactParameters&) const = default;
};

/// Checks that exactly the keys expected for the type are present.
inline bool parameters_complete(FactType t, const FactParameters& p) {
    switch (t) {
    case FactType::Majority: return p.ratio && !p.direction && !p.polarity && !p.slope;
    case FactType::Extreme: return p.polarity && !p.ratio && !p.direction && !p.slope;
    case FactType::Outlier:
    case FactType::TurningPoint: return !p.ratio && !p.direction && !p.polarity && !p.slope && !p.intercept;
    case FactType::Difference: return p.ratio && p.direction && !p.polarity && !p.slope;
    case FactType::Trend: return p.direction && p.slope && p.intercept && !p.ratio && !p.polarity;
    }
    return false;
}

struct ScoreBreakdown {
    double significance = 0.0;
    double impact_f = 0.0;
    double suitability = 0.0;
    double total = 0.0;

    bool operator==(const ScoreBreakdown&) const = default;
};

enum class FactOrigin { Mined, User };

/// One finding in one chart.
struct DataFact {
    std::string id;
    std::vector<Predicate> subspace;
    MeasureRef measure;
    std::string dimension;
    FactType fact_type = FactType::Majority;
    FactParameters parameters;
    std::vector<std::string> focus;
    ScoreBreakdown score;
    FactOrigin origin = FactOrigin::Mined;
    std::string chart_id;
    std::size_t chart_index = 0;
    ChartType chart_type = ChartType::Bar;

    bool operator==(const DataFact&) const = default;
};

/// Deterministic id: chart, type, polarity and focus.
inline std::string make_fact_id(const DataFact& f) {
    std::string id = f.chart_id + "/" + std::string(to_string(f.fact_type));
    if (f.parameters.polarity) id += "-" + std::string(to_string(*f.parameters.polarity));
    if (f.fact_type != FactType::Trend) {
        id += "/";
        for (std::size_t i = 0; i < f.focus.size(); ++i) {
            if (i) id += "~";
            id += f.focus[i];
        }
    }
    return id;
}

inline json to_json(const FactParameters& p) {
    json j = json::object();
    if (p.direction) j["direction"] = std::string(to_string(*p.direction));
    if (p.polarity) j["polarity"] = std::string(to_string(*p.polarity));
    if (p.ratio) j["ratio"] = *p.ratio;
    if (p.slope) j["slope"] = *p.slope;
    if (p.intercept) j["intercept"] = *p.intercept;
    return j;
}

inline FactParameters parameters_from_json(const json& j) {
    FactParameters p;
    if (j.contains("direction")) {
        auto d = j["direction"].get<std::string>();
        if (d != "increasing" && d != "decreasing") throw Error(ErrorCode::MalformedInput, "bad direction '" + d + "'");
        p.direction = d == "increasing" ? Direction::Increasing : Direction::Decreasing;
    }
    if (j.contains("polarity")) {
        auto s = j["polarity"].get<std::string>();
        if (s != "max" && s != "min") throw Error(ErrorCode::MalformedInput, "bad polarity '" + s + "'");
        p.polarity = s == "max" ? Polarity::Max : Polarity::Min;
    }
    if (j.contains("ratio")) p.ratio = j["ratio"].get<double>();
    if (j.contains("slope")) p.slope = j["slope"].get<double>();
    if (j.contains("intercept")) p.intercept = j["intercept"].get<double>();
    return p;
}

inline json to_json(const ScoreBreakdown& s) {
    return {{"significance", s.significance}, {"impact_f", s.impact_f}, {"suitability", s.suitability}, {"total", s.total}};
}

inline json to_json(const MeasureRef& m) {
    return {{"field", m.column}, {"aggregate", std::string(to_string(m.aggregate))}};
}

inline MeasureRef measure_from_json(const json& j) {
    auto agg = aggregate_from_string(j.at("aggregate").get<std::string>());
    if (!agg) throw Error(ErrorCode::MalformedInput, "bad aggregate");
    return {j.at("field").get<std::string>(), *agg};
}

inline json to_json(const DataFact& f) {
    json subspace = json::array();
    for (const auto& p : f.subspace) subspace.push_back(detail::predicate_to_json(p));
    return {{"id", f.id},
            {"subspace", std::move(subspace)},
            {"measure", to_json(f.measure)},
            {"dimension", f.dimension},
            {"fact_type", std::string(to_string(f.fact_type))},
            {"parameters", to_json(f.parameters)},
            {"focus", f.focus},
            {"score", to_json(f.score)},
            {"origin", f.origin == FactOrigin::Mined ? "mined" : "user"},
            {"chart_id", f.chart_id},
            {"chart_index", f.chart_index},
            {"chart_type", std::string(to_string(f.chart_type))}};
}

inline DataFact fact_from_json(const json& j) {
    try {
        DataFact f;
        f.id = j.at("id").get<std::string>();
        json spec_doc = {{"id", ""}, {"dataset", ""}, {"mark", "bar"}, {"encoding", json::object()}, {"creation_index", 0}};
        if (!j.at("subspace").empty()) spec_doc["transform"] = {{"filter", j["subspace"]}};
        f.subspace = chart_spec_from_json(spec_doc).filters;
        f.measure = measure_from_json(j.at("measure"));
        f.dimension = j.at("dimension").get<std::string>();
        auto type = fact_type_from_string(j.at("fact_type").get<std::string>());
        if (!type) throw Error(ErrorCode::MalformedInput, "unknown fact type");
        f.fact_type = *type;
        f.parameters = parameters_from_json(j.at("parameters"));
        f.focus = j.at("focus").get<std::vector<std::string>>();
        const json& s = j.at("score");
        f.score = {s.at("significance").get<double>(), s.at("impact_f").get<double>(),
                   s.at("suitability").get<double>(), s.at("total").get<double>()};
        f.origin = j.at("origin").get<std::string>() == "user" ? FactOrigin::User : FactOrigin::Mined;
        f.chart_id = j.at("chart_id").get<std::string>();
        f.chart_index = j.at("chart_index").get<std::size_t>();
        auto ct = chart_type_from_string(j.at("chart_type").get<std::string>());
        if (!ct) throw Error(ErrorCode::MalformedInput, "unknown chart type");
        f.chart_type = *ct;
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("fact: ") + e.what());
    }
}

} // namespace factdeck
