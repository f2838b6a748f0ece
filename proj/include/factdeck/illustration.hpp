#pragma once

#include <cctype>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factdeck/chart_spec.hpp"
#include "factdeck/error.hpp"
#include "factdeck/fact.hpp"
#include "factdeck/frame.hpp"
#include "factdeck/mining.hpp"
#include "factdeck/util.hpp"

namespace factdeck {

enum class AnnotationKind { PointHighlight, PairLinkWithArrows, TrendLine };

constexpr std::string_view to_string(AnnotationKind k) {
    switch (k) {
    case AnnotationKind::PointHighlight: return "point_highlight";
    case AnnotationKind::PairLinkWithArrows: return "pair_link_with_arrows";
    case AnnotationKind::TrendLine: return "trend_line";
    }
    return "point_highlight";
}

constexpr AnnotationKind annotation_kind_for(FactType t) {
    switch (t) {
    case FactType::Difference: return AnnotationKind::PairLinkWithArrows;
    case FactType::Trend: return AnnotationKind::TrendLine;
    default: return AnnotationKind::PointHighlight;
    }
}

struct AnnotationStyle {
    std::string color = "#d62728";
    bool dim_others = true; ///< non-target marks are drawn faded

    bool operator==(const AnnotationStyle&) const = default;
};

/// One overlay added to a chart spec. Pair links carry the direction of the
/// change; trend lines carry the fitted line in series-index coordinates.
struct AnnotationLayer {
    AnnotationKind kind = AnnotationKind::PointHighlight;
    std::vector<std::string> targets;
    AnnotationStyle style;
    std::optional<Direction> direction;
    std::optional<double> slope;
    std::optional<double> intercept;
    std::string fact_id;

    bool operator==(const AnnotationLayer&) const = default;
};

struct EmbellishedSpec {
    ChartSpec base;
    std::vector<AnnotationLayer> annotations;

    bool operator==(const EmbellishedSpec&) const = default;
};

struct IllustratedFact {
    DataFact fact;
    std::string description;
    EmbellishedSpec embellished;
    bool user_edited_description = false;

    bool operator==(const IllustratedFact&) const = default;
};

namespace detail {

inline const std::string& focus_at(const DataFact& f, std::size_t i) {
    if (i >= f.focus.size())
        throw Error(ErrorCode::MissingParameter, "fact '" + f.id + "' lacks focus value " + std::to_string(i + 1));
    return f.focus[i];
}

template <typename T>
const T& require(const std::optional<T>& v, const DataFact& f, const char* name) {
    if (!v) throw Error(ErrorCode::MissingParameter, "fact '" + f.id + "' lacks parameter '" + name + "'");
    return *v;
}

inline std::string verb(Direction d) { return d == Direction::Increasing ? "increases" : "decreases"; }

} // namespace detail

/// Renders the description template of the fact's type. With `include_subspace`
/// the filters are prefixed ("For Year = 2009, ...").
inline std::string describe(const DataFact& f, bool include_subspace = false) {
    using detail::focus_at;
    using detail::require;
    const std::string measure = measure_label(f.measure);
    std::string text;
    switch (f.fact_type) {
    case FactType::Majority:
        text = "The category of " + focus_at(f, 0) + " accounts for the significant amount " +
               format_percent(require(f.parameters.ratio, f, "ratio")) + " of " + measure + ".";
        break;
    case FactType::Extreme:
        text = f.dimension + " has the " +
               (require(f.parameters.polarity, f, "polarity") == Polarity::Max ? "maximum" : "minimum") + " " +
               measure + " at " + focus_at(f, 0) + ".";
        break;
    case FactType::Outlier:
        text = f.dimension + " has an outstanding " + measure + " at " + focus_at(f, 0) + ".";
        break;
    case FactType::TurningPoint:
        text = focus_at(f, 0) + " is a turning point of " + measure + " over the " + f.dimension + ".";
        break;
    case FactType::Difference: {
        double ratio = require(f.parameters.ratio, f, "ratio");
        Direction dir = f.parameters.direction.value_or(ratio >= 0.0 ? Direction::Increasing : Direction::Decreasing);
        text = "The " + measure + " of " + focus_at(f, 1) + " " + detail::verb(dir) + " " +
               format_percent(std::abs(ratio)) + " compared with " + focus_at(f, 0) + ".";
        break;
    }
    case FactType::Trend:
        text = "The " + measure + " " + detail::verb(require(f.parameters.direction, f, "direction")) +
               " over the " + f.dimension + ".";
        break;
    }
    if (include_subspace && !f.subspace.empty()) {
        std::string prefix = "For ";
        for (std::size_t i = 0; i < f.subspace.size(); ++i) {
            if (i) prefix += ", ";
            prefix += describe_predicate(f.subspace[i]);
        }
        if (text.rfind("The ", 0) == 0) text[0] = 't';
        text = prefix + ", " + text;
    }
    return text;
}

/// The overlay for a fact, checked against the chart's current series.
inline AnnotationLayer annotation_for(const DataFact& fact, const AnalysisFrame& frame) {
    for (const auto& label : fact.focus)
        if (!frame.find(label))
            throw Error(ErrorCode::FocusNotInChart, "focus '" + label + "' is not in chart '" + frame.chart_id + "'");
    AnnotationLayer layer;
    layer.kind = annotation_kind_for(fact.fact_type);
    layer.targets = fact.focus;
    layer.fact_id = fact.id;
    switch (layer.kind) {
    case AnnotationKind::PointHighlight:
        if (fact.focus.size() != 1)
            throw Error(ErrorCode::FocusNotInChart, "a highlight needs exactly one focus value");
        break;
    case AnnotationKind::PairLinkWithArrows:
        if (fact.focus.size() != 2) throw Error(ErrorCode::FocusNotInChart, "a pair link needs two focus values");
        layer.direction = fact.parameters.direction;
        break;
    case AnnotationKind::TrendLine: {
        LinearFit fit = fit_line(frame.series);
        layer.slope = fact.parameters.slope.value_or(fit.slope);
        layer.intercept = fact.parameters.intercept.value_or(fit.intercept);
        layer.direction = fact.parameters.direction;
        layer.style.dim_others = false;
        break;
    }
    }
    return layer;
}

/// Appends the fact's overlay; the base spec is carried unchanged.
inline EmbellishedSpec embellish(const ChartSpec& spec, const DataFact& fact, const AnalysisFrame& frame) {
    return {spec, {annotation_for(fact, frame)}};
}

inline const ChartSpec& strip(const EmbellishedSpec& e) { return e.base; }

inline json to_json(const AnnotationLayer& a) {
    json j = {{"kind", std::string(to_string(a.kind))},
              {"targets", a.targets},
              {"style", {{"color", a.style.color}, {"dim_others", a.style.dim_others}}},
              {"fact_id", a.fact_id}};
    if (a.direction) j["direction"] = std::string(to_string(*a.direction));
    if (a.slope) j["slope"] = *a.slope;
    if (a.intercept) j["intercept"] = *a.intercept;
    return j;
}

inline AnnotationLayer annotation_from_json(const json& j) {
    AnnotationLayer a;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "point_highlight") a.kind = AnnotationKind::PointHighlight;
    else if (kind == "pair_link_with_arrows") a.kind = AnnotationKind::PairLinkWithArrows;
    else if (kind == "trend_line") a.kind = AnnotationKind::TrendLine;
    else throw Error(ErrorCode::MalformedInput, "unknown annotation kind '" + kind + "'");
    a.targets = j.at("targets").get<std::vector<std::string>>();
    a.style.color = j.at("style").at("color").get<std::string>();
    a.style.dim_others = j.at("style").at("dim_others").get<bool>();
    a.fact_id = j.value("fact_id", std::string{});
    if (j.contains("direction"))
        a.direction = j["direction"].get<std::string>() == "increasing" ? Direction::Increasing : Direction::Decreasing;
    if (j.contains("slope")) a.slope = j["slope"].get<double>();
    if (j.contains("intercept")) a.intercept = j["intercept"].get<double>();
    return a;
}

/// The chart-spec JSON plus an `annotations` array.
inline json to_json(const EmbellishedSpec& e) {
    json j = to_json(e.base);
    json arr = json::array();
    for (const auto& a : e.annotations) arr.push_back(to_json(a));
    j["annotations"] = std::move(arr);
    return j;
}

/// Removes the annotation layers from a serialized embellished spec.
inline json strip_json(json doc) {
    doc.erase("annotations");
    return doc;
}

inline EmbellishedSpec embellished_from_json(const json& j) {
    EmbellishedSpec e;
    e.base = chart_spec_from_json(strip_json(j));
    try {
        for (const auto& a : j.at("annotations")) e.annotations.push_back(annotation_from_json(a));
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::MalformedInput, std::string("annotations: ") + ex.what());
    }
    return e;
}

inline IllustratedFact illustrate(const DataFact& fact, const ChartSpec& spec, const AnalysisFrame& frame,
                                  bool include_subspace = false) {
    return {fact, describe(fact, include_subspace), embellish(spec, fact, frame), false};
}

/// Moves the highlight to one clicked point. Single-point fact types keep
/// their type; pair and trend facts become an outlier call-out on that point.
/// The result is a user fact with the same id.
inline IllustratedFact apply_user_highlight(const IllustratedFact& ill, const std::string& focus_value,
                                            const AnalysisFrame& frame, bool include_subspace = false) {
    if (!frame.find(focus_value))
        throw Error(ErrorCode::FocusNotInChart, "'" + focus_value + "' is not in chart '" + frame.chart_id + "'");
    FactType type = ill.fact.fact_type;
    if (focus_cardinality(type) != std::optional<std::size_t>{1}) type = FactType::Outlier;
    DataFact fact = fact_for_focus(frame, type, {focus_value});
    fact.id = ill.fact.id;
    IllustratedFact out;
    out.fact = std::move(fact);
    out.user_edited_description = ill.user_edited_description;
    out.description = ill.user_edited_description ? ill.description : describe(out.fact, include_subspace);
    out.embellished = embellish(ill.embellished.base, out.fact, frame);
    return out;
}

inline json to_json(const IllustratedFact& ill) {
    return {{"fact", to_json(ill.fact)},
            {"description", ill.description},
            {"embellished_spec", to_json(ill.embellished)},
            {"user_edited_description", ill.user_edited_description}};
}

inline IllustratedFact illustrated_from_json(const json& j) {
    try {
        IllustratedFact ill;
        ill.fact = fact_from_json(j.at("fact"));
        ill.description = j.at("description").get<std::string>();
        ill.embellished = embellished_from_json(j.at("embellished_spec"));
        ill.user_edited_description = j.at("user_edited_description").get<bool>();
        return ill;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("illustrated fact: ") + e.what());
    }
}

} // namespace factdeck
