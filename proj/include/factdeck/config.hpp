#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "factdeck/chart_spec.hpp"
#include "factdeck/error.hpp"
#include "factdeck/fact.hpp"

namespace factdeck {

struct ScoreWeights {
    double significance = 0.5;
    double impact = 0.2;
    double suitability = 0.3;

    bool operator==(const ScoreWeights&) const = default;
};

using SuitabilityTable = std::map<std::pair<FactType, ChartType>, double>;

/// Share of trend facts presented as line charts in a corpus of published
/// data stories (42 of 57). The only measured cell of the default table.
inline constexpr double kTrendLineSuitability = 42.0 / 57.0;

/// Default fact-type/chart-type suitability. Apart from (trend, line) these are
/// assumed values; `config/default.json` lists them with the same marking.
inline SuitabilityTable default_suitability_table() {
    using F = FactType;
    using C = ChartType;
    return {
        {{F::Majority, C::Arc}, 0.6},      {{F::Majority, C::Bar}, 0.3},
        {{F::Extreme, C::Bar}, 0.6},       {{F::Extreme, C::Line}, 0.2},
        {{F::Extreme, C::Point}, 0.2},     {{F::Outlier, C::Point}, 0.4},
        {{F::Outlier, C::Bar}, 0.3},       {{F::Outlier, C::Line}, 0.2},
        {{F::TurningPoint, C::Line}, 0.6}, {{F::TurningPoint, C::Area}, 0.2},
        {{F::TurningPoint, C::Bar}, 0.15}, {{F::Difference, C::Bar}, 0.5},
        {{F::Difference, C::Line}, 0.3},   {{F::Trend, C::Line}, kTrendLineSuitability},
        {{F::Trend, C::Area}, 0.15},       {{F::Trend, C::Bar}, 0.1},
    };
}

struct MiningConfig {
    std::size_t k = 3;
    ScoreWeights weights;
    SuitabilityTable suitability_table = default_suitability_table();
    double suitability_floor = 0.1;
    double majority_threshold = 0.5;
    double trend_r2_threshold = 0.5;

    bool operator==(const MiningConfig&) const = default;
};

/// Weights of the transition-cost terms. Subspace grades apply to the
/// relation of the second fact's filters to the first's.
struct CostConfig {
    double dimension_change = 1.0;
    double measure_change = 1.0;
    double subspace_weight = 1.0;
    double drill_down = 0.3;
    double roll_up = 0.6;
    double sibling_shift = 0.8;
    double unrelated = 1.0;
    double focus_overlap = 0.5;
    double fact_type_change = 0.25;
    double chart_order_penalty = 0.25;

    bool operator==(const CostConfig&) const = default;
};

struct Config {
    MiningConfig mining;
    CostConfig costs;

    bool operator==(const Config&) const = default;
};

inline void validate(const MiningConfig& cfg) {
    if (cfg.k < 1) throw Error(ErrorCode::InvalidConfig, "k must be at least 1");
    const auto& w = cfg.weights;
    for (double v : {w.significance, w.impact, w.suitability})
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidConfig, "score weights must be non-negative");
    if (std::abs(w.significance + w.impact + w.suitability - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidConfig, "score weights must sum to 1");
    for (const auto& [key, p] : cfg.suitability_table)
        if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, "suitability entries must lie in [0, 1]");
    if (!(cfg.suitability_floor >= 0.0 && cfg.suitability_floor <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "suitability floor must lie in [0, 1]");
    if (!(cfg.majority_threshold > 0.0 && cfg.majority_threshold <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "majority threshold must lie in (0, 1]");
    if (!(cfg.trend_r2_threshold >= 0.0 && cfg.trend_r2_threshold <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "trend r2 threshold must lie in [0, 1]");
}

inline void validate(const CostConfig& c) {
    for (double v : {c.dimension_change, c.measure_change, c.subspace_weight, c.drill_down, c.roll_up,
                     c.sibling_shift, c.unrelated, c.focus_overlap, c.fact_type_change, c.chart_order_penalty})
        if (!std::isfinite(v) || v < 0.0)
            throw Error(ErrorCode::InvalidConfig, "transition cost weights must be finite and non-negative");
}

inline json to_json(const Config& cfg) {
    json suit = json::object();
    for (const auto& [key, p] : cfg.mining.suitability_table)
        suit[std::string(to_string(key.first))][std::string(to_string(key.second))] = p;
    const auto& c = cfg.costs;
    return {
        {"k", cfg.mining.k},
        {"weights", {cfg.mining.weights.significance, cfg.mining.weights.impact, cfg.mining.weights.suitability}},
        {"suitability", std::move(suit)},
        {"suitability_floor", cfg.mining.suitability_floor},
        {"thresholds", {{"majority", cfg.mining.majority_threshold}, {"trend_r2", cfg.mining.trend_r2_threshold}}},
        {"costs",
         {{"dimension_change", c.dimension_change},
          {"measure_change", c.measure_change},
          {"subspace_weight", c.subspace_weight},
          {"drill_down", c.drill_down},
          {"roll_up", c.roll_up},
          {"sibling_shift", c.sibling_shift},
          {"unrelated", c.unrelated},
          {"focus_overlap", c.focus_overlap},
          {"fact_type_change", c.fact_type_change},
          {"chart_order_penalty", c.chart_order_penalty}}},
    };
}

/// Reads a config document over the defaults. Absent keys keep their default;
/// a present `suitability` object replaces the whole table.
inline Config config_from_json(const json& doc, Config base = {}) {
    try {
        if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
        Config cfg = std::move(base);
        if (doc.contains("k")) {
            if (!doc["k"].is_number_integer() || doc["k"].get<long long>() < 1)
                throw Error(ErrorCode::InvalidConfig, "k must be a positive integer");
            cfg.mining.k = doc["k"].get<std::size_t>();
        }
        if (doc.contains("weights")) {
            const auto& w = doc["weights"];
            if (!w.is_array() || w.size() != 3) throw Error(ErrorCode::InvalidConfig, "weights must be a triple");
            cfg.mining.weights = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
        }
        if (doc.contains("suitability")) {
            SuitabilityTable table;
            for (const auto& [type_name, row] : doc["suitability"].items()) {
                auto type = fact_type_from_string(type_name);
                if (!type) throw Error(ErrorCode::InvalidConfig, "unknown fact type '" + type_name + "'");
                for (const auto& [chart_name, p] : row.items()) {
                    auto chart = chart_type_from_string(chart_name);
                    if (!chart) throw Error(ErrorCode::InvalidConfig, "unknown chart type '" + chart_name + "'");
                    table[{*type, *chart}] = p.get<double>();
                }
            }
            cfg.mining.suitability_table = std::move(table);
        }
        if (doc.contains("suitability_floor")) cfg.mining.suitability_floor = doc["suitability_floor"].get<double>();
        if (doc.contains("thresholds")) {
            const auto& t = doc["thresholds"];
            if (t.contains("majority")) cfg.mining.majority_threshold = t["majority"].get<double>();
            if (t.contains("trend_r2")) cfg.mining.trend_r2_threshold = t["trend_r2"].get<double>();
        }
        if (doc.contains("costs")) {
            const auto& c = doc["costs"];
            auto read = [&](const char* key, double& dst) {
                if (c.contains(key)) dst = c[key].get<double>();
            };
            read("dimension_change", cfg.costs.dimension_change);
            read("measure_change", cfg.costs.measure_change);
            read("subspace_weight", cfg.costs.subspace_weight);
            read("drill_down", cfg.costs.drill_down);
            read("roll_up", cfg.costs.roll_up);
            read("sibling_shift", cfg.costs.sibling_shift);
            read("unrelated", cfg.costs.unrelated);
            read("focus_overlap", cfg.costs.focus_overlap);
            read("fact_type_change", cfg.costs.fact_type_change);
            read("chart_order_penalty", cfg.costs.chart_order_penalty);
        }
        validate(cfg.mining);
        validate(cfg.costs);
        return cfg;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
}

/// Stable digest of the effective configuration.
inline std::string config_digest(const Config& cfg) { return hex64(fnv1a(to_json(cfg).dump())); }

} // namespace factdeck
