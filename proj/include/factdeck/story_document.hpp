#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "factdeck/chart_spec.hpp"
#include "factdeck/config.hpp"
#include "factdeck/error.hpp"
#include "factdeck/frame.hpp"
#include "factdeck/illustration.hpp"
#include "factdeck/story.hpp"

namespace factdeck {

inline constexpr int kStorySchemaVersion = 1;

struct ChartRecord {
    ChartSpec spec;
    AnalysisFrame frame;

    bool operator==(const ChartRecord&) const = default;
};

/// Everything needed to render a story without the dataset: charts with
/// their frames, the illustrated facts the story references, and the story.
struct StoryDocument {
    std::string dataset_id;
    Config config;
    std::map<std::string, ChartRecord> charts;
    std::map<std::string, IllustratedFact> facts;
    Story story;

    bool operator==(const StoryDocument&) const = default;

    [[nodiscard]] FactIndex fact_index() const {
        FactIndex index;
        for (const auto& [id, ill] : facts) index.emplace(id, ill.fact);
        return index;
    }
};

inline json to_json(const ChartRecord& c) { return {{"spec", to_json(c.spec)}, {"frame", to_json(c.frame)}}; }

inline ChartRecord chart_record_from_json(const json& j) {
    return {chart_spec_from_json(j.at("spec")), frame_from_json(j.at("frame"))};
}

inline json to_json(const StoryDocument& doc) {
    json charts = json::object();
    for (const auto& [id, c] : doc.charts) charts[id] = to_json(c);
    json facts = json::object();
    for (const auto& [id, f] : doc.facts) facts[id] = to_json(f);
    return {{"schema_version", kStorySchemaVersion},
            {"dataset_id", doc.dataset_id},
            {"config", to_json(doc.config)},
            {"charts", std::move(charts)},
            {"facts", std::move(facts)},
            {"story", to_json(doc.story)}};
}

inline StoryDocument story_document_from_json(const json& j) {
    try {
        if (j.at("schema_version").get<int>() != kStorySchemaVersion)
            throw Error(ErrorCode::MalformedInput, "unsupported story schema version");
        StoryDocument doc;
        doc.dataset_id = j.at("dataset_id").get<std::string>();
        doc.config = config_from_json(j.at("config"));
        for (const auto& [id, c] : j.at("charts").items()) doc.charts.emplace(id, chart_record_from_json(c));
        for (const auto& [id, f] : j.at("facts").items()) doc.facts.emplace(id, illustrated_from_json(f));
        doc.story = story_from_json(j.at("story"));
        for (const auto& id : doc.story.fact_sequence()) {
            auto it = doc.facts.find(id);
            if (it == doc.facts.end()) throw Error(ErrorCode::MalformedInput, "story references unknown fact '" + id + "'");
            if (!doc.charts.count(it->second.fact.chart_id))
                throw Error(ErrorCode::MalformedInput, "fact '" + id + "' references unknown chart");
        }
        return doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("story document: ") + e.what());
    }
}

} // namespace factdeck
