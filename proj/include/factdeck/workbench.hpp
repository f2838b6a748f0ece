#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factdeck/chart_spec.hpp"
#include "factdeck/config.hpp"
#include "factdeck/dataset.hpp"
#include "factdeck/deck.hpp"
#include "factdeck/error.hpp"
#include "factdeck/frame.hpp"
#include "factdeck/illustration.hpp"
#include "factdeck/mining.hpp"
#include "factdeck/story.hpp"
#include "factdeck/story_document.hpp"

namespace factdeck {

/// Mines a parsed chart and illustrates the top-k facts.
inline std::vector<IllustratedFact> illustrate_chart(const ChartSpec& spec, const AnalysisFrame& frame,
                                                     const MiningConfig& cfg, bool include_subspace) {
    std::vector<IllustratedFact> out;
    for (const auto& f : mine_facts(frame, cfg)) out.push_back(illustrate(f, spec, frame, include_subspace));
    return out;
}

/// The JSON payload listing a chart's illustrated facts. CLI `mine` and the
/// chart endpoint both emit this.
inline json facts_payload(const ChartSpec& spec, const std::vector<IllustratedFact>& facts) {
    json arr = json::array();
    for (const auto& f : facts) arr.push_back(to_json(f));
    return {{"chart_id", spec.id}, {"chart", to_json(spec)}, {"facts", std::move(arr)}};
}

inline json dataset_to_json(const Dataset& ds) {
    json columns = json::array();
    for (const auto& c : ds.columns()) columns.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
    json rows = json::array();
    for (const auto& row : ds.rows()) {
        json cells = json::array();
        for (const auto& cell : row) cells.push_back(detail::cell_to_json(cell));
        rows.push_back(std::move(cells));
    }
    return {{"id", ds.id()}, {"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

inline Dataset dataset_from_json(const json& j) {
    try {
        std::vector<Column> columns;
        for (const auto& c : j.at("columns")) {
            auto kind = column_kind_from_string(c.at("kind").get<std::string>());
            if (!kind) throw Error(ErrorCode::MalformedInput, "unknown column kind");
            columns.push_back({c.at("name").get<std::string>(), *kind});
        }
        std::vector<std::vector<Cell>> rows;
        for (const auto& r : j.at("rows")) {
            std::vector<Cell> row;
            for (const auto& v : r) {
                if (v.is_number()) row.emplace_back(v.get<double>());
                else row.emplace_back(v.get<std::string>());
            }
            rows.push_back(std::move(row));
        }
        return Dataset(j.at("id").get<std::string>(), std::move(columns), std::move(rows));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("dataset: ") + e.what());
    }
}

/// Authoring state shared by the CLI and the service: datasets, charts, every
/// known fact (mined candidates and user facts), the selection and the story.
struct Workbench {
    Config config;
    bool include_subspace = false;
    std::map<std::string, Dataset> datasets;
    std::vector<std::string> dataset_order;
    std::map<std::string, ChartRecord> charts;
    std::size_t next_chart_index = 0;
    std::map<std::string, IllustratedFact> facts;
    std::vector<std::string> selected; ///< in selection order
    Story story;

    bool operator==(const Workbench&) const = default;

    [[nodiscard]] FactIndex story_index() const {
        FactIndex index;
        for (const auto& id : selected) index.emplace(id, facts.at(id).fact);
        return index;
    }

    [[nodiscard]] bool is_selected(const std::string& id) const {
        return std::find(selected.begin(), selected.end(), id) != selected.end();
    }

    const Dataset& dataset(const std::string& id) const {
        auto it = datasets.find(id);
        if (it == datasets.end()) throw Error(ErrorCode::UnknownId, "unknown dataset '" + id + "'");
        return it->second;
    }

    const ChartRecord& chart(const std::string& id) const {
        auto it = charts.find(id);
        if (it == charts.end()) throw Error(ErrorCode::UnknownId, "unknown chart '" + id + "'");
        return it->second;
    }

    const IllustratedFact& fact(const std::string& id) const {
        auto it = facts.find(id);
        if (it == facts.end()) throw Error(ErrorCode::UnknownId, "unknown fact '" + id + "'");
        return it->second;
    }

    std::string add_dataset(Dataset ds) {
        std::string id = ds.id();
        if (!datasets.count(id)) dataset_order.push_back(id);
        datasets.insert_or_assign(id, std::move(ds));
        return id;
    }

    struct AddedChart {
        std::string chart_id;
        std::vector<IllustratedFact> facts;
    };

    /// Parses, mines and illustrates a chart. Returns the illustrated top-k facts.
    AddedChart add_chart(const json& spec_doc, std::optional<std::string> dataset_id = {},
                                           std::string chart_id = {}) {
        if (!dataset_id) {
            if (spec_doc.is_object() && spec_doc.contains("dataset") && spec_doc["dataset"].is_string())
                dataset_id = spec_doc["dataset"].get<std::string>();
            else if (dataset_order.size() == 1) dataset_id = dataset_order.front();
            else throw Error(ErrorCode::InvalidSpec, "chart spec must name its dataset");
        }
        const Dataset& ds = dataset(*dataset_id);
        if (chart_id.empty()) chart_id = "c" + std::to_string(next_chart_index + 1);
        ChartSpec spec = parse_chart_spec(spec_doc, ds, chart_id, next_chart_index);
        if (charts.count(spec.id)) throw Error(ErrorCode::InvalidSpec, "chart id '" + spec.id + "' is already used");
        AnalysisFrame frame = extract_frame(spec, ds);
        auto mined = illustrate_chart(spec, frame, config.mining, include_subspace);
        next_chart_index = std::max(next_chart_index, spec.creation_index) + 1;
        charts.emplace(spec.id, ChartRecord{spec, frame});
        for (const auto& f : mined) facts.insert_or_assign(f.fact.id, f);
        return {spec.id, std::move(mined)};
    }

    /// A user-authored fact on an existing chart.
    const IllustratedFact& add_custom_fact(const std::string& chart_id, FactType type, std::vector<std::string> focus,
                                           std::optional<std::string> description = {}) {
        const ChartRecord& c = chart(chart_id);
        if (auto need = focus_cardinality(type); need && focus.size() > *need)
            throw Error(ErrorCode::InvalidSpec, "a " + std::string(display_name(type)) + " fact takes " +
                                                    std::to_string(*need) + " focus value(s)");
        DataFact f = fact_for_focus(c.frame, type, std::move(focus));
        std::string base = f.id;
        for (int n = 2; facts.count(f.id); ++n) f.id = base + "+u" + std::to_string(n);
        IllustratedFact ill = illustrate(f, c.spec, c.frame, include_subspace);
        if (description) {
            ill.description = *description;
            ill.user_edited_description = true;
        }
        return facts.insert_or_assign(f.id, std::move(ill)).first->second;
    }

    /// Applies `{fact_type?, focus?, description?}` to a fact.
    const IllustratedFact& patch_fact(const std::string& id, const json& patch) {
        if (!patch.is_object() || patch.empty()) throw Error(ErrorCode::InvalidSpec, "patch must be a non-empty object");
        for (const auto& [key, _] : patch.items())
            if (key != "fact_type" && key != "focus" && key != "description")
                throw Error(ErrorCode::InvalidSpec, "cannot patch '" + key + "'");
        IllustratedFact ill = fact(id);
        const ChartRecord& c = chart(ill.fact.chart_id);
        FactType type = ill.fact.fact_type;
        std::vector<std::string> focus = ill.fact.focus;
        bool rebuild = false;
        if (patch.contains("fact_type")) {
            auto t = patch["fact_type"].is_string() ? fact_type_from_string(patch["fact_type"].get<std::string>())
                                                    : std::nullopt;
            if (!t) throw Error(ErrorCode::InvalidSpec, "unknown fact type");
            type = *t;
            rebuild = true;
        }
        if (patch.contains("focus")) {
            const json& fj = patch["focus"];
            if (fj.is_string()) focus = {fj.get<std::string>()};
            else if (fj.is_array() && std::all_of(fj.begin(), fj.end(), [](const json& v) { return v.is_string(); }))
                focus = fj.get<std::vector<std::string>>();
            else throw Error(ErrorCode::InvalidSpec, "focus must be a string or list of strings");
            if (!rebuild && fj.is_string()) {
                ill = apply_user_highlight(ill, focus.front(), c.frame, include_subspace);
            } else {
                rebuild = true;
            }
        }
        if (rebuild) {
            if (auto need = focus_cardinality(type); need && focus.size() > *need) focus.resize(*need);
            DataFact f = fact_for_focus(c.frame, type, focus);
            f.id = id;
            ill.fact = std::move(f);
            if (!ill.user_edited_description) ill.description = describe(ill.fact, include_subspace);
            ill.embellished = embellish(c.spec, ill.fact, c.frame);
        }
        if (patch.contains("description")) {
            if (!patch["description"].is_string()) throw Error(ErrorCode::InvalidSpec, "description must be a string");
            ill.description = patch["description"].get<std::string>();
            ill.user_edited_description = true;
        }
        facts.insert_or_assign(id, ill);
        if (is_selected(id)) refresh_titles(story, story_index());
        return facts.at(id);
    }

    void select(const std::string& id) {
        (void)fact(id);
        if (is_selected(id)) throw Error(ErrorCode::DuplicateFact, "fact '" + id + "' is already in the story");
        selected.push_back(id);
        try {
            story = insert_fact(std::move(story), id, story_index(), config.costs);
        } catch (...) {
            selected.pop_back();
            throw;
        }
    }

    void deselect(const std::string& id) {
        (void)fact(id);
        if (!is_selected(id)) throw Error(ErrorCode::UnknownId, "fact '" + id + "' is not in the story");
        story = remove_fact(std::move(story), id, story_index());
        std::erase(selected, id);
    }

    /// Resolves a slide reference: a slide id or `{"of_fact": id}`.
    [[nodiscard]] std::string slide_ref(const json& ref) const {
        if (ref.is_string()) {
            (void)detail::slide_by_id(story, ref.get<std::string>());
            return ref.get<std::string>();
        }
        if (ref.is_object() && ref.contains("of_fact") && ref["of_fact"].is_string()) {
            std::string fid = ref["of_fact"].get<std::string>();
            for (const auto& s : story.slides)
                if (std::find(s.fact_ids.begin(), s.fact_ids.end(), fid) != s.fact_ids.end()) return s.id;
            throw Error(ErrorCode::UnknownId, "fact '" + fid + "' is not in the story");
        }
        throw Error(ErrorCode::InvalidSpec, "slide reference must be an id or {\"of_fact\": id}");
    }

    /// Applies one manual edit:
    ///   {op: move_fact, fact, slide|null, position}
    ///   {op: split, fact}
    ///   {op: move_slide, slide, position}
    ///   {op: merge, source, target}
    void apply_move(const json& op) {
        if (!op.is_object() || !op.contains("op") || !op["op"].is_string())
            throw Error(ErrorCode::InvalidSpec, "move needs an 'op'");
        const std::string kind = op["op"].get<std::string>();
        auto str = [&](const char* key) {
            if (!op.contains(key) || !op[key].is_string())
                throw Error(ErrorCode::InvalidSpec, std::string("move needs string '") + key + "'");
            return op[key].get<std::string>();
        };
        auto position = [&]() -> std::size_t {
            if (!op.contains("position")) return 0;
            if (!op["position"].is_number_unsigned())
                throw Error(ErrorCode::InvalidPosition, "position must be a non-negative integer");
            return op["position"].get<std::size_t>();
        };
        FactIndex index = story_index();
        if (kind == "move_fact") {
            std::optional<std::string> target;
            if (op.contains("slide") && !op["slide"].is_null()) target = slide_ref(op["slide"]);
            story = move_fact(std::move(story), str("fact"), target, position(), index);
        } else if (kind == "split") {
            story = move_fact(std::move(story), str("fact"), std::nullopt, 0, index);
        } else if (kind == "move_slide") {
            if (!op.contains("slide")) throw Error(ErrorCode::InvalidSpec, "move needs 'slide'");
            story = move_slide(std::move(story), slide_ref(op["slide"]), position(), index);
        } else if (kind == "merge") {
            if (!op.contains("source") || !op.contains("target"))
                throw Error(ErrorCode::InvalidSpec, "merge needs 'source' and 'target'");
            story = merge_slides(std::move(story), slide_ref(op["source"]), slide_ref(op["target"]), index);
        } else {
            throw Error(ErrorCode::InvalidSpec, "unknown move op '" + kind + "'");
        }
    }

    void set_title(const std::string& slide_id, std::string title) {
        story = set_slide_title(std::move(story), slide_id, std::move(title));
    }

    /// The story with only the charts and facts it needs.
    [[nodiscard]] StoryDocument document() const {
        StoryDocument doc;
        doc.config = config;
        doc.story = story;
        for (const auto& id : selected) {
            const IllustratedFact& f = facts.at(id);
            doc.facts.emplace(id, f);
            const ChartRecord& c = chart(f.fact.chart_id);
            doc.charts.emplace(c.spec.id, c);
            if (doc.dataset_id.empty()) doc.dataset_id = c.spec.dataset_id;
        }
        if (doc.dataset_id.empty() && !dataset_order.empty()) doc.dataset_id = dataset_order.front();
        return doc;
    }

    /// Checks the cross-references a restored workbench must satisfy.
    void check_invariants() const {
        for (const auto& [id, c] : charts)
            if (!datasets.count(c.spec.dataset_id)) throw Error(ErrorCode::CorruptSession, "chart '" + id + "' has no dataset");
        for (const auto& [id, f] : facts)
            if (!charts.count(f.fact.chart_id)) throw Error(ErrorCode::CorruptSession, "fact '" + id + "' has no chart");
        std::set<std::string> sel(selected.begin(), selected.end());
        if (sel.size() != selected.size()) throw Error(ErrorCode::CorruptSession, "duplicate selection");
        for (const auto& id : selected)
            if (!facts.count(id)) throw Error(ErrorCode::CorruptSession, "selected fact '" + id + "' is unknown");
        auto seq = story.fact_sequence();
        std::set<std::string> in_story(seq.begin(), seq.end());
        if (in_story.size() != seq.size() || in_story != sel)
            throw Error(ErrorCode::CorruptSession, "story and selection disagree");
    }
};

inline json to_json(const Workbench& w) {
    json datasets = json::array();
    for (const auto& id : w.dataset_order) datasets.push_back(dataset_to_json(w.datasets.at(id)));
    json charts = json::object();
    for (const auto& [id, c] : w.charts) charts[id] = to_json(c);
    json facts = json::object();
    for (const auto& [id, f] : w.facts) facts[id] = to_json(f);
    return {{"config", to_json(w.config)},
            {"include_subspace", w.include_subspace},
            {"datasets", std::move(datasets)},
            {"charts", std::move(charts)},
            {"next_chart_index", w.next_chart_index},
            {"facts", std::move(facts)},
            {"selected", w.selected},
            {"story", to_json(w.story)}};
}

inline Workbench workbench_from_json(const json& j) {
    try {
        Workbench w;
        w.config = config_from_json(j.at("config"));
        w.include_subspace = j.at("include_subspace").get<bool>();
        for (const auto& d : j.at("datasets")) w.add_dataset(dataset_from_json(d));
        for (const auto& [id, c] : j.at("charts").items()) w.charts.emplace(id, chart_record_from_json(c));
        w.next_chart_index = j.at("next_chart_index").get<std::size_t>();
        for (const auto& [id, f] : j.at("facts").items()) w.facts.emplace(id, illustrated_from_json(f));
        w.selected = j.at("selected").get<std::vector<std::string>>();
        w.story = story_from_json(j.at("story"));
        w.check_invariants();
        return w;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptSession, std::string("session state: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CorruptSession) throw;
        throw Error(ErrorCode::CorruptSession, e.what());
    }
}

/// Runs a selection script against a workbench whose charts are loaded:
/// `facts` are selected in order, then `steps` run in order. A step is one of
/// `{select}`, `{deselect}`, `{custom: {chart, fact_type, focus, description?, select?}}`,
/// `{move: <op>}`, `{title: {slide, text}}`.
inline void apply_selection(Workbench& w, const json& selection) try {
    if (!selection.is_object()) throw Error(ErrorCode::InvalidSpec, "selection must be an object");
    for (const auto& [key, value] : selection.items())
        if (key != "facts" && key != "steps") throw Error(ErrorCode::InvalidSpec, "unknown selection key '" + key + "'");
    if (selection.contains("facts")) {
        if (!selection["facts"].is_array()) throw Error(ErrorCode::InvalidSpec, "'facts' must be a list");
        for (const auto& id : selection["facts"]) {
            if (!id.is_string()) throw Error(ErrorCode::InvalidSpec, "fact ids must be strings");
            w.select(id.get<std::string>());
        }
    }
    if (!selection.contains("steps")) return;
    if (!selection["steps"].is_array()) throw Error(ErrorCode::InvalidSpec, "'steps' must be a list");
    for (const auto& step : selection["steps"]) {
        if (!step.is_object() || step.size() != 1) throw Error(ErrorCode::InvalidSpec, "each step has exactly one key");
        const auto& [key, body] = *step.items().begin();
        if (key == "select") w.select(body.get<std::string>());
        else if (key == "deselect") w.deselect(body.get<std::string>());
        else if (key == "move") w.apply_move(body);
        else if (key == "title") w.set_title(w.slide_ref(body.at("slide")), body.at("text").get<std::string>());
        else if (key == "custom") {
            auto type = fact_type_from_string(body.at("fact_type").get<std::string>());
            if (!type) throw Error(ErrorCode::InvalidSpec, "unknown fact type");
            std::vector<std::string> focus;
            if (body.contains("focus"))
                focus = body["focus"].is_string() ? std::vector{body["focus"].get<std::string>()}
                                                  : body["focus"].get<std::vector<std::string>>();
            std::optional<std::string> text;
            if (body.contains("description")) text = body["description"].get<std::string>();
            const auto& f = w.add_custom_fact(body.at("chart").get<std::string>(), *type, focus, text);
            if (body.value("select", true)) w.select(f.fact.id);
        } else {
            throw Error(ErrorCode::InvalidSpec, "unknown step '" + key + "'");
        }
    }
} catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("selection: ") + e.what());
}

} // namespace factdeck
