#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "factdeck/config.hpp"
#include "factdeck/error.hpp"
#include "factdeck/fact.hpp"
#include "factdeck/ordering.hpp"

namespace factdeck {

inline constexpr std::size_t kMaxFactsPerSlide = 3;

using FactIndex = std::map<std::string, DataFact>;

/// Attributes shared by every fact on a slide; a field is empty when the facts disagree.
struct Topic {
    std::optional<MeasureRef> measure;
    std::optional<std::string> measure_column; ///< survives differing aggregates
    std::optional<std::string> dimension;
    std::optional<std::vector<Predicate>> subspace; ///< sorted
    std::optional<std::vector<std::string>> focus;  ///< sorted, deduplicated

    bool operator==(const Topic&) const = default;
};

struct Slide {
    std::string id;
    std::vector<std::string> fact_ids;
    std::string title;
    bool title_user_edited = false;
    bool pinned = false;
    std::set<std::string> pinned_facts; ///< facts whose relative order the user fixed

    bool operator==(const Slide&) const = default;
};

struct Story {
    std::vector<Slide> slides;
    std::optional<std::string> head; ///< slide the user moved to the front
    std::size_t next_slide_number = 1;

    bool operator==(const Story&) const = default;

    [[nodiscard]] std::size_t fact_count() const {
        std::size_t n = 0;
        for (const auto& s : slides) n += s.fact_ids.size();
        return n;
    }

    [[nodiscard]] bool contains_fact(const std::string& id) const {
        for (const auto& s : slides)
            if (std::find(s.fact_ids.begin(), s.fact_ids.end(), id) != s.fact_ids.end()) return true;
        return false;
    }

    [[nodiscard]] std::vector<std::string> fact_sequence() const {
        std::vector<std::string> out;
        for (const auto& s : slides) out.insert(out.end(), s.fact_ids.begin(), s.fact_ids.end());
        return out;
    }
};

namespace detail {

inline std::vector<Predicate> sorted(std::vector<Predicate> v) {
    std::sort(v.begin(), v.end());
    return v;
}

inline std::vector<std::string> as_set(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline double jaccard_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::vector<std::string> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    return 1.0 - static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

/// Chart creation order term: the normalised gap, plus one full unit when the
/// transition goes back to an earlier chart.
inline double chart_gap_term(std::size_t from, std::size_t to) {
    double gap = std::abs(static_cast<double>(to) - static_cast<double>(from));
    return gap / (gap + 1.0) + (to < from ? 1.0 : 0.0);
}

} // namespace detail

enum class SubspaceRelation { Same, DrillDown, RollUp, SiblingShift, Unrelated };

/// How the filters of `to` relate to those of `from`.
inline SubspaceRelation subspace_relation(const std::vector<Predicate>& from, const std::vector<Predicate>& to) {
    auto a = detail::sorted(from);
    auto b = detail::sorted(to);
    if (a == b) return SubspaceRelation::Same;
    if (std::includes(b.begin(), b.end(), a.begin(), a.end())) return SubspaceRelation::DrillDown;
    if (std::includes(a.begin(), a.end(), b.begin(), b.end())) return SubspaceRelation::RollUp;
    std::set<std::string> ca, cb;
    for (const auto& p : a) ca.insert(p.column);
    for (const auto& p : b) cb.insert(p.column);
    if (ca == cb) return SubspaceRelation::SiblingShift;
    return SubspaceRelation::Unrelated;
}

inline double subspace_grade(SubspaceRelation r, const CostConfig& cfg) {
    switch (r) {
    case SubspaceRelation::Same: return 0.0;
    case SubspaceRelation::DrillDown: return cfg.drill_down;
    case SubspaceRelation::RollUp: return cfg.roll_up;
    case SubspaceRelation::SiblingShift: return cfg.sibling_shift;
    case SubspaceRelation::Unrelated: return cfg.unrelated;
    }
    return cfg.unrelated;
}

/// Penalty for presenting `b` right after `a`.
inline double fact_transition_cost(const DataFact& a, const DataFact& b, const CostConfig& cfg) {
    double cost = 0.0;
    if (a.dimension != b.dimension) cost += cfg.dimension_change;
    if (a.measure != b.measure) cost += cfg.measure_change;
    cost += cfg.subspace_weight * subspace_grade(subspace_relation(a.subspace, b.subspace), cfg);
    cost += cfg.focus_overlap * detail::jaccard_distance(detail::as_set(a.focus), detail::as_set(b.focus));
    if (a.fact_type != b.fact_type) cost += cfg.fact_type_change;
    cost += cfg.chart_order_penalty * detail::chart_gap_term(a.chart_index, b.chart_index);
    return cost;
}

inline const DataFact& lookup_fact(const FactIndex& facts, const std::string& id) {
    auto it = facts.find(id);
    if (it == facts.end()) throw Error(ErrorCode::UnknownId, "unknown fact '" + id + "'");
    return it->second;
}

inline Topic slide_topic(const Slide& slide, const FactIndex& facts) {
    Topic t;
    if (slide.fact_ids.empty()) return t;
    const DataFact& first = lookup_fact(facts, slide.fact_ids.front());
    t.measure = first.measure;
    t.measure_column = first.measure.column;
    t.dimension = first.dimension;
    t.subspace = detail::sorted(first.subspace);
    t.focus = detail::as_set(first.focus);
    for (std::size_t i = 1; i < slide.fact_ids.size(); ++i) {
        const DataFact& f = lookup_fact(facts, slide.fact_ids[i]);
        if (t.measure && *t.measure != f.measure) t.measure.reset();
        if (t.measure_column && *t.measure_column != f.measure.column) t.measure_column.reset();
        if (t.dimension && *t.dimension != f.dimension) t.dimension.reset();
        if (t.subspace && *t.subspace != detail::sorted(f.subspace)) t.subspace.reset();
        if (t.focus && *t.focus != detail::as_set(f.focus)) t.focus.reset();
    }
    return t;
}

/// Transition cost between topics. A field missing on either side counts as
/// a change at half weight. Chart order uses the closest pair of charts.
inline double slide_transition_cost(const Slide& a, const Slide& b, const FactIndex& facts, const CostConfig& cfg) {
    Topic ta = slide_topic(a, facts);
    Topic tb = slide_topic(b, facts);
    double cost = 0.0;
    if (ta.dimension && tb.dimension) cost += *ta.dimension != *tb.dimension ? cfg.dimension_change : 0.0;
    else cost += 0.5 * cfg.dimension_change;
    if (ta.measure && tb.measure) cost += *ta.measure != *tb.measure ? cfg.measure_change : 0.0;
    else cost += 0.5 * cfg.measure_change;
    if (ta.subspace && tb.subspace) cost += cfg.subspace_weight * subspace_grade(subspace_relation(*ta.subspace, *tb.subspace), cfg);
    else cost += 0.5 * cfg.subspace_weight * cfg.unrelated;
    if (ta.focus && tb.focus) cost += cfg.focus_overlap * detail::jaccard_distance(*ta.focus, *tb.focus);
    else cost += 0.5 * cfg.focus_overlap;

    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& fa : a.fact_ids)
        for (const auto& fb : b.fact_ids)
            best_gap = std::min(best_gap, detail::chart_gap_term(lookup_fact(facts, fa).chart_index,
                                                                 lookup_fact(facts, fb).chart_index));
    if (std::isfinite(best_gap)) cost += cfg.chart_order_penalty * best_gap;
    return cost;
}

/// "Findings about {measure column} and {dimension}", degrading as topic fields vanish.
inline std::string generate_title(const Topic& topic) {
    if (topic.measure_column && topic.dimension) return "Findings about " + *topic.measure_column + " and " + *topic.dimension;
    if (topic.measure_column) return "Findings about " + *topic.measure_column;
    return "Findings";
}

/// First slide whose facts all come from the fact's chart and that has room.
inline std::optional<std::string> find_suitable_slide(const Story& story, const DataFact& fact, const FactIndex& facts) {
    for (const auto& slide : story.slides) {
        if (slide.fact_ids.empty() || slide.fact_ids.size() >= kMaxFactsPerSlide) continue;
        bool same_chart = std::all_of(slide.fact_ids.begin(), slide.fact_ids.end(), [&](const std::string& id) {
            return lookup_fact(facts, id).chart_id == fact.chart_id;
        });
        if (same_chart) return slide.id;
    }
    return std::nullopt;
}

namespace detail {

inline const Slide& slide_by_id(const Story& story, const std::string& id) {
    for (const auto& s : story.slides)
        if (s.id == id) return s;
    throw Error(ErrorCode::UnknownId, "unknown slide '" + id + "'");
}

inline Slide& slide_by_id(Story& story, const std::string& id) {
    return const_cast<Slide&>(slide_by_id(std::as_const(story), id));
}

inline std::size_t slide_index(const Story& story, const std::string& id) {
    for (std::size_t i = 0; i < story.slides.size(); ++i)
        if (story.slides[i].id == id) return i;
    throw Error(ErrorCode::UnknownId, "unknown slide '" + id + "'");
}

/// Ranks by (key, current position) so equal keys keep their present order.
template <typename Key>
std::vector<std::size_t> ranks_from_keys(const std::vector<Key>& keys) {
    std::vector<std::size_t> idx(keys.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<std::size_t> rank(keys.size());
    for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = r;
    return rank;
}

inline void order_slide_facts(Slide& slide, const FactIndex& facts, const CostConfig& cfg) {
    const auto& ids = slide.fact_ids;
    std::vector<const DataFact*> items;
    std::vector<std::tuple<std::size_t, FactType>> keys;
    SequenceConstraints constraints;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        items.push_back(&lookup_fact(facts, ids[i]));
        keys.emplace_back(items.back()->chart_index, items.back()->fact_type);
        if (slide.pinned_facts.count(ids[i])) constraints.pinned.push_back(i);
    }
    auto rank = ranks_from_keys(keys);
    auto order = order_sequence(
        items.size(), [&](std::size_t a, std::size_t b) { return fact_transition_cost(*items[a], *items[b], cfg); },
        constraints, std::span<const std::size_t>(rank));
    std::vector<std::string> reordered;
    for (std::size_t i : order) reordered.push_back(ids[i]);
    slide.fact_ids = std::move(reordered);
}

inline void order_slides(Story& story, const FactIndex& facts, const CostConfig& cfg) {
    auto& slides = story.slides;
    std::vector<std::tuple<std::size_t, FactType>> keys;
    SequenceConstraints constraints;
    for (std::size_t i = 0; i < slides.size(); ++i) {
        std::size_t chart = std::numeric_limits<std::size_t>::max();
        FactType type = FactType::Trend;
        for (const auto& id : slides[i].fact_ids) {
            const DataFact& f = lookup_fact(facts, id);
            chart = std::min(chart, f.chart_index);
            type = std::min(type, f.fact_type);
        }
        keys.emplace_back(chart, type);
        if (slides[i].pinned) constraints.pinned.push_back(i);
        if (story.head && slides[i].id == *story.head) constraints.head = i;
    }
    auto rank = ranks_from_keys(keys);
    auto order = order_sequence(
        slides.size(),
        [&](std::size_t a, std::size_t b) { return slide_transition_cost(slides[a], slides[b], facts, cfg); },
        constraints, std::span<const std::size_t>(rank));
    std::vector<Slide> reordered;
    reordered.reserve(slides.size());
    for (std::size_t i : order) reordered.push_back(std::move(slides[i]));
    slides = std::move(reordered);
}

inline Slide new_slide(Story& story) {
    Slide s;
    s.id = "s" + std::to_string(story.next_slide_number++);
    return s;
}

inline void drop_empty_slides(Story& story) {
    std::erase_if(story.slides, [](const Slide& s) { return s.fact_ids.empty(); });
    if (story.head && std::none_of(story.slides.begin(), story.slides.end(),
                                   [&](const Slide& s) { return s.id == *story.head; }))
        story.head.reset();
}

} // namespace detail

/// Regenerates every title the user has not edited.
inline void refresh_titles(Story& story, const FactIndex& facts) {
    for (auto& slide : story.slides)
        if (!slide.title_user_edited) slide.title = generate_title(slide_topic(slide, facts));
}

/// Re-optimises fact order inside every slide and the slide order, leaving
/// pinned relative orders and the head slide in place.
inline Story reorganize(Story story, const FactIndex& facts, const CostConfig& cfg) {
    for (auto& slide : story.slides) detail::order_slide_facts(slide, facts, cfg);
    detail::order_slides(story, facts, cfg);
    refresh_titles(story, facts);
    return story;
}

/// Places a selected fact into a suitable slide or a new one, then re-optimises.
inline Story insert_fact(Story story, const std::string& fact_id, const FactIndex& facts, const CostConfig& cfg) {
    if (story.contains_fact(fact_id)) throw Error(ErrorCode::DuplicateFact, "fact '" + fact_id + "' is already in the story");
    const DataFact& fact = lookup_fact(facts, fact_id);
    if (auto target = find_suitable_slide(story, fact, facts)) {
        Slide& slide = detail::slide_by_id(story, *target);
        slide.fact_ids.push_back(fact_id);
        detail::order_slide_facts(slide, facts, cfg);
    } else {
        Slide slide = detail::new_slide(story);
        slide.fact_ids.push_back(fact_id);
        story.slides.push_back(std::move(slide));
    }
    detail::order_slides(story, facts, cfg);
    refresh_titles(story, facts);
    return story;
}

/// Takes a fact out of the story. Emptied slides disappear; nothing is reordered.
inline Story remove_fact(Story story, const std::string& fact_id, const FactIndex& facts) {
    bool found = false;
    for (auto& slide : story.slides) {
        auto it = std::find(slide.fact_ids.begin(), slide.fact_ids.end(), fact_id);
        if (it == slide.fact_ids.end()) continue;
        slide.fact_ids.erase(it);
        slide.pinned_facts.erase(fact_id);
        found = true;
    }
    if (!found) throw Error(ErrorCode::UnknownId, "fact '" + fact_id + "' is not in the story");
    detail::drop_empty_slides(story);
    refresh_titles(story, facts);
    return story;
}

/// Moves a fact to `position` within `target_slide`, or into a new slide right
/// after its current one when no target is given. The receiving slide's facts
/// become pinned; a new slide pins the whole slide sequence. User-merged slides
/// may mix charts but never exceed three facts.
inline Story move_fact(Story story, const std::string& fact_id, const std::optional<std::string>& target_slide,
                       std::size_t position, const FactIndex& facts) {
    std::optional<std::size_t> source;
    for (std::size_t i = 0; i < story.slides.size(); ++i) {
        const auto& ids = story.slides[i].fact_ids;
        if (std::find(ids.begin(), ids.end(), fact_id) != ids.end()) source = i;
    }
    if (!source) throw Error(ErrorCode::UnknownId, "fact '" + fact_id + "' is not in the story");
    const std::string source_id = story.slides[*source].id;

    std::string target_id;
    if (target_slide) {
        Slide& target = detail::slide_by_id(story, *target_slide);
        bool same = target.id == source_id;
        std::size_t size_after = target.fact_ids.size() + (same ? 0 : 1);
        if (size_after > kMaxFactsPerSlide)
            throw Error(ErrorCode::SlideFull, "slide '" + target.id + "' already holds three facts");
        if (position >= size_after)
            throw Error(ErrorCode::InvalidPosition, "position " + std::to_string(position) + " is outside slide '" +
                                                        target.id + "'");
        target_id = target.id;
    } else {
        if (position != 0) throw Error(ErrorCode::InvalidPosition, "a new slide only has position 0");
        Slide fresh = detail::new_slide(story);
        target_id = fresh.id;
        story.slides.insert(story.slides.begin() + static_cast<std::ptrdiff_t>(*source) + 1, std::move(fresh));
        for (auto& s : story.slides) s.pinned = true;
    }

    Slide& src = detail::slide_by_id(story, source_id);
    std::erase(src.fact_ids, fact_id);
    src.pinned_facts.erase(fact_id);
    for (const auto& id : src.fact_ids) src.pinned_facts.insert(id);

    Slide& dst = detail::slide_by_id(story, target_id);
    dst.fact_ids.insert(dst.fact_ids.begin() + static_cast<std::ptrdiff_t>(position), fact_id);
    for (const auto& id : dst.fact_ids) dst.pinned_facts.insert(id);

    detail::drop_empty_slides(story);
    refresh_titles(story, facts);
    return story;
}

/// Moves a slide to `position`. The resulting slide sequence becomes pinned;
/// a slide moved to the front stays first.
inline Story move_slide(Story story, const std::string& slide_id, std::size_t position, const FactIndex& facts) {
    std::size_t from = detail::slide_index(story, slide_id);
    if (position >= story.slides.size())
        throw Error(ErrorCode::InvalidPosition, "slide position " + std::to_string(position) + " is out of range");
    Slide moving = std::move(story.slides[from]);
    story.slides.erase(story.slides.begin() + static_cast<std::ptrdiff_t>(from));
    story.slides.insert(story.slides.begin() + static_cast<std::ptrdiff_t>(position), std::move(moving));
    for (auto& s : story.slides) s.pinned = true;
    if (position == 0) story.head = slide_id;
    else if (story.head == slide_id) story.head.reset();
    refresh_titles(story, facts);
    return story;
}

/// Moves every fact of `source_slide` to the end of `target_slide`.
inline Story merge_slides(Story story, const std::string& source_slide, const std::string& target_slide,
                          const FactIndex& facts) {
    if (source_slide == target_slide) throw Error(ErrorCode::InvalidPosition, "cannot merge a slide into itself");
    const Slide& src = detail::slide_by_id(story, source_slide);
    const Slide& dst = detail::slide_by_id(story, target_slide);
    if (src.fact_ids.size() + dst.fact_ids.size() > kMaxFactsPerSlide)
        throw Error(ErrorCode::SlideFull, "merged slide would exceed three facts");
    for (const auto& id : std::vector<std::string>(src.fact_ids))
        story = move_fact(std::move(story), id, target_slide, detail::slide_by_id(story, target_slide).fact_ids.size(), facts);
    return story;
}

inline Story set_slide_title(Story story, const std::string& slide_id, std::string title) {
    Slide& s = detail::slide_by_id(story, slide_id);
    s.title = std::move(title);
    s.title_user_edited = true;
    return story;
}

/// Slide ids in order, restricted to pinned slides.
inline std::vector<std::string> pinned_slide_sequence(const Story& story) {
    std::vector<std::string> out;
    for (const auto& s : story.slides)
        if (s.pinned) out.push_back(s.id);
    return out;
}

inline json to_json(const Story& story) {
    json slides = json::array();
    for (const auto& s : story.slides) {
        slides.push_back({{"id", s.id},
                          {"fact_ids", s.fact_ids},
                          {"title", s.title},
                          {"title_user_edited", s.title_user_edited},
                          {"pinned", s.pinned},
                          {"pinned_facts", std::vector<std::string>(s.pinned_facts.begin(), s.pinned_facts.end())}});
    }
    return {{"slides", std::move(slides)},
            {"head", story.head ? json(*story.head) : json(nullptr)},
            {"next_slide_number", story.next_slide_number}};
}

inline Story story_from_json(const json& j) {
    try {
        Story story;
        for (const auto& sj : j.at("slides")) {
            Slide s;
            s.id = sj.at("id").get<std::string>();
            s.fact_ids = sj.at("fact_ids").get<std::vector<std::string>>();
            s.title = sj.at("title").get<std::string>();
            s.title_user_edited = sj.at("title_user_edited").get<bool>();
            s.pinned = sj.at("pinned").get<bool>();
            for (const auto& id : sj.at("pinned_facts")) s.pinned_facts.insert(id.get<std::string>());
            if (s.fact_ids.empty() || s.fact_ids.size() > kMaxFactsPerSlide)
                throw Error(ErrorCode::MalformedInput, "slide '" + s.id + "' must hold one to three facts");
            story.slides.push_back(std::move(s));
        }
        if (!j.at("head").is_null()) story.head = j["head"].get<std::string>();
        story.next_slide_number = j.at("next_slide_number").get<std::size_t>();
        std::set<std::string> seen;
        for (const auto& id : story.fact_sequence())
            if (!seen.insert(id).second) throw Error(ErrorCode::MalformedInput, "fact '" + id + "' appears twice in story");
        return story;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("story: ") + e.what());
    }
}

} // namespace factdeck
