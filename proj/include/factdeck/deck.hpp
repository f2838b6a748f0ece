#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factdeck/error.hpp"
#include "factdeck/illustration.hpp"
#include "factdeck/story_document.hpp"
#include "factdeck/svg.hpp"

namespace factdeck {

inline constexpr int kDeckSchemaVersion = 1;

enum class Layout { ProgressiveSameChart, SideBySide };

constexpr std::string_view to_string(Layout l) {
    return l == Layout::ProgressiveSameChart ? "progressive_same_chart" : "side_by_side";
}

/// Byte range [start, end) of the description to emphasize.
struct EmphasisSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const EmphasisSpan&) const = default;
};

struct DeckBlock {
    std::string fact_id;
    std::string chart_id;
    FactType fact_type = FactType::Extreme;
    std::string description;
    std::vector<EmphasisSpan> emphasis;
    EmbellishedSpec embellished; ///< progressive slides carry the annotations of all earlier blocks too
    ChartData chart;

    bool operator==(const DeckBlock&) const = default;
};

struct RenderedSlide {
    std::string id;
    std::string title;
    Layout layout = Layout::ProgressiveSameChart;
    std::optional<std::string> encoding_intro;
    std::vector<DeckBlock> blocks;

    bool operator==(const RenderedSlide&) const = default;
};

struct DeckMetadata {
    std::string dataset_id;
    std::string generated_at;
    std::string config_digest;

    bool operator==(const DeckMetadata&) const = default;
};

struct DeckDocument {
    std::vector<RenderedSlide> slides;
    DeckMetadata metadata;

    bool operator==(const DeckDocument&) const = default;
};

/// Progressive when every fact on the slide comes from one chart.
inline Layout select_layout(const Slide& slide, const FactIndex& facts) {
    if (slide.fact_ids.empty()) throw Error(ErrorCode::InvalidSpec, "slide '" + slide.id + "' is empty");
    const std::string& chart = lookup_fact(facts, slide.fact_ids.front()).chart_id;
    for (const auto& id : slide.fact_ids)
        if (lookup_fact(facts, id).chart_id != chart) return Layout::SideBySide;
    return Layout::ProgressiveSameChart;
}

inline std::string chart_type_noun(ChartType t) {
    switch (t) {
    case ChartType::Bar: return "Bar chart";
    case ChartType::Line: return "Line chart";
    case ChartType::Area: return "Area chart";
    case ChartType::Point: return "Scatter plot";
    case ChartType::Arc: return "Pie chart";
    }
    return "Chart";
}

inline std::string encoding_intro(const AnalysisFrame& frame) {
    return chart_type_noun(frame.chart_type) + " of " + measure_label(frame.measure) + " by " + frame.dimension;
}

/// Marks the fact-type keywords, the ratio and the focus values that occur in
/// the description. Spans are sorted and never overlap; text the user rewrote
/// may yield none.
inline std::vector<EmphasisSpan> emphasize(std::string_view description, const DataFact& fact) {
    std::vector<std::string> needles;
    switch (fact.fact_type) {
    case FactType::Majority: needles = {"significant amount"}; break;
    case FactType::Extreme: needles = {"maximum", "minimum"}; break;
    case FactType::Outlier: needles = {"outstanding"}; break;
    case FactType::TurningPoint: needles = {"turning point"}; break;
    case FactType::Difference:
    case FactType::Trend: needles = {"increases", "decreases"}; break;
    }
    if (fact.parameters.ratio) needles.push_back(format_percent(std::abs(*fact.parameters.ratio)));
    if (fact.fact_type != FactType::Trend)
        for (const auto& f : fact.focus) needles.push_back(f);

    std::vector<EmphasisSpan> found;
    for (const auto& needle : needles) {
        if (needle.empty()) continue;
        for (std::size_t pos = description.find(needle); pos != std::string_view::npos;
             pos = description.find(needle, pos + 1)) {
            // Only whole tokens: "20" must not light up inside "2009".
            auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
            bool left_ok = pos == 0 || !word(description[pos - 1]) || !word(needle.front());
            std::size_t end = pos + needle.size();
            bool right_ok = end == description.size() || !word(description[end]) || !word(needle.back());
            if (left_ok && right_ok) found.push_back({pos, end});
        }
    }
    std::sort(found.begin(), found.end(), [](const EmphasisSpan& a, const EmphasisSpan& b) {
        return a.start != b.start ? a.start < b.start : a.end > b.end;
    });
    std::vector<EmphasisSpan> spans;
    for (const auto& s : found)
        if (spans.empty() || s.start >= spans.back().end) spans.push_back(s);
    return spans;
}

inline ChartData chart_data(const AnalysisFrame& frame) {
    ChartData d;
    d.chart_type = frame.chart_type;
    d.measure = measure_label(frame.measure);
    d.dimension = frame.dimension;
    for (const auto& p : frame.series) {
        d.labels.push_back(p.label);
        d.values.push_back(p.value);
    }
    return d;
}

/// Lays out every slide of the story. `generated_at` is stamped into the
/// metadata as given so output stays reproducible.
inline DeckDocument render_deck(const StoryDocument& doc, std::string generated_at = {}) {
    if (doc.story.slides.empty() || doc.story.fact_count() == 0) throw Error(ErrorCode::EmptyStory, "the story has no facts");
    FactIndex index = doc.fact_index();
    DeckDocument deck;
    deck.metadata = {doc.dataset_id, std::move(generated_at), config_digest(doc.config)};
    for (const auto& slide : doc.story.slides) {
        RenderedSlide out;
        out.id = slide.id;
        out.title = slide.title;
        out.layout = select_layout(slide, index);
        std::vector<AnnotationLayer> cumulative;
        for (const auto& fid : slide.fact_ids) {
            auto it = doc.facts.find(fid);
            if (it == doc.facts.end()) throw Error(ErrorCode::UnknownId, "unknown fact '" + fid + "'");
            const IllustratedFact& ill = it->second;
            auto chart = doc.charts.find(ill.fact.chart_id);
            if (chart == doc.charts.end()) throw Error(ErrorCode::UnknownId, "unknown chart '" + ill.fact.chart_id + "'");
            DeckBlock block;
            block.fact_id = fid;
            block.chart_id = ill.fact.chart_id;
            block.fact_type = ill.fact.fact_type;
            block.description = ill.description;
            block.emphasis = emphasize(ill.description, ill.fact);
            block.embellished = ill.embellished;
            if (out.layout == Layout::ProgressiveSameChart) {
                cumulative.insert(cumulative.end(), ill.embellished.annotations.begin(), ill.embellished.annotations.end());
                block.embellished.annotations = cumulative;
            }
            block.chart = chart_data(chart->second.frame);
            if (out.layout == Layout::ProgressiveSameChart && !out.encoding_intro)
                out.encoding_intro = encoding_intro(chart->second.frame);
            out.blocks.push_back(std::move(block));
        }
        deck.slides.push_back(std::move(out));
    }
    return deck;
}

// ---- JSON ----

inline json to_json(const ChartData& d) {
    return {{"chart_type", std::string(to_string(d.chart_type))},
            {"measure", d.measure},
            {"dimension", d.dimension},
            {"labels", d.labels},
            {"values", d.values}};
}

inline json to_json(const DeckDocument& deck) {
    json slides = json::array();
    for (const auto& s : deck.slides) {
        json blocks = json::array();
        for (const auto& b : s.blocks) {
            json spans = json::array();
            for (const auto& e : b.emphasis) spans.push_back({{"start", e.start}, {"end", e.end}});
            blocks.push_back({{"fact_id", b.fact_id},
                              {"chart_id", b.chart_id},
                              {"fact_type", std::string(to_string(b.fact_type))},
                              {"description", b.description},
                              {"emphasis", std::move(spans)},
                              {"embellished_spec", to_json(b.embellished)},
                              {"chart", to_json(b.chart)}});
        }
        json slide = {{"id", s.id}, {"title", s.title}, {"layout", std::string(to_string(s.layout))},
                      {"blocks", std::move(blocks)}};
        if (s.encoding_intro) slide["encoding_intro"] = *s.encoding_intro;
        slides.push_back(std::move(slide));
    }
    return {{"schema_version", kDeckSchemaVersion},
            {"metadata",
             {{"dataset_id", deck.metadata.dataset_id},
              {"generated_at", deck.metadata.generated_at},
              {"config_digest", deck.metadata.config_digest}}},
            {"slides", std::move(slides)}};
}

inline DeckDocument deck_from_json(const json& j) {
    try {
        if (j.at("schema_version").get<int>() != kDeckSchemaVersion)
            throw Error(ErrorCode::MalformedInput, "unsupported deck schema version");
        DeckDocument deck;
        const auto& m = j.at("metadata");
        deck.metadata = {m.at("dataset_id").get<std::string>(), m.at("generated_at").get<std::string>(),
                         m.at("config_digest").get<std::string>()};
        for (const auto& s : j.at("slides")) {
            RenderedSlide slide;
            slide.id = s.at("id").get<std::string>();
            slide.title = s.at("title").get<std::string>();
            std::string layout = s.at("layout").get<std::string>();
            if (layout == "progressive_same_chart") slide.layout = Layout::ProgressiveSameChart;
            else if (layout == "side_by_side") slide.layout = Layout::SideBySide;
            else throw Error(ErrorCode::MalformedInput, "unknown layout '" + layout + "'");
            if (s.contains("encoding_intro")) slide.encoding_intro = s["encoding_intro"].get<std::string>();
            for (const auto& b : s.at("blocks")) {
                DeckBlock block;
                block.fact_id = b.at("fact_id").get<std::string>();
                block.chart_id = b.at("chart_id").get<std::string>();
                auto type = fact_type_from_string(b.at("fact_type").get<std::string>());
                if (!type) throw Error(ErrorCode::MalformedInput, "unknown fact type in deck");
                block.fact_type = *type;
                block.description = b.at("description").get<std::string>();
                for (const auto& e : b.at("emphasis"))
                    block.emphasis.push_back({e.at("start").get<std::size_t>(), e.at("end").get<std::size_t>()});
                block.embellished = embellished_from_json(b.at("embellished_spec"));
                const auto& c = b.at("chart");
                auto ct = chart_type_from_string(c.at("chart_type").get<std::string>());
                if (!ct) throw Error(ErrorCode::MalformedInput, "unknown chart type in deck");
                block.chart = {*ct, c.at("measure").get<std::string>(), c.at("dimension").get<std::string>(),
                               c.at("labels").get<std::vector<std::string>>(), c.at("values").get<std::vector<double>>()};
                slide.blocks.push_back(std::move(block));
            }
            deck.slides.push_back(std::move(slide));
        }
        return deck;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("deck: ") + e.what());
    }
}

// ---- Markdown / HTML ----

namespace detail {

template <typename Wrap>
std::string apply_spans(const std::string& text, const std::vector<EmphasisSpan>& spans, Wrap wrap,
                        std::string (*plain)(std::string_view)) {
    std::string out;
    std::size_t at = 0;
    for (const auto& s : spans) {
        if (s.start < at || s.end > text.size()) continue;
        out += plain(std::string_view(text).substr(at, s.start - at));
        out += wrap(plain(std::string_view(text).substr(s.start, s.end - s.start)));
        at = s.end;
    }
    out += plain(std::string_view(text).substr(at));
    return out;
}

inline std::string identity(std::string_view s) { return std::string(s); }
inline std::string html_text(std::string_view s) { return escape_xml(s); }

} // namespace detail

inline std::string to_markdown(const DeckDocument& deck) {
    std::string md = "# Story\n\n";
    if (!deck.metadata.dataset_id.empty()) md += "Dataset: `" + deck.metadata.dataset_id + "`\n\n";
    for (const auto& s : deck.slides) {
        md += "## " + s.title + "\n\n";
        if (s.encoding_intro) md += "*" + *s.encoding_intro + "*\n\n";
        for (const auto& b : s.blocks) {
            md += "- " + detail::apply_spans(b.description, b.emphasis,
                                             [](const std::string& t) { return "**" + t + "**"; }, detail::identity) +
                  "\n";
        }
        md += "\n";
        // Progressive slides share a chart; its final state is the last block.
        std::vector<const DeckBlock*> shown;
        if (s.layout == Layout::ProgressiveSameChart) shown.push_back(&s.blocks.back());
        else
            for (const auto& b : s.blocks) shown.push_back(&b);
        for (const auto* b : shown) md += "```json\n" + to_json(b->embellished).dump(2) + "\n```\n\n";
    }
    return md;
}

inline std::string to_html(const DeckDocument& deck) {
    std::string html =
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Story</title>\n<style>\n"
        "body{font-family:sans-serif;margin:0;background:#eee}\n"
        "section.slide{background:#fff;width:960px;min-height:540px;margin:24px auto;padding:24px 32px;"
        "box-sizing:border-box;box-shadow:0 1px 4px rgba(0,0,0,.2);page-break-after:always}\n"
        "section.slide h2{margin-top:0}\n.intro{color:#555;font-style:italic}\n"
        ".progressive{display:flex;gap:24px}\n.progressive ol{flex:1}\n"
        ".side-by-side{display:flex;gap:16px}\n.side-by-side figure{flex:1;margin:0}\n"
        ".step{display:none}\n.step.last{display:block}\nstrong{color:#d62728}\n"
        "</style>\n</head>\n<body>\n";
    auto wrap = [](const std::string& t) { return "<strong>" + t + "</strong>"; };
    for (std::size_t i = 0; i < deck.slides.size(); ++i) {
        const auto& s = deck.slides[i];
        html += "<section class=\"slide\" id=\"slide-" + std::to_string(i + 1) + "\" data-layout=\"" +
                std::string(to_string(s.layout)) + "\">\n<h2>" + escape_xml(s.title) + "</h2>\n";
        if (s.encoding_intro) html += "<p class=\"intro\">" + escape_xml(*s.encoding_intro) + "</p>\n";
        if (s.layout == Layout::ProgressiveSameChart) {
            html += "<div class=\"progressive\">\n<ol>\n";
            for (const auto& b : s.blocks)
                html += "<li>" + detail::apply_spans(b.description, b.emphasis, wrap, detail::html_text) + "</li>\n";
            html += "</ol>\n<div class=\"steps\">\n";
            for (std::size_t k = 0; k < s.blocks.size(); ++k) {
                const auto& b = s.blocks[k];
                html += std::string("<div class=\"step") + (k + 1 == s.blocks.size() ? " last" : "") +
                        "\" data-step=\"" + std::to_string(k + 1) + "\">" +
                        render_svg(b.chart, b.embellished.annotations) + "</div>\n";
            }
            html += "</div>\n</div>\n";
        } else {
            html += "<div class=\"side-by-side\">\n";
            for (const auto& b : s.blocks)
                html += "<figure>" + render_svg(b.chart, b.embellished.annotations) + "<figcaption>" +
                        detail::apply_spans(b.description, b.emphasis, wrap, detail::html_text) +
                        "</figcaption></figure>\n";
            html += "</div>\n";
        }
        html += "</section>\n";
    }
    html += "</body>\n</html>\n";
    return html;
}

enum class ExportFormat { Json, Markdown, Html };

inline std::optional<ExportFormat> export_format_from_string(std::string_view s) {
    if (s == "json") return ExportFormat::Json;
    if (s == "markdown" || s == "md") return ExportFormat::Markdown;
    if (s == "html") return ExportFormat::Html;
    return std::nullopt;
}

inline std::string export_deck(const DeckDocument& deck, ExportFormat format) {
    switch (format) {
    case ExportFormat::Json: return to_json(deck).dump(2) + "\n";
    case ExportFormat::Markdown: return to_markdown(deck);
    case ExportFormat::Html: return to_html(deck);
    }
    return {};
}

inline std::string_view content_type(ExportFormat f) {
    switch (f) {
    case ExportFormat::Json: return "application/json";
    case ExportFormat::Markdown: return "text/markdown; charset=utf-8";
    case ExportFormat::Html: return "text/html; charset=utf-8";
    }
    return "application/octet-stream";
}

} // namespace factdeck
