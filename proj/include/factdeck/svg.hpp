#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "factdeck/chart_spec.hpp"
#include "factdeck/illustration.hpp"
#include "factdeck/util.hpp"

namespace factdeck {

/// The data a rendered chart needs: the chart's series plus axis labels.
struct ChartData {
    ChartType chart_type = ChartType::Bar;
    std::string measure;   ///< display label, e.g. "Mean of Sales"
    std::string dimension;
    std::vector<std::string> labels;
    std::vector<double> values;

    bool operator==(const ChartData&) const = default;
};

inline std::string escape_xml(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&#39;"; break;
        default: out += c;
        }
    }
    return out;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

struct Plot {
    double width = 480, height = 300, left = 56, right = 16, top = 20, bottom = 48;
    double lo = 0, hi = 1;
    std::size_t n = 0;

    [[nodiscard]] double inner_w() const { return width - left - right; }
    [[nodiscard]] double inner_h() const { return height - top - bottom; }
    [[nodiscard]] double band() const { return inner_w() / static_cast<double>(std::max<std::size_t>(n, 1)); }
    [[nodiscard]] double x(double i) const { return left + band() * (i + 0.5); }
    [[nodiscard]] double y(double v) const { return top + inner_h() * (hi - v) / (hi - lo); }
};

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace detail

/// Draws the chart and its annotation layers as a standalone SVG element.
inline std::string render_svg(const ChartData& data, const std::vector<AnnotationLayer>& annotations) {
    using detail::fmt;
    const std::string base_color = "#4c78a8";
    const std::size_t n = data.labels.size();
    std::vector<std::string> highlighted;
    std::string accent = AnnotationStyle{}.color;
    bool dim = false;
    for (const auto& a : annotations) {
        if (a.kind == AnnotationKind::TrendLine) continue;
        highlighted.insert(highlighted.end(), a.targets.begin(), a.targets.end());
        accent = a.style.color;
        dim = dim || a.style.dim_others;
    }
    auto fill_for = [&](std::size_t i) { return detail::contains(highlighted, data.labels[i]) ? accent : base_color; };
    auto opacity_for = [&](std::size_t i) {
        return dim && !detail::contains(highlighted, data.labels[i]) ? "0.35" : "1";
    };

    detail::Plot plot;
    plot.n = n;
    plot.lo = 0.0;
    plot.hi = 0.0;
    for (double v : data.values) {
        plot.lo = std::min(plot.lo, v);
        plot.hi = std::max(plot.hi, v);
    }
    for (const auto& a : annotations) {
        if (a.kind != AnnotationKind::TrendLine || !a.slope || !a.intercept || n == 0) continue;
        for (double end : {0.0, static_cast<double>(n - 1)}) {
            double v = *a.intercept + *a.slope * end;
            plot.lo = std::min(plot.lo, v);
            plot.hi = std::max(plot.hi, v);
        }
    }
    if (plot.hi == plot.lo) plot.hi = plot.lo + 1.0;
    plot.hi += (plot.hi - plot.lo) * 0.08;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
        << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" "
           "orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\""
        << accent << "\"/></marker></defs>\n";

    // Centre of each mark, used to anchor pair links.
    std::vector<std::pair<double, double>> anchor(n);

    if (data.chart_type == ChartType::Arc) {
        double total = 0.0;
        for (double v : data.values) total += std::abs(v);
        const double cx = plot.width / 2, cy = plot.height / 2, r = std::min(plot.width, plot.height) / 2 - 24;
        double angle = -std::numbers::pi / 2;
        for (std::size_t i = 0; i < n; ++i) {
            double share = total > 0 ? std::abs(data.values[i]) / total : 1.0 / static_cast<double>(n);
            double sweep = share * 2 * std::numbers::pi;
            double a0 = angle, a1 = angle + sweep, mid = angle + sweep / 2;
            angle = a1;
            anchor[i] = {cx + r * 0.6 * std::cos(mid), cy + r * 0.6 * std::sin(mid)};
            svg << "<path class=\"mark\" data-label=\"" << escape_xml(data.labels[i]) << "\" d=\"";
            if (share >= 1.0 - 1e-12) {
                svg << "M" << fmt(cx - r) << ',' << fmt(cy) << " a" << fmt(r) << ',' << fmt(r) << " 0 1,0 " << fmt(2 * r)
                    << ",0 a" << fmt(r) << ',' << fmt(r) << " 0 1,0 " << fmt(-2 * r) << ",0";
            } else {
                svg << "M" << fmt(cx) << ',' << fmt(cy) << " L" << fmt(cx + r * std::cos(a0)) << ','
                    << fmt(cy + r * std::sin(a0)) << " A" << fmt(r) << ',' << fmt(r) << " 0 "
                    << (sweep > std::numbers::pi ? 1 : 0) << ",1 " << fmt(cx + r * std::cos(a1)) << ','
                    << fmt(cy + r * std::sin(a1)) << " Z";
            }
            svg << "\" fill=\"" << fill_for(i) << "\" fill-opacity=\"" << opacity_for(i)
                << "\" stroke=\"white\"/>\n";
            svg << "<text x=\"" << fmt(cx + (r + 12) * std::cos(mid)) << "\" y=\"" << fmt(cy + (r + 12) * std::sin(mid))
                << "\" text-anchor=\"middle\">" << escape_xml(data.labels[i]) << "</text>\n";
        }
    } else {
        // Axes.
        svg << "<line x1=\"" << plot.left << "\" y1=\"" << fmt(plot.y(0)) << "\" x2=\"" << plot.width - plot.right
            << "\" y2=\"" << fmt(plot.y(0)) << "\" stroke=\"#888\"/>\n";
        svg << "<line x1=\"" << plot.left << "\" y1=\"" << plot.top << "\" x2=\"" << plot.left << "\" y2=\""
            << plot.height - plot.bottom << "\" stroke=\"#888\"/>\n";
        svg << "<text x=\"" << plot.left - 6 << "\" y=\"" << fmt(plot.y(plot.hi) + 8) << "\" text-anchor=\"end\">"
            << escape_xml(format_number(std::round(plot.hi * 100) / 100)) << "</text>\n";
        svg << "<text x=\"" << plot.left - 6 << "\" y=\"" << fmt(plot.y(plot.lo)) << "\" text-anchor=\"end\">"
            << escape_xml(format_number(std::round(plot.lo * 100) / 100)) << "</text>\n";
        svg << "<text x=\"" << fmt(plot.left + plot.inner_w() / 2) << "\" y=\"" << plot.height - 6
            << "\" text-anchor=\"middle\">" << escape_xml(data.dimension) << "</text>\n";
        svg << "<text x=\"12\" y=\"" << fmt(plot.top + plot.inner_h() / 2) << "\" transform=\"rotate(-90 12 "
            << fmt(plot.top + plot.inner_h() / 2) << ")\" text-anchor=\"middle\">" << escape_xml(data.measure)
            << "</text>\n";
        for (std::size_t i = 0; i < n; ++i)
            svg << "<text x=\"" << fmt(plot.x(static_cast<double>(i))) << "\" y=\"" << plot.height - plot.bottom + 14
                << "\" text-anchor=\"middle\">" << escape_xml(data.labels[i]) << "</text>\n";

        if (data.chart_type == ChartType::Line || data.chart_type == ChartType::Area) {
            std::string pts;
            for (std::size_t i = 0; i < n; ++i)
                pts += fmt(plot.x(static_cast<double>(i))) + "," + fmt(plot.y(data.values[i])) + " ";
            if (data.chart_type == ChartType::Area && n > 0) {
                std::string area = fmt(plot.x(0)) + "," + fmt(plot.y(0)) + " " + pts +
                                   fmt(plot.x(static_cast<double>(n - 1))) + "," + fmt(plot.y(0));
                svg << "<polygon points=\"" << area << "\" fill=\"" << base_color << "\" fill-opacity=\"0.3\"/>\n";
            }
            svg << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << base_color
                << "\" stroke-width=\"2\"/>\n";
        }
        for (std::size_t i = 0; i < n; ++i) {
            double x = plot.x(static_cast<double>(i)), y = plot.y(data.values[i]);
            anchor[i] = {x, y};
            if (data.chart_type == ChartType::Bar) {
                double w = plot.band() * 0.7;
                double y0 = std::min(y, plot.y(0)), h = std::abs(plot.y(0) - y);
                svg << "<rect class=\"mark\" data-label=\"" << escape_xml(data.labels[i]) << "\" x=\"" << fmt(x - w / 2)
                    << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\""
                    << fill_for(i) << "\" fill-opacity=\"" << opacity_for(i) << "\"/>\n";
            } else {
                bool hit = detail::contains(highlighted, data.labels[i]);
                svg << "<circle class=\"mark\" data-label=\"" << escape_xml(data.labels[i]) << "\" cx=\"" << fmt(x)
                    << "\" cy=\"" << fmt(y) << "\" r=\"" << (hit ? 6 : 4) << "\" fill=\"" << fill_for(i)
                    << "\" fill-opacity=\"" << opacity_for(i) << "\"/>\n";
            }
        }
    }

    auto index_of = [&](const std::string& label) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < n; ++i)
            if (data.labels[i] == label) return i;
        return std::nullopt;
    };
    for (const auto& a : annotations) {
        switch (a.kind) {
        case AnnotationKind::PointHighlight:
            break; // drawn through the mark colours
        case AnnotationKind::PairLinkWithArrows: {
            if (a.targets.size() != 2) break;
            auto i = index_of(a.targets[0]), j = index_of(a.targets[1]);
            if (!i || !j) break;
            auto [x1, y1] = anchor[*i];
            auto [x2, y2] = anchor[*j];
            double lift = data.chart_type == ChartType::Arc ? 0.0 : 12.0;
            svg << "<line class=\"annotation pair-link\" x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1 - lift) << "\" x2=\""
                << fmt(x2) << "\" y2=\"" << fmt(y2 - lift) << "\" stroke=\"" << a.style.color
                << "\" stroke-width=\"2\" marker-end=\"url(#arrow)\"/>\n";
            break;
        }
        case AnnotationKind::TrendLine: {
            if (!a.slope || !a.intercept || n == 0) break;
            if (data.chart_type == ChartType::Arc) {
                // No positional axis on a pie; state the direction instead.
                svg << "<text class=\"annotation trend-line\" x=\"8\" y=\"16\" fill=\"" << a.style.color << "\">"
                    << (*a.slope >= 0 ? "trend: increasing" : "trend: decreasing") << "</text>\n";
                break;
            }
            double last = static_cast<double>(n - 1);
            svg << "<line class=\"annotation trend-line\" x1=\"" << fmt(plot.x(0)) << "\" y1=\""
                << fmt(plot.y(*a.intercept)) << "\" x2=\"" << fmt(plot.x(last)) << "\" y2=\""
                << fmt(plot.y(*a.intercept + *a.slope * last)) << "\" stroke=\"" << a.style.color
                << "\" stroke-width=\"2\" stroke-dasharray=\"6 4\" marker-end=\"url(#arrow)\"/>\n";
            break;
        }
        }
    }
    svg << "</svg>";
    return svg.str();
}

} // namespace factdeck
