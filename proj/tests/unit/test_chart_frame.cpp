#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace factdeck;

namespace {

const Dataset& cars() {
    static const Dataset ds = support::cars();
    return ds;
}

ChartSpec parse(const char* text, std::string id = "t") { return parse_chart_spec(json::parse(text), cars(), std::move(id)); }

} // namespace

TEST_CASE("chart spec parsing resolves measure and dimension") {
    auto spec = parse(R"({"mark":"line","encoding":{"x":{"field":"Year"},"y":{"field":"Sales","aggregate":"sum"}}})");
    CHECK(spec.chart_type == ChartType::Line);
    auto roles = chart_roles(spec, cars());
    CHECK(roles.dimension == "Year");
    CHECK(roles.measure == MeasureRef{"Sales", Aggregate::Sum});

    auto pie = parse(R"({"mark":{"type":"arc"},"encoding":{"theta":{"field":"Sales","aggregate":"sum"},"color":"Category"}})");
    auto pie_roles = chart_roles(pie, cars());
    CHECK(pie_roles.dimension == "Category");
    CHECK(pie_roles.measure.column == "Sales");

    auto horizontal = parse(R"({"mark":"bar","encoding":{"y":"Model","x":{"field":"Sales","aggregate":"mean"}}})");
    CHECK(chart_roles(horizontal, cars()).dimension == "Model");
}

TEST_CASE("chart spec errors") {
    auto code = [](const char* text) {
        try {
            parse(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::MalformedInput;
    };
    CHECK(code(R"({"mark":"heatmap","encoding":{"x":"Year","y":"Sales"}})") == ErrorCode::UnsupportedChartType);
    CHECK(code(R"({"mark":"bar","encoding":{"x":"Nope","y":"Sales"}})") == ErrorCode::UnknownColumn);
    CHECK(code(R"({"mark":"bar","encoding":{"x":"Brand","y":"Model"}})") == ErrorCode::MissingMeasure);
    CHECK(code(R"({"mark":"bar","encoding":{"x":"Brand","y":{"field":"Model","aggregate":"sum"}}})") ==
          ErrorCode::InvalidSpec);
    CHECK(code(R"({"mark":"bar","encoding":{"x":"Brand","y":"Sales"},"transform":{"filter":{"field":"Sales","value":"x"}}})") ==
          ErrorCode::InvalidSpec);
}

TEST_CASE("chart spec json round-trips") {
    for (const auto& f : support::chart_files()) {
        auto spec = parse_chart_spec(support::read_json(support::fixture(f)), cars(), "x", 4);
        CHECK(chart_spec_from_json(to_json(spec)) == spec);
        CHECK(parse_chart_spec(to_json(spec), cars()) == spec);
    }
}

TEST_CASE("frame extraction aggregates the filtered rows") {
    auto spec = parse_chart_spec(support::read_json(support::fixture("cars/c1_bmw_sales_by_year.json")), cars());
    auto frame = extract_frame(spec, cars());
    REQUIRE(frame.series.size() == 5);
    std::vector<double> values;
    for (const auto& p : frame.series) values.push_back(p.value);
    CHECK(values == std::vector<double>{1200, 1350, 1100, 1500, 1700});
    CHECK(frame.series.front().label == "2007");
    CHECK(frame.series.front().rows == 5);
    CHECK(frame.subspace_row_count == 25);
    CHECK(frame.dataset_row_count == 65);
    CHECK(frame.ordered());
}

TEST_CASE("nominal frames sort by value descending") {
    auto frame = extract_frame(parse_chart_spec(support::read_json(support::fixture("cars/c3_sales_by_category_2009.json")), cars()),
                               cars());
    REQUIRE(frame.series.size() == 4);
    CHECK(frame.series.front().label == "compact");
    CHECK(frame.series.front().value == 1310);
    CHECK(frame.series.back().label == "sporty");
    CHECK(frame.series.back().value == 180);
}

TEST_CASE("aggregates") {
    auto value_of = [](const char* agg) {
        std::string text = std::string(R"({"mark":"bar","encoding":{"x":"Model","y":{"field":"Sales","aggregate":")") + agg +
                           R"("}},"transform":{"filter":{"field":"Model","value":"X3"}}})";
        return extract_frame(parse(text.c_str()), cars()).series.at(0).value;
    };
    CHECK(value_of("sum") == 1220);
    CHECK(value_of("mean") == 244);
    CHECK(value_of("count") == 5);
    CHECK(value_of("min") == 80);
    CHECK(value_of("max") == 350);
}

TEST_CASE("filter operators") {
    auto rows = [](const char* filter) {
        std::string text = std::string(R"({"mark":"bar","encoding":{"x":"Brand","y":"Sales"},"transform":{"filter":)") +
                           filter + "}}";
        return extract_frame(parse(text.c_str()), cars()).subspace_row_count;
    };
    CHECK(rows(R"({"field":"Brand","op":"neq","value":"BMW"})") == 40);
    CHECK(rows(R"({"field":"Sales","op":"gt","value":400})") == 7);
    CHECK(rows(R"({"field":"Sales","op":">=","value":400})") == 11);
    CHECK(rows(R"({"field":"Year","op":"lt","value":"2009"})") == 26);
    CHECK(rows(R"({"field":"Model","op":"in","values":["X3","Z4"]})") == 10);
    CHECK(rows(R"([{"field":"Brand","value":"BMW"},{"field":"Year","value":2009}])") == 5);
}

TEST_CASE("empty subspace is reported") {
    try {
        extract_frame(parse(R"({"mark":"bar","encoding":{"x":"Brand","y":"Sales"},"transform":{"filter":{"field":"Brand","value":"Kia"}}})"),
                      cars());
        FAIL("expected EmptySubspace");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptySubspace);
    }
}

TEST_CASE("frame json round-trips") {
    for (const auto& f : support::chart_files()) {
        auto frame = extract_frame(parse_chart_spec(support::read_json(support::fixture(f)), cars(), "c"), cars());
        CHECK(frame_from_json(to_json(frame)) == frame);
    }
}
