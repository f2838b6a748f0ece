#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "support.hpp"
#include "random_series.hpp"

using namespace factdeck;
using oracle::make_frame;

namespace {

std::vector<std::string> labels(const AnalysisFrame& f, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(f.series[i].label);
    return out;
}

AnalysisFrame named(std::vector<std::pair<std::string, double>> points, ColumnKind kind = ColumnKind::Nominal) {
    std::vector<double> values;
    for (auto& [l, v] : points) values.push_back(v);
    auto f = make_frame(values, kind, ChartType::Bar);
    for (std::size_t i = 0; i < points.size(); ++i) f.series[i].label = points[i].first;
    return f;
}

} // namespace

TEST_CASE("extreme picks max and min") {
    auto facts = detect_extreme(named({{"A", 3}, {"B", 7}, {"C", 5}}));
    REQUIRE(facts.size() == 2);
    CHECK(facts[0].focus == std::vector<std::string>{"B"});
    CHECK(facts[0].parameters.polarity == Polarity::Max);
    CHECK(facts[0].score.significance == Catch::Approx(0.5));
    CHECK(facts[1].focus == std::vector<std::string>{"A"});
    CHECK(facts[1].parameters.polarity == Polarity::Min);
    CHECK(detect_extreme(named({{"A", 2}, {"B", 2}})).empty());
    CHECK(detect_extreme(named({{"A", 2}})).empty());
}

TEST_CASE("extreme on the 2009 category chart") {
    auto w = support::scenario_bench();
    auto facts = detect_extreme(w.chart("c3").frame);
    REQUIRE(facts.size() == 2);
    CHECK(facts[0].focus[0] == "compact");
    CHECK(facts[1].focus[0] == "sporty");
}

TEST_CASE("outlier uses the plain three-sigma rule") {
    std::vector<double> v(30, 1.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.01 * static_cast<double>(i % 5);
    v.push_back(50);
    auto facts = detect_outlier(make_frame(v));
    REQUIRE(facts.size() == 1);
    CHECK(facts[0].focus[0] == "p030");
    CHECK(detect_outlier(make_frame({1, 1.1, 0.9, 1.05, 0.95, 5})).empty());
    CHECK(detect_outlier(make_frame({2, 2, 2, 2, 2})).empty());
    CHECK(detect_outlier(make_frame({1, 2, 100})).empty());
}

TEST_CASE("trend") {
    auto facts = detect_trend(make_frame({0, 2, 4, 6, 8}));
    REQUIRE(facts.size() == 1);
    CHECK(facts[0].parameters.direction == Direction::Increasing);
    CHECK(facts[0].score.significance == Catch::Approx(1.0));
    CHECK(*facts[0].parameters.slope == Catch::Approx(2.0));
    CHECK(facts[0].focus.size() == 5);
    CHECK(facts[0].id == "c/trend");
    CHECK(detect_trend(make_frame({3, 3, 3, 3})).empty());
    CHECK(detect_trend(make_frame({5, 4, 3})).at(0).parameters.direction == Direction::Decreasing);
    CHECK(detect_trend(make_frame({1, 2, 3}, ColumnKind::Nominal, ChartType::Bar)).empty());
}

TEST_CASE("turning point") {
    auto facts = detect_turning_point(make_frame({1, 3, 7, 4, 2}));
    REQUIRE(facts.size() == 1);
    CHECK(facts[0].focus[0] == "p002");
    CHECK(facts[0].score.significance == Catch::Approx(3.0 / 6.0));
    CHECK(detect_turning_point(make_frame({1, 2, 3, 4})).empty());
    auto w = support::scenario_bench();
    auto bmw = detect_turning_point(w.chart("c1").frame);
    REQUIRE(bmw.size() == 1);
    CHECK(bmw[0].focus[0] == "2009");
    CHECK(bmw[0].id == "c1/turning_point/2009");
}

TEST_CASE("difference worked example") {
    auto facts = detect_difference(make_frame({1, 5, 15, 14}));
    REQUIRE(facts.size() == 3);
    CHECK(*facts[0].parameters.ratio == Catch::Approx(4.0));
    CHECK(*facts[1].parameters.ratio == Catch::Approx(2.0));
    CHECK(*facts[2].parameters.ratio == Catch::Approx(-1.0 / 15.0));
    CHECK(facts[2].parameters.direction == Direction::Decreasing);
    CHECK(facts[0].score.significance == Catch::Approx(1.0));
    CHECK(facts[1].score.significance == Catch::Approx(0.49).margin(0.005));
    CHECK(facts[2].score.significance == Catch::Approx(0.0));
    CHECK(facts[1].focus == std::vector<std::string>{"p001", "p002"});
    CHECK(facts[1].id == "c/difference/p001~p002");

    auto two = detect_difference(make_frame({3, 6}));
    REQUIRE(two.size() == 1);
    CHECK(two[0].score.significance == 0.0);
    CHECK(detect_difference(make_frame({0, 6, 7})).size() == 1);
}

TEST_CASE("majority") {
    auto facts = detect_majority(named({{"A", 6}, {"B", 3}, {"C", 1}}));
    REQUIRE(facts.size() == 1);
    CHECK(facts[0].focus[0] == "A");
    CHECK(*facts[0].parameters.ratio == Catch::Approx(0.6));
    CHECK(detect_majority(named({{"A", 4}, {"B", 3.5}, {"C", 2.5}})).empty());
    CHECK(detect_majority(named({{"A", 6}, {"B", -1}})).empty());
}

TEST_CASE("detected facts carry complete parameters and valid focus") {
    auto rng = testing_rng(7);
    for (int t = 0; t < 200; ++t) {
        auto frame = make_frame(random_series(rng));
        for (const auto& f : detect_all(frame, MiningConfig{})) {
            CHECK(parameters_complete(f.fact_type, f.parameters));
            for (const auto& label : f.focus) CHECK(frame.find(label) != nullptr);
            if (auto card = focus_cardinality(f.fact_type)) CHECK(f.focus.size() == *card);
            else CHECK(f.focus.size() == frame.series.size());
            CHECK(f.score.significance >= 0.0);
            CHECK(f.score.significance <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("detectors agree with naive oracles on 500 random series") {
    auto rng = testing_rng(20240611);
    double worst = 0.0;
    auto diff = [&](double a, double b) {
        worst = std::max(worst, std::abs(a - b));
        return std::abs(a - b);
    };
    for (int t = 0; t < 500; ++t) {
        auto v = random_series(rng);
        auto frame = make_frame(v);
        INFO("series #" << t);

        auto ex = detect_extreme(frame);
        auto ex_o = oracle::extreme(v);
        REQUIRE(ex.size() == (ex_o ? 2u : 0u));
        if (ex_o) {
            CHECK(ex[0].focus == labels(frame, ex_o->first.focus));
            CHECK(ex[1].focus == labels(frame, ex_o->second.focus));
            CHECK(diff(ex[0].score.significance, ex_o->first.significance) < 1e-9);
            CHECK(diff(ex[1].score.significance, ex_o->second.significance) < 1e-9);
        }

        auto out = detect_outlier(frame);
        auto out_o = oracle::outliers(v);
        REQUIRE(out.size() == out_o.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i].focus == labels(frame, out_o[i].focus));
            CHECK(diff(out[i].score.significance, out_o[i].significance) < 1e-9);
        }

        auto tr = detect_trend(frame);
        auto tr_o = oracle::trend(v);
        REQUIRE(tr.size() == (tr_o ? 1u : 0u));
        if (tr_o) {
            CHECK(diff(tr[0].score.significance, tr_o->first) < 1e-9);
            CHECK(std::abs(*tr[0].parameters.slope - tr_o->second) < 1e-9 * std::max(1.0, std::abs(tr_o->second)));
        }

        auto tp = detect_turning_point(frame);
        auto tp_o = oracle::turning_point(v);
        REQUIRE(tp.size() == (tp_o ? 1u : 0u));
        if (tp_o) {
            CHECK(tp[0].focus == labels(frame, tp_o->focus));
            CHECK(diff(tp[0].score.significance, tp_o->significance) < 1e-9);
        }

        auto df = detect_difference(frame);
        auto df_o = oracle::differences(v);
        REQUIRE(df.size() == df_o.size());
        for (std::size_t i = 0; i < df.size(); ++i) {
            CHECK(df[i].focus == labels(frame, df_o[i].focus));
            CHECK(diff(df[i].score.significance, df_o[i].significance) < 1e-9);
        }

        auto mj = detect_majority(frame);
        auto mj_o = oracle::majority(v);
        REQUIRE(mj.size() == (mj_o ? 1u : 0u));
        if (mj_o) {
            CHECK(mj[0].focus == labels(frame, mj_o->focus));
            CHECK(diff(mj[0].score.significance, mj_o->significance) < 1e-9);
        }
    }
    CHECK(worst < 1e-9);
}
