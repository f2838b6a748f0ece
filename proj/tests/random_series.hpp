#pragma once
// Random series shared by the property tests and the acceptance binary.

#include <cstdint>
#include <random>
#include <vector>

#include "factdeck.hpp"

inline std::mt19937_64 testing_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Mixes shapes that exercise the edge cases: ties, constant runs, planted
/// outliers, near-linear trends and non-negative shares.
inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t min_len = 2, std::size_t max_len = 40) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<int> shape(0, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = len(rng);
    std::vector<double> v(n);
    switch (shape(rng)) {
    case 0: // uniform reals, may be negative
        for (auto& x : v) x = -50.0 + 100.0 * u(rng);
        break;
    case 1: // small integers, lots of ties
        for (auto& x : v) x = static_cast<double>(std::uniform_int_distribution<int>(0, 4)(rng));
        break;
    case 2: { // noisy line
        double slope = -5.0 + 10.0 * u(rng), noise = 20.0 * u(rng);
        for (std::size_t i = 0; i < n; ++i) v[i] = 10.0 + slope * static_cast<double>(i) + noise * (u(rng) - 0.5);
        break;
    }
    case 3: { // flat with a planted spike
        for (auto& x : v) x = 1.0 + 0.1 * u(rng);
        v[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 5.0 + 100.0 * u(rng);
        break;
    }
    case 4: // constant
        for (auto& x : v) x = 3.0;
        break;
    default: { // one dominant share
        for (auto& x : v) x = 10.0 * u(rng);
        v[0] += 100.0 * u(rng);
        break;
    }
    }
    return v;
}

/// A fact with random attributes drawn from small pools so that costs hit
/// every branch: equal and differing dimensions, nested and sibling filters,
/// overlapping focus sets and both chart-order directions.
inline factdeck::DataFact random_fact(std::mt19937_64& rng, std::size_t serial) {
    using namespace factdeck;
    static const std::vector<std::string> dims = {"Year", "Category", "Model"};
    static const std::vector<std::string> labels = {"a", "b", "c", "d", "e"};
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    DataFact f;
    f.dimension = dims[pick(dims.size())];
    f.measure = pick(3) == 0 ? MeasureRef{"Price", Aggregate::Mean} : MeasureRef{"Sales", Aggregate::Sum};
    if (pick(2)) f.subspace.push_back({"Brand", PredicateOp::Eq, {std::string(pick(2) ? "BMW" : "Audi")}});
    if (pick(3) == 0) f.subspace.push_back({"Year", PredicateOp::Eq, {2009.0}});
    f.fact_type = kAllFactTypes[pick(kAllFactTypes.size())];
    std::size_t focus_n = 1 + pick(3);
    for (std::size_t i = 0; i < focus_n; ++i) f.focus.push_back(labels[pick(labels.size())]);
    f.chart_index = pick(5);
    f.chart_id = "c" + std::to_string(f.chart_index + 1);
    f.id = "f" + std::to_string(serial);
    return f;
}
