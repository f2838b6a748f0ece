#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "factdeck.hpp"

namespace support {

inline std::string fixture(const std::string& rel) { return std::string(FACTDECK_FIXTURES) + "/" + rel; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline factdeck::json read_json(const std::string& path) { return factdeck::json::parse(read_file(path)); }

inline factdeck::Dataset cars() {
    return factdeck::load_dataset(read_file(fixture("cars/car_sales.csv")), factdeck::DataFormat::Csv,
                                 factdeck::parse_schema(read_json(fixture("cars/car_sales.schema.json"))));
}

inline const std::vector<std::string>& chart_files() {
    static const std::vector<std::string> files = {
        "cars/c1_bmw_sales_by_year.json", "cars/c2_all_sales_by_year.json", "cars/c3_sales_by_category_2009.json",
        "cars/c4_bmw_models_2009.json", "cars/c5_bmw_models_mean.json"};
    return files;
}

/// A workbench with the car dataset and the five scenario charts mined.
inline factdeck::Workbench scenario_bench(bool include_subspace = false) {
    factdeck::Workbench w;
    w.include_subspace = include_subspace;
    w.add_dataset(cars());
    for (const auto& f : chart_files()) w.add_chart(read_json(fixture(f)));
    return w;
}

/// The car-sales scenario replayed in process: mine, select, arrange.
inline factdeck::Workbench scenario_story(bool include_subspace = true) {
    auto w = scenario_bench(include_subspace);
    factdeck::apply_selection(w, read_json(fixture("cars/scenario_selection.json")));
    return w;
}

/// Every mined fact of the workbench, selected or not.
inline factdeck::FactIndex all_facts(const factdeck::Workbench& w) {
    factdeck::FactIndex index;
    for (const auto& [id, ill] : w.facts) index.emplace(id, ill.fact);
    return index;
}

} // namespace support
