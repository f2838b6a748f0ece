// factdeck: mine, organize, export and serve data stories from the command line.
//
// Exit codes: 0 success, 2 invalid input, 1 internal error.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "factdeck.hpp"
#include "factdeck/service.hpp"

namespace fs = std::filesystem;
using factdeck::Error;
using factdeck::ErrorCode;
using factdeck::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MalformedInput, "cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const std::string& path) {
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::MalformedInput, "'" + path + "' is not valid JSON");
    return doc;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::MalformedInput, "cannot write '" + path + "'");
    out << text;
}

struct Common {
    std::string data;
    std::string schema;
    std::vector<std::string> charts;
    std::string config;
    std::size_t k = 0;
    std::string weights;
    bool include_subspace = false;
    std::string output;
};

factdeck::Config load_config(const Common& c) {
    factdeck::Config cfg;
    if (!c.config.empty()) cfg = factdeck::config_from_json(read_json(c.config));
    json overlay = json::object();
    if (c.k > 0) overlay["k"] = c.k;
    if (!c.weights.empty()) {
        json triple = json::array();
        std::stringstream ss(c.weights);
        for (std::string part; std::getline(ss, part, ',');) {
            auto v = factdeck::parse_number(part);
            if (!v) throw Error(ErrorCode::InvalidConfig, "weights must be three numbers separated by commas");
            triple.push_back(*v);
        }
        overlay["weights"] = triple;
    }
    return factdeck::config_from_json(overlay, cfg);
}

factdeck::Workbench load_workbench(const Common& c) {
    factdeck::Workbench w;
    w.config = load_config(c);
    w.include_subspace = c.include_subspace;
    factdeck::Schema schema;
    if (!c.schema.empty()) schema = factdeck::parse_schema(read_json(c.schema));
    auto ext = fs::path(c.data).extension().string();
    auto format = ext == ".json" ? factdeck::DataFormat::JsonRecords : factdeck::DataFormat::Csv;
    w.add_dataset(factdeck::load_dataset(read_file(c.data), format, schema));
    return w;
}

void add_common(CLI::App* cmd, Common& c, bool needs_charts) {
    cmd->add_option("-d,--data", c.data, "Dataset file (.csv or .json records)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--schema", c.schema, "Column-kind sidecar {column: kind}")->check(CLI::ExistingFile);
    auto* charts = cmd->add_option("-c,--chart", c.charts, "Chart spec file; repeat in creation order")
                       ->check(CLI::ExistingFile);
    if (needs_charts) charts->required();
    cmd->add_option("--config", c.config, "Config JSON")->check(CLI::ExistingFile);
    cmd->add_option("-k,--k", c.k, "Facts kept per chart")->check(CLI::PositiveNumber);
    cmd->add_option("--weights", c.weights, "Score weights: significance,impact,suitability");
    cmd->add_flag("--include-subspace", c.include_subspace, "Prefix descriptions with the chart filters");
    cmd->add_option("-o,--output", c.output, "Output file (default stdout)");
}

factdeck::Service* g_service = nullptr;

void on_signal(int) {
    if (g_service) g_service->stop();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mine data facts from charts, organize them into a story and export slides."};
    app.require_subcommand(1);

    Common mine_opts;
    auto* mine = app.add_subcommand("mine", "Print the ranked illustrated facts of each chart as JSON");
    add_common(mine, mine_opts, true);

    Common org_opts;
    std::string selection;
    auto* organize = app.add_subcommand("organize", "Build the organized story JSON from a selection file");
    add_common(organize, org_opts, true);
    organize->add_option("-s,--selection", selection, "Selection file: {facts: [...], steps: [...]}")
        ->required()
        ->check(CLI::ExistingFile);

    std::string story_path, format = "json", export_out, generated_at;
    auto* exp = app.add_subcommand("export", "Render a story JSON as a slide deck");
    exp->add_option("story", story_path, "Story JSON written by organize")->required()->check(CLI::ExistingFile);
    exp->add_option("-f,--format", format, "json, markdown or html")->check(CLI::IsMember({"json", "markdown", "md", "html"}));
    exp->add_option("-o,--output", export_out, "Output file (default stdout)");
    exp->add_option("--generated-at", generated_at, "Timestamp recorded in the deck (default: now, UTC)");

    int port = 8080;
    std::string host = "127.0.0.1", session_dir, serve_config;
    auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
    serve->add_option("-p,--port", port, "Port (0 picks a free one)")->envname("FACTDECK_PORT");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--session-dir", session_dir, "Directory for session files")->envname("FACTDECK_SESSION_DIR");
    serve->add_option("--config", serve_config, "Default config for new sessions")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*mine) {
            factdeck::Workbench w = load_workbench(mine_opts);
            json charts = json::array();
            for (const auto& path : mine_opts.charts) {
                auto added = w.add_chart(read_json(path));
                charts.push_back(factdeck::facts_payload(w.chart(added.chart_id).spec, added.facts));
            }
            write_output(mine_opts.output,
                         json{{"dataset_id", w.dataset_order.front()}, {"charts", std::move(charts)}}.dump(2) + "\n");
        } else if (*organize) {
            factdeck::Workbench w = load_workbench(org_opts);
            for (const auto& path : org_opts.charts) w.add_chart(read_json(path));
            factdeck::apply_selection(w, read_json(selection));
            write_output(org_opts.output, factdeck::to_json(w.document()).dump(2) + "\n");
        } else if (*exp) {
            auto doc = factdeck::story_document_from_json(read_json(story_path));
            auto deck = factdeck::render_deck(doc, generated_at.empty() ? factdeck::utc_timestamp() : generated_at);
            write_output(export_out, factdeck::export_deck(deck, *factdeck::export_format_from_string(format)));
        } else if (*serve) {
            factdeck::Config defaults;
            if (!serve_config.empty()) defaults = factdeck::config_from_json(read_json(serve_config));
            std::optional<fs::path> dir;
            if (!session_dir.empty()) dir = session_dir;
            factdeck::SessionStore store(dir, defaults);
            factdeck::Service service(store);
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            if (service.bind(host, port) < 0) {
                std::cerr << "factdeck: cannot listen on " << host << ":" << port << "\n";
                return 1;
            }
            std::cerr << "factdeck: listening on http://" << host << ":" << service.port() << std::endl;
            if (!service.run()) return 1;
        }
    } catch (const Error& e) {
        std::cerr << "factdeck: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "factdeck: internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
