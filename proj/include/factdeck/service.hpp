#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <optional>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "factdeck/deck.hpp"
#include "factdeck/error.hpp"
#include "factdeck/schemas.hpp"
#include "factdeck/session.hpp"
#include "factdeck/workbench.hpp"

namespace factdeck {

inline std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Organization-panel view of the story.
inline json story_outline(const Workbench& w, std::uint64_t revision) {
    json slides = json::array();
    for (const auto& s : w.story.slides) {
        json facts = json::array();
        for (const auto& id : s.fact_ids) {
            const IllustratedFact& f = w.fact(id);
            facts.push_back({{"id", id},
                             {"chart_id", f.fact.chart_id},
                             {"glyph", std::string(to_string(f.fact.chart_type))},
                             {"fact_type", std::string(to_string(f.fact.fact_type))},
                             {"description", f.description}});
        }
        slides.push_back({{"id", s.id},
                          {"title", s.title},
                          {"title_user_edited", s.title_user_edited},
                          {"pinned", s.pinned},
                          {"facts", std::move(facts)}});
    }
    return {{"revision", revision}, {"fact_count", w.story.fact_count()}, {"slides", std::move(slides)}};
}

/// HTTP/JSON front end over a SessionStore.
class Service {
public:
    explicit Service(SessionStore& store) : store_(store) { routes(); }

    httplib::Server& server() { return server_; }

    /// Binds and serves until `stop()`. Port 0 picks a free port; see `port()`.
    bool listen(const std::string& host, int port) { return bind(host, port) >= 0 && run(); }

    /// Binds without serving yet. Returns the bound port or -1.
    int bind(const std::string& host, int port) {
        port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        return port_;
    }

    /// Serves on the bound socket until `stop()`.
    bool run() { return server_.listen_after_bind(); }

    [[nodiscard]] int port() const { return port_; }
    void stop() { server_.stop(); }
    void wait_until_ready() const { server_.wait_until_ready(); }

    /// Stamp used for deck metadata; the clock when unset.
    void set_clock(std::function<std::string()> clock) { clock_ = std::move(clock); }

private:
    using Req = httplib::Request;
    using Res = httplib::Response;

    static void send_json(Res& res, const json& body, int status = 200) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
        if (body.is_object() && body.contains("revision")) res.set_header("ETag", "\"" + body["revision"].dump() + "\"");
    }

    static void send_error(Res& res, ErrorCode code, const std::string& message) {
        send_json(res, {{"error", {{"code", std::string(to_string(code))}, {"message", message}}}}, http_status(code));
    }

    static json body_json(const Req& req) {
        json doc = json::parse(req.body, nullptr, false);
        if (doc.is_discarded()) throw Error(ErrorCode::MalformedInput, "request body is not valid JSON");
        return doc;
    }

    static std::optional<std::uint64_t> if_match(const Req& req) {
        if (!req.has_header("If-Match")) return std::nullopt;
        std::string v = req.get_header_value("If-Match");
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        if (v == "*") return std::nullopt;
        if (v.empty() || !detail::all_digits(v)) throw Error(ErrorCode::MalformedInput, "If-Match must be a revision number");
        return std::stoull(v);
    }

    template <typename Fn>
    auto guarded(Fn fn) {
        return [fn = std::move(fn)](const Req& req, Res& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                send_error(res, e.code(), e.what());
            } catch (const json::exception& e) {
                send_error(res, ErrorCode::MalformedInput, e.what());
            } catch (const std::exception& e) {
                res.status = 500;
                res.set_content(json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump(), "application/json");
            }
        };
    }

    void routes() {
        const std::string sid = "/sessions/([A-Za-z0-9_-]+)";

        server_.Get("/schemas", guarded([](const Req&, Res& res) { send_json(res, api_schemas()); }));
        server_.Get("/schemas/([a-z_]+)", guarded([](const Req& req, Res& res) {
            const auto& all = api_schemas();
            auto it = all.find(req.matches[1].str());
            if (it == all.end()) throw Error(ErrorCode::UnknownId, "unknown schema '" + req.matches[1].str() + "'");
            send_json(res, *it);
        }));

        server_.Post("/sessions", guarded([this](const Req& req, Res& res) {
            std::optional<Config> cfg;
            bool subspace = false;
            if (!req.body.empty()) {
                json doc = body_json(req);
                if (doc.contains("config")) cfg = config_from_json(doc["config"]);
                subspace = doc.value("include_subspace", false);
            }
            std::string id = store_.create(cfg, subspace);
            send_json(res, {{"session_id", id}, {"revision", 0}}, 201);
        }));

        server_.Get(sid, guarded([this](const Req& req, Res& res) {
            send_json(res, store_.read(req.matches[1].str(), [](const Session& s) {
                json charts = json::array();
                for (const auto& [id, c] : s.bench.charts) charts.push_back(to_json(c.spec));
                return json{{"session_id", s.id},
                            {"revision", s.revision},
                            {"datasets", s.bench.dataset_order},
                            {"charts", std::move(charts)},
                            {"selected", s.bench.selected}};
            }));
        }));

        server_.Post(sid + "/datasets", guarded([this](const Req& req, Res& res) {
            Schema schema;
            std::string id;
            DataFormat format = DataFormat::Csv;
            std::string data = req.body;
            std::string type = req.get_header_value("Content-Type");
            if (req.has_param("format")) format = req.get_param_value("format") == "json" ? DataFormat::JsonRecords : DataFormat::Csv;
            else if (type.find("json") != std::string::npos) format = DataFormat::JsonRecords;
            if (format == DataFormat::JsonRecords) {
                json doc = body_json(req);
                if (doc.is_object()) {
                    // Wrapped upload: {data, format?, schema?, id?}
                    if (doc.contains("schema")) schema = parse_schema(doc["schema"]);
                    id = doc.value("id", std::string{});
                    format = doc.value("format", std::string("json")) == "csv" ? DataFormat::Csv : DataFormat::JsonRecords;
                    const json& d = doc.at("data");
                    if (d.is_string()) data = d.get<std::string>();
                    else data = nlohmann::ordered_json::parse(req.body).at("data").dump(); // keep column order
                }
            }
            Dataset ds = load_dataset(data, format, schema, id);
            json columns = json::array();
            for (const auto& c : ds.columns()) columns.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
            std::size_t rows = ds.row_count();
            auto [ds_id, rev] = store_.mutate(req.matches[1].str(), if_match(req),
                                              [&](Workbench& w) { return w.add_dataset(std::move(ds)); });
            send_json(res, {{"dataset_id", ds_id}, {"columns", columns}, {"row_count", rows}, {"revision", rev}}, 201);
        }));

        server_.Post(sid + "/charts", guarded([this](const Req& req, Res& res) {
            json doc = body_json(req);
            auto [payload, rev] = store_.mutate(req.matches[1].str(), if_match(req), [&](Workbench& w) {
                std::string id = doc.is_object() ? doc.value("id", std::string{}) : std::string{};
                auto added = w.add_chart(doc, std::nullopt, id);
                return facts_payload(w.chart(added.chart_id).spec, added.facts);
            });
            payload["revision"] = rev;
            send_json(res, payload, 201);
        }));

        server_.Get(sid + "/facts", guarded([this](const Req& req, Res& res) {
            std::string chart = req.has_param("chart") ? req.get_param_value("chart") : "";
            send_json(res, store_.read(req.matches[1].str(), [&](const Session& s) {
                json arr = json::array();
                for (const auto& [id, f] : s.bench.facts)
                    if (chart.empty() || f.fact.chart_id == chart) arr.push_back(to_json(f));
                return json{{"facts", std::move(arr)}, {"revision", s.revision}};
            }));
        }));

        server_.Post(sid + "/facts", guarded([this](const Req& req, Res& res) {
            json doc = body_json(req);
            if (!doc.is_object()) throw Error(ErrorCode::InvalidSpec, "custom fact must be an object");
            auto type = fact_type_from_string(doc.at("fact_type").get<std::string>());
            if (!type) throw Error(ErrorCode::InvalidSpec, "unknown fact type");
            std::vector<std::string> focus;
            if (doc.contains("focus"))
                focus = doc["focus"].is_string() ? std::vector{doc["focus"].get<std::string>()}
                                                 : doc["focus"].get<std::vector<std::string>>();
            std::optional<std::string> text;
            if (doc.contains("description")) text = doc["description"].get<std::string>();
            std::string chart = doc.at("chart").get<std::string>();
            auto [fact, rev] = store_.mutate(req.matches[1].str(), if_match(req), [&](Workbench& w) {
                return to_json(w.add_custom_fact(chart, *type, focus, text));
            });
            send_json(res, {{"fact", fact}, {"revision", rev}}, 201);
        }));

        server_.Patch(sid + "/facts/(.+)", guarded([this](const Req& req, Res& res) {
            json doc = body_json(req);
            auto [fact, rev] = store_.mutate(req.matches[1].str(), if_match(req), [&](Workbench& w) {
                return to_json(w.patch_fact(req.matches[2].str(), doc));
            });
            send_json(res, {{"fact", fact}, {"revision", rev}});
        }));

        server_.Get(sid + "/story", guarded([this](const Req& req, Res& res) {
            send_json(res, store_.read(req.matches[1].str(),
                                       [](const Session& s) { return story_outline(s.bench, s.revision); }));
        }));

        auto story_mutation = [this](auto op) {
            return guarded([this, op](const Req& req, Res& res) {
                auto rev = store_.mutate(req.matches[1].str(), if_match(req), [&](Workbench& w) { op(req, w); });
                send_json(res, store_.read(req.matches[1].str(), [&](const Session& s) {
                    // A later writer may already have moved on; report what this call committed.
                    json out = story_outline(s.bench, s.revision);
                    out["revision"] = rev;
                    return out;
                }));
            });
        };

        server_.Put(sid + "/story/facts/(.+)",
                    story_mutation([](const Req& req, Workbench& w) { w.select(req.matches[2].str()); }));
        server_.Delete(sid + "/story/facts/(.+)",
                       story_mutation([](const Req& req, Workbench& w) { w.deselect(req.matches[2].str()); }));
        server_.Post(sid + "/story/moves", story_mutation([](const Req& req, Workbench& w) {
                         json doc = body_json(req);
                         if (doc.is_object() && doc.contains("ops")) {
                             // Several edits commit together or not at all.
                             Story before = w.story;
                             try {
                                 for (const auto& op : doc["ops"]) w.apply_move(op);
                             } catch (...) {
                                 w.story = std::move(before);
                                 throw;
                             }
                         } else {
                             w.apply_move(doc);
                         }
                     }));
        server_.Patch(sid + "/story/slides/([A-Za-z0-9_-]+)/title", story_mutation([](const Req& req, Workbench& w) {
                          json doc = body_json(req);
                          if (!doc.is_object() || !doc.contains("title") || !doc["title"].is_string())
                              throw Error(ErrorCode::InvalidSpec, "body must be {\"title\": string}");
                          w.set_title(req.matches[2].str(), doc["title"].get<std::string>());
                      }));

        auto export_handler = guarded([this](const Req& req, Res& res) {
            std::string name = req.has_param("format") ? req.get_param_value("format") : "json";
            auto format = export_format_from_string(name);
            if (!format) throw Error(ErrorCode::InvalidSpec, "format must be json, markdown or html");
            StoryDocument doc = store_.read(req.matches[1].str(), [](const Session& s) { return s.bench.document(); });
            DeckDocument deck = render_deck(doc, clock_ ? clock_() : utc_timestamp());
            res.status = 200;
            res.set_content(export_deck(deck, *format), std::string(content_type(*format)));
        });
        server_.Post(sid + "/export", export_handler);
        server_.Get(sid + "/export", export_handler);
    }

    SessionStore& store_;
    httplib::Server server_;
    int port_ = -1;
    std::function<std::string()> clock_;
};

} // namespace factdeck
