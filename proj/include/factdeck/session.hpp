#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "factdeck/error.hpp"
#include "factdeck/workbench.hpp"

namespace factdeck {

inline constexpr int kSessionSchemaVersion = 1;

struct Session {
    std::string id;
    std::uint64_t revision = 0;
    Workbench bench;

    bool operator==(const Session&) const = default;
};

inline json to_json(const Session& s) {
    return {{"schema_version", kSessionSchemaVersion}, {"id", s.id}, {"revision", s.revision}, {"workbench", to_json(s.bench)}};
}

inline Session session_from_json(const json& j) {
    try {
        if (j.at("schema_version").get<int>() != kSessionSchemaVersion)
            throw Error(ErrorCode::CorruptSession, "unsupported session schema version");
        Session s;
        s.id = j.at("id").get<std::string>();
        s.revision = j.at("revision").get<std::uint64_t>();
        s.bench = workbench_from_json(j.at("workbench"));
        return s;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptSession, std::string("session: ") + e.what());
    }
}

inline void save_session(const Session& s, const std::filesystem::path& file) {
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write session file '" + tmp.string() + "'");
        out << to_json(s).dump();
        if (!out) throw Error(ErrorCode::InvalidConfig, "failed writing session file '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, file);
}

inline Session load_session(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnknownId, "no session file '" + file.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::CorruptSession, "session file '" + file.string() + "' is not valid JSON");
    return session_from_json(doc);
}

/// All live sessions. Writes to one session are serialised; reads share the
/// lock. With a directory set, every committed mutation is persisted and
/// unknown ids are looked up on disk.
class SessionStore {
public:
    explicit SessionStore(std::optional<std::filesystem::path> dir = {}, Config defaults = {})
        : dir_(std::move(dir)), defaults_(std::move(defaults)) {
        if (dir_) std::filesystem::create_directories(*dir_);
    }

    std::string create(std::optional<Config> config = {}, bool include_subspace = false) {
        auto slot = std::make_shared<Slot>();
        slot->session.bench.config = config.value_or(defaults_);
        slot->session.bench.include_subspace = include_subspace;
        std::lock_guard lock(map_mutex_);
        do slot->session.id = fresh_id();
        while (slots_.count(slot->session.id) || (dir_ && std::filesystem::exists(file_for(slot->session.id))));
        persist(slot->session);
        slots_.emplace(slot->session.id, slot);
        return slot->session.id;
    }

    /// Runs `fn(const Session&)` under a shared lock.
    template <typename Fn>
    auto read(const std::string& id, Fn&& fn) {
        auto slot = find(id);
        std::shared_lock lock(slot->mutex);
        return fn(std::as_const(slot->session));
    }

    /// Runs `fn(Workbench&)` under the session's write lock. A stale
    /// `expected_revision` is rejected before anything runs. `fn` works on a
    /// copy, so a throw leaves session and revision untouched; on success the
    /// revision goes up by one and the session is persisted.
    template <typename Fn>
    auto mutate(const std::string& id, std::optional<std::uint64_t> expected_revision, Fn&& fn) {
        auto slot = find(id);
        std::unique_lock lock(slot->mutex);
        Session& s = slot->session;
        if (expected_revision && *expected_revision != s.revision)
            throw Error(ErrorCode::RevisionConflict, "session '" + id + "' is at revision " + std::to_string(s.revision) +
                                                         ", not " + std::to_string(*expected_revision));
        Session draft = s;
        using Result = decltype(fn(draft.bench));
        if constexpr (std::is_void_v<Result>) {
            fn(draft.bench);
            commit(s, std::move(draft));
            return s.revision;
        } else {
            Result r = fn(draft.bench);
            commit(s, std::move(draft));
            return std::pair<Result, std::uint64_t>{std::move(r), s.revision};
        }
    }

    [[nodiscard]] const std::optional<std::filesystem::path>& directory() const { return dir_; }

    [[nodiscard]] std::filesystem::path file_for(const std::string& id) const { return *dir_ / (id + ".json"); }

private:
    struct Slot {
        std::shared_mutex mutex;
        Session session;
    };

    static bool valid_id(const std::string& id) {
        return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        });
    }

    std::string fresh_id() {
        std::uniform_int_distribution<std::uint64_t> dist;
        return "sess-" + hex64(dist(rng_)).substr(0, 12);
    }

    void commit(Session& s, Session draft) const {
        ++draft.revision;
        persist(draft);
        s = std::move(draft);
    }

    void persist(const Session& s) const {
        if (dir_) save_session(s, file_for(s.id));
    }

    std::shared_ptr<Slot> find(const std::string& id) {
        std::lock_guard lock(map_mutex_);
        if (auto it = slots_.find(id); it != slots_.end()) return it->second;
        if (dir_ && valid_id(id) && std::filesystem::exists(file_for(id))) {
            auto slot = std::make_shared<Slot>();
            slot->session = load_session(file_for(id));
            if (slot->session.id != id) throw Error(ErrorCode::CorruptSession, "session file id does not match '" + id + "'");
            slots_.emplace(id, slot);
            return slot;
        }
        throw Error(ErrorCode::UnknownId, "unknown session '" + id + "'");
    }

    std::optional<std::filesystem::path> dir_;
    Config defaults_;
    std::mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
    std::mt19937_64 rng_{std::random_device{}()};
};

} // namespace factdeck
