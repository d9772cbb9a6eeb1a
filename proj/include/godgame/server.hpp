#pragma once

#include "godgame/config.hpp"
#include "godgame/errors.hpp"
#include "godgame/script.hpp"
#include "godgame/simulation.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace godgame {

// 400, 404, 409, 502 or 500.
int http_status_for(ErrorCode code);
nlohmann::json error_body(ErrorCode code, const std::string& message);

// Request bodies. Throws BadRequest.
struct CreateSessionRequest {
    uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
};
CreateSessionRequest parse_create_session(std::string_view body);

struct TerraformRequest {
    int grid_index = 0;
    std::vector<std::string> words;
};
TerraformRequest parse_terraform_request(std::string_view body);

// {"villager_id": 3, "task": "chop", "args": {"x": 4, "y": 5}}; args may also
// be an array: [x, y] for move/chop/collect, [monster_id] for attack.
struct CommandRequest {
    int villager_id = 0;
    Task task;
};
CommandRequest parse_command_request(std::string_view body);

int64_t parse_tick_request(std::string_view body);

class Session {
public:
    Session(std::string id, GameState state, Generator generator, uint64_t seed, nlohmann::json overrides,
            std::optional<std::filesystem::path> dir);

    const std::string& id() const { return id_; }
    uint64_t seed() const { return seed_; }
    const nlohmann::json& overrides() const { return overrides_; }

    // Latest published snapshot; never waits for the writer.
    std::shared_ptr<const std::string> snapshot_json() const;

    TerraformReceipt terraform(int grid_index, const std::vector<std::string>& words);
    void command(int villager_id, const Task& task);
    int64_t advance(int64_t n);

    // Replays a persisted command log; used on recovery.
    void restore(const std::vector<Command>& commands, int64_t until_tick);

    // Runs `f` under the writer lock.
    template <typename F>
    auto with_state(F&& f) {
        std::lock_guard lock(mu_);
        return f(state_);
    }

private:
    void publish();
    void record(const Command& c);
    void write_meta();

    std::string id_;
    uint64_t seed_;
    nlohmann::json overrides_;
    std::optional<std::filesystem::path> dir_;

    std::mutex mu_; // the single writer
    GameState state_;
    Generator generator_;
    std::atomic<bool> terraform_in_flight_{false};

    mutable std::mutex snapshot_mu_;
    std::shared_ptr<const std::string> snapshot_;
};

struct ServerOptions {
    GameConfig base_config = default_config();
    std::optional<std::filesystem::path> state_dir; // session persistence root
    bool realtime = false;                          // advance sessions on a wall-clock timer
    double speed = 1.0;                             // ticks per tick_seconds of wall time
};

class GameServer {
public:
    explicit GameServer(ServerOptions options);
    ~GameServer();

    GameServer(const GameServer&) = delete;
    GameServer& operator=(const GameServer&) = delete;

    // Binds and serves until stop(); returns false if binding fails.
    bool listen(const std::string& host, int port);
    // Binds an ephemeral port and serves on a background thread.
    int start_background(const std::string& host = "127.0.0.1");
    void stop();

    std::shared_ptr<Session> create_session(uint64_t seed, const nlohmann::json& overrides);
    std::shared_ptr<Session> find_session(const std::string& id) const;
    // Reloads every persisted session under state_dir; returns how many.
    size_t recover();

private:
    void install_routes();
    void realtime_loop();
    std::string new_session_id();
    const GameResources& resources_for(const GameConfig& config);

    ServerOptions options_;
    std::unique_ptr<httplib::Server> http_;
    std::thread http_thread_;
    std::thread clock_thread_;
    std::atomic<bool> stopping_{false};

    mutable std::shared_mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;

    std::mutex resources_mu_;
    std::map<std::string, GameResources> resources_; // by data paths
    std::atomic<uint64_t> id_counter_{0};
};

} // namespace godgame
