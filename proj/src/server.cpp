#include "godgame/server.hpp"

#include "godgame/snapshot.hpp"
#include "godgame/terraform.hpp"

#include <httplib.h>

#include <fstream>
#include <random>
#include <sstream>

namespace godgame {

using nlohmann::json;

namespace {

constexpr int64_t kMaxTicksPerRequest = 1'000'000;

json parse_body(std::string_view body) {
    try {
        json j = json::parse(body.empty() ? std::string_view("{}") : body);
        if (!j.is_object()) throw GameError(ErrorCode::BadRequest, "request body must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw GameError(ErrorCode::BadRequest, std::string("invalid JSON: ") + e.what());
    }
}

template <typename T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw GameError(ErrorCode::BadRequest, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw GameError(ErrorCode::BadRequest, std::string("field '") + key + "' has the wrong type");
    }
}

int int_field(const json& j, const char* key) {
    const auto& v = j.contains(key) ? j.at(key) : json();
    if (!v.is_number_integer()) throw GameError(ErrorCode::BadRequest, std::string("field '") + key + "' must be an integer");
    const auto n = v.get<long long>();
    if (n < INT32_MIN || n > INT32_MAX) throw GameError(ErrorCode::BadRequest, std::string("field '") + key + "' out of range");
    return static_cast<int>(n);
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw GameError(ErrorCode::IoError, "cannot write " + tmp);
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename F>
httplib::Server::Handler guarded(F&& f) {
    return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const GameError& e) {
            send_json(res, http_status_for(e.code()), error_body(e.code(), e.what()));
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump(), "application/json");
        }
    };
}

} // namespace

int http_status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownVillager:
    case ErrorCode::UnknownMonster:
        return 404;
    case ErrorCode::GridOccupiedByBoss:
    case ErrorCode::InsufficientWords:
    case ErrorCode::WordNotOwned:
    case ErrorCode::GameOver:
    case ErrorCode::TerraformInProgress:
        return 409;
    case ErrorCode::Timeout:
    case ErrorCode::ServerError:
    case ErrorCode::MalformedResponse:
        return 502;
    case ErrorCode::IoError:
        return 500;
    default:
        return 400;
    }
}

json error_body(ErrorCode code, const std::string& message) {
    return {{"error", {{"code", std::string(error_code_name(code))}, {"message", message}}}};
}

CreateSessionRequest parse_create_session(std::string_view body) {
    const json j = parse_body(body);
    CreateSessionRequest r;
    if (j.contains("seed")) {
        const auto& s = j["seed"];
        if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0)) {
            throw GameError(ErrorCode::BadRequest, "seed must be a non-negative integer");
        }
        r.seed = s.get<uint64_t>();
    }
    if (j.contains("config")) {
        if (!j["config"].is_object()) throw GameError(ErrorCode::BadRequest, "config must be an object");
        r.config = j["config"];
    }
    return r;
}

TerraformRequest parse_terraform_request(std::string_view body) {
    const json j = parse_body(body);
    TerraformRequest r;
    r.grid_index = int_field(j, "grid_index");
    r.words = field<std::vector<std::string>>(j, "words");
    return r;
}

CommandRequest parse_command_request(std::string_view body) {
    const json j = parse_body(body);
    CommandRequest r;
    r.villager_id = int_field(j, "villager_id");
    const auto kind = parse_task_kind(field<std::string>(j, "task"));
    if (!kind) throw GameError(ErrorCode::BadRequest, "task must be one of idle, move, chop, collect, attack");
    const json args = j.contains("args") ? j["args"] : json::object();
    auto arg = [&](const char* key, size_t index) -> int {
        if (args.is_array()) {
            if (index >= args.size() || !args[index].is_number_integer()) {
                throw GameError(ErrorCode::BadRequest, std::string("args[") + std::to_string(index) + "] must be an integer");
            }
            return args[index].get<int>();
        }
        if (!args.is_object()) throw GameError(ErrorCode::BadRequest, "args must be an object or an array");
        return int_field(args, key);
    };
    switch (*kind) {
    case TaskKind::Idle: r.task = Task::idle(); break;
    case TaskKind::Attack: r.task = Task::attack(arg("target", 0)); break;
    default: r.task = Task{*kind, {arg("x", 0), arg("y", 1)}, 0}; break;
    }
    return r;
}

int64_t parse_tick_request(std::string_view body) {
    const json j = parse_body(body);
    if (!j.contains("n")) return 1;
    const auto& n = j["n"];
    if (!n.is_number_integer() || n.get<long long>() < 0 || n.get<long long>() > kMaxTicksPerRequest) {
        throw GameError(ErrorCode::BadRequest, "n must be an integer in [0, 1000000]");
    }
    return n.get<int64_t>();
}

// --- Session ----------------------------------------------------------------

Session::Session(std::string id, GameState state, Generator generator, uint64_t seed, json overrides,
                 std::optional<std::filesystem::path> dir)
    : id_(std::move(id)), seed_(seed), overrides_(std::move(overrides)), dir_(std::move(dir)),
      state_(std::move(state)), generator_(std::move(generator)) {
    if (dir_) {
        std::filesystem::create_directories(*dir_);
        write_meta();
    }
    publish();
}

std::shared_ptr<const std::string> Session::snapshot_json() const {
    std::lock_guard lock(snapshot_mu_);
    return snapshot_;
}

void Session::publish() {
    auto text = std::make_shared<const std::string>(snapshot_to_json(make_snapshot(state_)).dump());
    std::lock_guard lock(snapshot_mu_);
    snapshot_ = std::move(text);
}

void Session::write_meta() {
    if (!dir_) return;
    write_atomically(*dir_ / "meta.json",
                     json{{"session_id", id_}, {"seed", seed_}, {"config", overrides_}, {"tick", state_.tick}}.dump(2));
}

void Session::record(const Command& c) {
    if (!dir_) return;
    std::ofstream out(*dir_ / "commands.txt", std::ios::binary | std::ios::app);
    if (!out) throw GameError(ErrorCode::IoError, "cannot append to the session log");
    out << format_command(c) << '\n';
}

TerraformReceipt Session::terraform(int grid_index, const std::vector<std::string>& words) {
    if (terraform_in_flight_.exchange(true)) {
        throw GameError(ErrorCode::TerraformInProgress, "a terraform is already in flight for this session");
    }
    struct Release {
        std::atomic<bool>& flag;
        ~Release() { flag = false; }
    } release{terraform_in_flight_};

    PreparedTerraform prepared;
    {
        std::lock_guard lock(mu_);
        prepared = prepare_terraform(state_, grid_index, words);
    }
    // Generation may block on the network; the simulation keeps ticking.
    const GenerationResult result = generator_.generate(prepared.prompt, prepared.seed);

    std::lock_guard lock(mu_);
    TerraformReceipt receipt = commit_terraform(state_, prepared, result);
    record(Command::terraform(receipt.tick, grid_index, words));
    publish();
    return receipt;
}

void Session::command(int villager_id, const Task& task) {
    std::lock_guard lock(mu_);
    if (state_.outcome != Outcome::Ongoing) throw GameError(ErrorCode::GameOver, "the game has ended");
    assign_task(state_, villager_id, task);
    record(Command::assign(state_.tick, villager_id, task));
    publish();
}

int64_t Session::advance(int64_t n) {
    std::lock_guard lock(mu_);
    step(state_, n);
    write_meta();
    publish();
    return state_.tick;
}

void Session::restore(const std::vector<Command>& commands, int64_t until_tick) {
    std::lock_guard lock(mu_);
    replay(state_, generator_, commands, until_tick);
    publish();
}

// --- GameServer ---------------------------------------------------------------

GameServer::GameServer(ServerOptions options) : options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
    validate_config(options_.base_config);
    install_routes();
}

GameServer::~GameServer() { stop(); }

const GameResources& GameServer::resources_for(const GameConfig& config) {
    const std::string key =
        config.tileset_path.string() + "\n" + config.wordfreq_path.string() + "\n" + config.affinity_path.string();
    std::lock_guard lock(resources_mu_);
    auto it = resources_.find(key);
    if (it == resources_.end()) it = resources_.emplace(key, load_resources(config)).first;
    return it->second;
}

std::string GameServer::new_session_id() {
    static thread_local std::random_device rd;
    uint64_t x = (static_cast<uint64_t>(rd()) << 32) ^ rd() ^ (id_counter_.fetch_add(1) * 0x9e3779b97f4a7c15ULL);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(splitmix64(x)));
    return buf;
}

std::shared_ptr<Session> GameServer::create_session(uint64_t seed, const json& overrides) {
    const GameConfig config = config_from_json(overrides, options_.base_config);
    const GameResources& res = resources_for(config);
    GameState state = new_game(config, res, seed);
    Generator generator = make_generator(config, res);

    std::unique_lock lock(sessions_mu_);
    std::string id;
    do {
        id = new_session_id();
    } while (sessions_.contains(id));
    std::optional<std::filesystem::path> dir;
    if (options_.state_dir) dir = *options_.state_dir / id;
    auto session = std::make_shared<Session>(id, std::move(state), std::move(generator), seed, overrides, dir);
    sessions_.emplace(id, session);
    return session;
}

std::shared_ptr<Session> GameServer::find_session(const std::string& id) const {
    std::shared_lock lock(sessions_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw GameError(ErrorCode::UnknownSession, "no session '" + id + "'");
    return it->second;
}

size_t GameServer::recover() {
    if (!options_.state_dir || !std::filesystem::exists(*options_.state_dir)) return 0;
    size_t restored = 0;
    for (const auto& entry : std::filesystem::directory_iterator(*options_.state_dir)) {
        const auto meta_path = entry.path() / "meta.json";
        if (!entry.is_directory() || !std::filesystem::exists(meta_path)) continue;
        std::ifstream in(meta_path);
        const json meta = json::parse(in);
        const std::string id = meta.at("session_id").get<std::string>();
        const uint64_t seed = meta.at("seed").get<uint64_t>();
        const json overrides = meta.at("config");
        const int64_t tick = meta.at("tick").get<int64_t>();
        std::vector<Command> commands;
        if (std::filesystem::exists(entry.path() / "commands.txt")) commands = load_script(entry.path() / "commands.txt");

        const GameConfig config = config_from_json(overrides, options_.base_config);
        const GameResources& res = resources_for(config);
        // Rebuilt without a directory so replay does not append to the log again.
        auto session = std::make_shared<Session>(id, new_game(config, res, seed), make_generator(config, res), seed,
                                                 overrides, std::nullopt);
        session->restore(commands, tick);
        auto persisted = std::make_shared<Session>(id, session->with_state([](GameState& s) { return s; }),
                                                   make_generator(config, res), seed, overrides, entry.path());
        std::unique_lock lock(sessions_mu_);
        sessions_[id] = persisted;
        ++restored;
    }
    return restored;
}

void GameServer::install_routes() {
    auto& s = *http_;
    s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
    s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    s.Get("/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"ok", true}}); });

    s.Get("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
        json ids = json::array();
        std::shared_lock lock(sessions_mu_);
        for (const auto& [id, _] : sessions_) ids.push_back(id);
        send_json(res, 200, {{"sessions", ids}});
    }));

    s.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto r = parse_create_session(req.body);
        auto session = create_session(r.seed, r.config);
        send_json(res, 201, {{"session_id", session->id()}});
    }));

    s.Get(R"(/sessions/([^/]+)/state)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto snap = find_session(req.matches[1])->snapshot_json();
        res.status = 200;
        res.set_content(*snap, "application/json");
    }));

    s.Post(R"(/sessions/([^/]+)/terraform)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto session = find_session(req.matches[1]);
        const auto r = parse_terraform_request(req.body);
        send_json(res, 200, receipt_to_json(session->terraform(r.grid_index, r.words)));
    }));

    s.Post(R"(/sessions/([^/]+)/command)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto session = find_session(req.matches[1]);
        const auto r = parse_command_request(req.body);
        session->command(r.villager_id, r.task);
        send_json(res, 200, {{"ok", true}, {"tick", session->with_state([](GameState& st) { return st.tick; })}});
    }));

    s.Post(R"(/sessions/([^/]+)/tick)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto session = find_session(req.matches[1]);
        const int64_t tick = session->advance(parse_tick_request(req.body));
        const auto outcome = session->with_state([](GameState& st) { return st.outcome; });
        send_json(res, 200, {{"ok", true}, {"tick", tick}, {"outcome", std::string(outcome_name(outcome))}});
    }));

    s.Delete(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        find_session(id);
        {
            std::unique_lock lock(sessions_mu_);
            sessions_.erase(id);
        }
        if (options_.state_dir) std::filesystem::remove_all(*options_.state_dir / id);
        send_json(res, 200, {{"ok", true}});
    }));
}

void GameServer::realtime_loop() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(
        std::chrono::duration<double>(options_.base_config.clock.tick_seconds / options_.speed));
    auto next = clock::now() + period;
    while (!stopping_) {
        std::this_thread::sleep_until(next);
        next += period;
        std::vector<std::shared_ptr<Session>> live;
        {
            std::shared_lock lock(sessions_mu_);
            for (const auto& [_, session] : sessions_) live.push_back(session);
        }
        for (auto& session : live) session->advance(1);
    }
}

bool GameServer::listen(const std::string& host, int port) {
    if (options_.realtime && !clock_thread_.joinable()) clock_thread_ = std::thread([this] { realtime_loop(); });
    return http_->listen(host, port);
}

int GameServer::start_background(const std::string& host) {
    const int port = http_->bind_to_any_port(host);
    if (port <= 0) throw GameError(ErrorCode::IoError, "cannot bind a port on " + host);
    if (options_.realtime) clock_thread_ = std::thread([this] { realtime_loop(); });
    http_thread_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
    return port;
}

void GameServer::stop() {
    stopping_ = true;
    if (http_) http_->stop();
    if (http_thread_.joinable()) http_thread_.join();
    if (clock_thread_.joinable()) clock_thread_.join();
}

} // namespace godgame
