#pragma once

// Independent oracles and fixtures shared by the unit tests and the
// acceptance gate. Nothing here calls the engine's own derivations.

#include "godgame/config.hpp"
#include "godgame/generator.hpp"
#include "godgame/pathfinding.hpp"
#include "godgame/script.hpp"
#include "godgame/postprocess.hpp"
#include "godgame/rng.hpp"
#include "godgame/tilemap.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace godgame::testing {

inline const GameResources& shared_resources() {
    static const GameResources res = load_resources(default_config());
    return res;
}

inline const TileSet& default_tiles() { return *shared_resources().tileset; }

inline TileId tile(int v) { return TileId(v); }

inline TileId tile_of(TileCategory c) { return *default_tiles().first_of(c); }

// Random world biased towards rock and water so both maps get exercised.
inline World random_world(Rng& rng, double rock = 0.2, double water = 0.2) {
    const TileId rock_id = tile_of(TileCategory::Rock);
    const TileId water_id = tile_of(TileCategory::Water);
    World w;
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) {
            const double u = rng.uniform01();
            TileId t = u < rock ? rock_id : u < rock + water ? water_id : TileId(static_cast<long long>(rng.uniform_below(16)));
            w.set({x, y}, t);
        }
    }
    return w;
}

inline TileGrid random_grid(Rng& rng) {
    TileGrid g;
    for (int y = 0; y < kSubGridSize; ++y) {
        for (int x = 0; x < kSubGridSize; ++x) g.set(x, y, TileId(static_cast<long long>(rng.uniform_below(16))));
    }
    return g;
}

inline std::array<int, kWorldCells> brute_rock_heights(const World& w, const TileSet& tiles) {
    std::array<int, kWorldCells> out{};
    auto is_rock = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < kWorldSize && y < kWorldSize && tiles.category(w.at(x, y)) == TileCategory::Rock;
    };
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) {
            if (!is_rock(x, y)) continue;
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) n += (dx || dy) && is_rock(x + dx, y + dy);
            }
            out[static_cast<size_t>(y * kWorldSize + x)] = n;
        }
    }
    return out;
}

// Union-find labelling; returns a component id per cell, -1 where pred fails.
inline std::vector<int> union_find_labels(const std::function<bool(Cell)>& pred) {
    std::vector<int> parent(kWorldCells);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int i) { return parent[static_cast<size_t>(i)] == i ? i : parent[static_cast<size_t>(i)] = root(parent[static_cast<size_t>(i)]); };
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) {
            if (!pred({x, y})) continue;
            const int i = y * kWorldSize + x;
            if (x + 1 < kWorldSize && pred({x + 1, y})) parent[static_cast<size_t>(root(i))] = root(i + 1);
            if (y + 1 < kWorldSize && pred({x, y + 1})) parent[static_cast<size_t>(root(i))] = root(i + kWorldSize);
        }
    }
    std::vector<int> label(kWorldCells, -1);
    for (int i = 0; i < kWorldCells; ++i) {
        if (pred({i % kWorldSize, i / kWorldSize})) label[static_cast<size_t>(i)] = root(i);
    }
    return label;
}

// Largest 4-connected component of cells with the given tile inside a 10x10 grid.
inline int largest_component(const TileGrid& g, TileId id) {
    std::array<bool, 100> seen{};
    int best = 0;
    for (int s = 0; s < 100; ++s) {
        if (seen[static_cast<size_t>(s)] || g.at(s % 10, s / 10) != id) continue;
        int size = 0;
        std::vector<int> stack{s};
        seen[static_cast<size_t>(s)] = true;
        while (!stack.empty()) {
            const int c = stack.back();
            stack.pop_back();
            ++size;
            const int x = c % 10, y = c / 10;
            const int nx[4] = {x + 1, x - 1, x, x};
            const int ny[4] = {y, y, y + 1, y - 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || ny[k] < 0 || nx[k] >= 10 || ny[k] >= 10) continue;
                const int n = ny[k] * 10 + nx[k];
                if (!seen[static_cast<size_t>(n)] && g.at(nx[k], ny[k]) == id) {
                    seen[static_cast<size_t>(n)] = true;
                    stack.push_back(n);
                }
            }
        }
        best = std::max(best, size);
    }
    return best;
}

// Uniform-cost search with a linear scan for the minimum: slow and obviously
// correct. Entering a cell costs round(1000 / speed).
inline std::optional<int64_t> ucs_cost(const World& w, const TileSet& tiles, Cell from, Cell to,
                                       const std::function<bool(Cell)>& allowed = {}) {
    constexpr int64_t inf = std::numeric_limits<int64_t>::max();
    std::vector<int64_t> dist(kWorldCells, inf);
    std::vector<bool> done(kWorldCells, false);
    auto idx = [](Cell c) { return static_cast<size_t>(c.y * kWorldSize + c.x); };
    dist[idx(from)] = 0;
    for (;;) {
        size_t best = kWorldCells;
        for (size_t i = 0; i < kWorldCells; ++i) {
            if (!done[i] && dist[i] != inf && (best == kWorldCells || dist[i] < dist[best])) best = i;
        }
        if (best == kWorldCells) return std::nullopt;
        const Cell c{static_cast<int>(best) % kWorldSize, static_cast<int>(best) / kWorldSize};
        if (c == to) return dist[best];
        done[best] = true;
        const Cell ns[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (Cell n : ns) {
            if (!in_world(n) || !tiles.walkable(w.at(n)) || (allowed && !allowed(n))) continue;
            const int64_t step = std::llround(1000.0 / tiles[w.at(n)].speed_multiplier);
            dist[idx(n)] = std::min(dist[idx(n)], dist[best] + step);
        }
    }
}

inline std::string grid_body(int value, int rows = 10, int cols = 10) {
    std::string s = "{\"grid\": [";
    for (int r = 0; r < rows; ++r) {
        s += r ? ",[" : "[";
        for (int c = 0; c < cols; ++c) s += (c ? "," : "") + std::to_string(value);
        s += "]";
    }
    return s + "]}";
}

// Path is 4-connected, avoids blocked cells after the start and its cost adds up.
inline bool valid_path(const World& w, const TileSet& t, const Path& p, Cell from, Cell to) {
    if (p.cells.empty() || p.cells.front() != from || p.cells.back() != to) return false;
    int64_t cost = 0;
    for (size_t i = 1; i < p.cells.size(); ++i) {
        if (manhattan(p.cells[i - 1], p.cells[i]) != 1) return false;
        if (!t.walkable(w.at(p.cells[i]))) return false;
        cost += std::llround(1000.0 / t[w.at(p.cells[i])].speed_multiplier);
    }
    return cost == p.cost;
}

// Independent acceptance rule for a generate response body.
inline bool oracle_accepts(const std::string& body) {
    const nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("grid") || !j["grid"].is_array() || j["grid"].size() != 10) {
        return false;
    }
    for (const auto& row : j["grid"]) {
        if (!row.is_array() || row.size() != 10) return false;
        for (const auto& v : row) {
            if (!v.is_number_integer()) return false;
            if (v.is_number_unsigned() ? v.get<uint64_t>() > 15 : (v.get<int64_t>() < 0 || v.get<int64_t>() > 15)) return false;
        }
    }
    return true;
}

inline std::string random_payload(Rng& rng) {
    const std::string alphabet = "{}[],:\"grid0123456789-.e ";
    switch (rng.uniform_below(5)) {
    case 0: { // raw bytes
        std::string s(rng.uniform_below(64), '\0');
        for (auto& c : s) c = static_cast<char>(rng.uniform_below(256));
        return s;
    }
    case 1: { // JSON-ish noise
        std::string s(rng.uniform_below(80), ' ');
        for (auto& c : s) c = alphabet[rng.uniform_below(alphabet.size())];
        return s;
    }
    case 2: { // a valid body with one mutation
        std::string s = grid_body(static_cast<int>(rng.uniform_below(16)));
        const size_t at = rng.uniform_below(s.size());
        s[at] = alphabet[rng.uniform_below(alphabet.size())];
        return s;
    }
    default: { // structurally plausible with random shape and values
        const int rows = static_cast<int>(rng.uniform_below(13));
        nlohmann::json grid = nlohmann::json::array();
        for (int r = 0; r < rows; ++r) {
            const int cols = rng.uniform_below(8) == 0 ? static_cast<int>(rng.uniform_below(13)) : 10;
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < cols; ++c) {
                switch (rng.uniform_below(20)) {
                case 0: row.push_back(-1); break;
                case 1: row.push_back(16); break;
                case 2: row.push_back(3.5); break;
                case 3: row.push_back("4"); break;
                case 4: row.push_back(nullptr); break;
                case 5: row.push_back(18446744073709551615ULL); break;
                default: row.push_back(static_cast<int>(rng.uniform_below(16)));
                }
            }
            grid.push_back(row);
        }
        return nlohmann::json{{"grid", grid}}.dump();
    }
    }
}

// Minimal JSON-over-HTTP stand-in for the remote generator.
class MockGenerator {
public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    explicit MockGenerator(Handler h) : handler_(std::move(h)) {
        server_.Post("/generate", [this](const httplib::Request& rq, httplib::Response& rs) {
            ++hits_;
            handler_(rq, rs);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockGenerator() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int hits() const { return hits_; }

private:
    Handler handler_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
};


inline nlohmann::json command_body(const Command& c) {
    if (c.kind == Command::Kind::Terraform) return {{"grid_index", c.grid_index}, {"words", c.words}};
    nlohmann::json j{{"villager_id", c.villager_id}, {"task", std::string(task_kind_name(c.task.kind))}};
    if (c.task.kind == TaskKind::Attack) {
        j["args"] = {{"target", c.task.target}};
    } else if (c.task.kind != TaskKind::Idle) {
        j["args"] = {{"x", c.task.cell.x}, {"y", c.task.cell.y}};
    }
    return j;
}

// Plays `commands` against a live server the way run_script plays them
// in-process: every command due at tick t lands before tick t is stepped.
// Returns the final /state body, or nullopt on a transport failure.
inline std::optional<nlohmann::json> drive_over_api(int port, uint64_t seed, const std::vector<Command>& commands,
                                                    int64_t until_tick) {
    httplib::Client cli("127.0.0.1", port);
    cli.set_read_timeout(30, 0);
    const auto created = cli.Post("/sessions", nlohmann::json{{"seed", seed}}.dump(), "application/json");
    if (!created || created->status != 201) return std::nullopt;
    const std::string base = "/sessions/" + nlohmann::json::parse(created->body).at("session_id").get<std::string>();
    int64_t tick = 0;
    auto advance_to = [&](int64_t t) {
        if (t <= tick) return true;
        const auto r = cli.Post(base + "/tick", nlohmann::json{{"n", t - tick}}.dump(), "application/json");
        if (!r || r->status != 200) return false;
        tick = t;
        return true;
    };
    for (const Command& c : commands) {
        if (!advance_to(c.tick)) return std::nullopt;
        const char* route = c.kind == Command::Kind::Terraform ? "/terraform" : "/command";
        // Rejections are part of the game; run_script skips them too.
        if (!cli.Post(base + route, command_body(c).dump(), "application/json")) return std::nullopt;
    }
    if (!advance_to(until_tick)) return std::nullopt;
    const auto state = cli.Get(base + "/state");
    if (!state || state->status != 200) return std::nullopt;
    return nlohmann::json::parse(state->body);
}

} // namespace godgame::testing
