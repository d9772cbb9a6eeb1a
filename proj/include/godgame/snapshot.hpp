#pragma once

#include "godgame/simulation.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace godgame {

struct VillagerView {
    int id = 0;
    VillagerKind kind = VillagerKind::Worker;
    double hp = 0;
    double max_hp = 0;
    int level = 1;
    int xp = 0;
    Vec2 pos;
    Task task;

    bool operator==(const VillagerView&) const = default;
};

struct MonsterView {
    int id = 0;
    MonsterKind kind = MonsterKind::Boss;
    double hp = 0;
    double max_hp = 0;
    int grid_index = 0;
    Vec2 pos;
    std::optional<int> target;

    bool operator==(const MonsterView&) const = default;
};

// Read-only view of a session between ticks; what the HTTP API serves.
struct StateSnapshot {
    int64_t tick = 0;
    double elapsed_s = 0;
    Outcome outcome = Outcome::Ongoing;
    int64_t day_index = 0;
    int64_t boss_timer_remaining = 0; // ticks
    std::array<std::array<int, kWorldSize>, kWorldSize> cells{};   // [y][x]
    std::array<std::array<int, kWorldSize>, kWorldSize> rock{};    // [y][x]
    std::array<std::array<int, kWorldSize>, kWorldSize> water{};   // [y][x]
    std::array<bool, kGridCount> boss_occupied{};
    std::vector<VillagerView> villagers;
    std::vector<MonsterView> monsters;
    std::map<std::string, uint32_t> inventory;
    int64_t pending_house_spawns = 0;
    int64_t bosses_killed = 0;
    int64_t receipts = 0;

    bool operator==(const StateSnapshot&) const = default;
};

StateSnapshot make_snapshot(const GameState& state);
nlohmann::json snapshot_to_json(const StateSnapshot& snapshot);
// Throws ParseError.
StateSnapshot snapshot_from_json(const nlohmann::json& j);

// Canonical full-state document: everything that influences future ticks,
// including rng streams, pool order, routes and timers.
nlohmann::json state_to_json(const GameState& state);
// 16 hex digits of FNV-1a over the canonical document.
std::string state_digest(const GameState& state);

nlohmann::json task_to_json(const Task& task);
Task task_from_json(const nlohmann::json& j);

} // namespace godgame
