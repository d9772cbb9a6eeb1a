#pragma once

#include "godgame/config.hpp"
#include "godgame/generator.hpp"
#include "godgame/pathfinding.hpp"
#include "godgame/postprocess.hpp"
#include "godgame/rng.hpp"
#include "godgame/tilemap.hpp"
#include "godgame/wordbank.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace godgame {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

inline Vec2 cell_centre(Cell c) { return {c.x + 0.5, c.y + 0.5}; }
double distance(Vec2 a, Vec2 b);
// Cell containing a point; points on a boundary belong to the larger coordinate.
Cell cell_at(Vec2 p);

enum class VillagerKind : uint8_t { Fighter, Archer, Worker };
std::string_view villager_kind_name(VillagerKind kind);
std::optional<VillagerKind> parse_villager_kind(std::string_view name);

enum class TaskKind : uint8_t { Idle, MoveTo, Chop, Attack, Collect };
std::string_view task_kind_name(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view name);

struct Task {
    TaskKind kind = TaskKind::Idle;
    Cell cell;          // MoveTo, Chop, Collect
    int target = 0;     // Attack: monster id

    static Task idle() { return {}; }
    static Task move_to(Cell c) { return {TaskKind::MoveTo, c, 0}; }
    static Task chop(Cell c) { return {TaskKind::Chop, c, 0}; }
    static Task collect(Cell c) { return {TaskKind::Collect, c, 0}; }
    static Task attack(int monster_id) { return {TaskKind::Attack, {}, monster_id}; }

    bool operator==(const Task&) const = default;
};

// Planned route along cell centres; `next` indexes the waypoint being approached.
struct Motion {
    std::vector<Cell> path;
    size_t next = 0;
    std::optional<Cell> goal; // cell the route was planned for

    bool active() const { return next < path.size(); }
    void clear() { *this = Motion{}; }
    bool operator==(const Motion&) const = default;
};

struct Villager {
    int id = 0;
    VillagerKind kind = VillagerKind::Worker;
    double hp = 0.0;
    double max_hp = 0.0;
    int level = 1;
    int xp = 0;
    Vec2 pos;
    Task task;
    Motion motion;
    int64_t work_ticks = 0;     // chop progress
    int64_t cooldown_ticks = 0; // until the next attack

    bool operator==(const Villager&) const = default;
};

enum class MonsterKind : uint8_t { Boss, Minion };
std::string_view monster_kind_name(MonsterKind kind);
std::optional<MonsterKind> parse_monster_kind(std::string_view name);

struct Monster {
    int id = 0;
    MonsterKind kind = MonsterKind::Boss;
    double hp = 0.0;
    double max_hp = 0.0;
    int grid_index = 0;
    Vec2 pos;
    Cell anchor;
    std::optional<int> target;
    Motion motion;
    int64_t cooldown_ticks = 0;
    int64_t spawned_tick = 0;
    std::vector<int> attackers; // villager ids that dealt damage, ascending

    bool operator==(const Monster&) const = default;
};

enum class Outcome : uint8_t { Ongoing, Win, Lose };
std::string_view outcome_name(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view name);

struct GameStats {
    int64_t words_gained = 0;
    int64_t words_spent = 0;
    int64_t trees_chopped = 0;
    int64_t treasures_collected = 0;
    int64_t villagers_spawned = 0; // house-driven only
    int64_t villager_deaths = 0;
    int64_t bosses_spawned = 0;    // includes the initial boss
    int64_t bosses_killed = 0;
    int64_t minions_spawned = 0;
    int64_t minions_killed = 0;

    bool operator==(const GameStats&) const = default;
};

struct GameEvent {
    int64_t tick = 0;
    std::string kind;
    int subject = 0; // entity id or grid index, depending on kind
    std::string detail;

    bool operator==(const GameEvent&) const = default;
};

struct RngStreams {
    Rng gacha;
    Rng spawn;
    Rng combat;
    Rng generation;

    bool operator==(const RngStreams&) const = default;
};

struct GameState {
    GameConfig config;
    std::shared_ptr<const TileSet> tiles;
    uint64_t seed = 0;

    int64_t tick = 0;
    World world;
    RockHeightMap rock;
    WaterMaskMap water;
    std::vector<Villager> villagers; // ascending id
    std::vector<Monster> monsters;   // ascending id
    WordInventory inventory;
    WordPool pool;
    std::vector<Cell> pending_house_spawns;
    std::array<int64_t, kGridCount> minion_timers{}; // ticks until the next minion
    RngStreams rng;
    Outcome outcome = Outcome::Ongoing;
    std::vector<TerraformReceipt> receipts;
    std::vector<GameEvent> events;
    GameStats stats;
    int next_id = 1;

    const TileSet& tileset() const { return *tiles; }
    double elapsed_s() const { return static_cast<double>(tick) * config.clock.tick_seconds; }
    int64_t day_ticks() const;
    int64_t boss_interval_ticks() const;
    int64_t day_index() const { return tick / day_ticks(); }
    // Ticks until the next scheduled boss spawn.
    int64_t boss_timer_remaining() const;

    const Villager* find_villager(int id) const;
    Villager* find_villager(int id);
    const Monster* find_monster(int id) const;
    Monster* find_monster(int id);
    int bosses_alive() const;

    bool operator==(const GameState& other) const;
};

// Throws ConfigError.
GameState new_game(const GameConfig& config, const GameResources& resources, uint64_t seed);
GameState new_game(const GameConfig& config, uint64_t seed);

// Advances n ticks; a finished game does not advance. Order inside a tick:
// villager tasks and movement, villager attacks, monster AI and attacks,
// flower healing, removal of the dead with xp credit, tick++, day rollover,
// boss spawn, minion spawn, end check.
void step(GameState& state, int64_t n_ticks = 1);

// Throws UnknownVillager, IllegalTask, NotChoppable, NothingToCollect, UnknownMonster.
void assign_task(GameState& state, int villager_id, const Task& task);

// Throws UnknownVillager, NotChoppable.
void chop_resolution(GameState& state, int villager_id, Cell cell);
// Throws UnknownVillager, NothingToCollect.
void collect_treasure(GameState& state, int villager_id, Cell cell);
void day_rollover(GameState& state);
Outcome check_end(const GameState& state);
double minion_scaling(double elapsed_s, const MonsterConfig& config = {});

// Chop duration at a level, in seconds.
double chop_duration_s(const VillagerConfig& config, int level);

// Nearest walkable cell by increasing Manhattan ring (row-major within a
// ring), restricted to the largest 4-connected walkable region so nothing
// spawns sealed inside an enclosure. nullopt on a world with no walkable cell.
std::optional<Cell> nearest_open_cell(const World& world, const TileSet& tiles, Cell origin);

// Applies a generated grid: places it, refreshes derived maps, queues house
// spawns and moves entities off cells that became unwalkable.
void apply_placement(GameState& state, int grid_index, const TileGrid& grid);

// Human-readable invariant violations; empty when the state is consistent.
std::vector<std::string> check_invariants(const GameState& state);

} // namespace godgame
