#pragma once

#include "godgame/generator.hpp"
#include "godgame/tilemap.hpp"
#include "godgame/wordbank.hpp"

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <string>

namespace godgame {

struct ClockConfig {
    double tick_seconds = 0.1;
    double day_length_s = 120.0;
    double boss_interval_s = 120.0;

    bool operator==(const ClockConfig&) const = default;
};

struct VillagerConfig {
    double max_hp = 100.0;
    double fighter_dps = 10.0;
    double archer_dps = 7.0;
    double worker_dps = 0.0;
    double melee_range = 1.5;  // tiles, centre to centre
    double archer_range = 3.0;
    double attack_cooldown_s = 1.0;
    double move_speed = 2.0;   // tiles per second on a 1.0-speed tile
    double chop_duration_s = 3.0;
    double chop_level_factor = 0.9;
    double chop_min_s = 1.0;
    int xp_per_task = 10;      // per chop and per kill assist
    int xp_per_level = 100;    // level L -> L+1 needs xp_per_level * L
    double level_damage_factor = 1.1;
    double flower_heal_per_s = 2.0;

    bool operator==(const VillagerConfig&) const = default;
};

struct MonsterConfig {
    double boss_hp = 500.0;
    double boss_dps = 15.0;
    double minion_hp = 60.0;
    double minion_dps = 5.0;
    double melee_range = 1.5;
    double attack_cooldown_s = 1.0;
    double boss_speed = 1.0;
    double minion_speed = 1.5;
    int max_minions_per_grid = 6;
    double minion_base_interval_s = 10.0;
    double minion_decay = 0.9;
    double minion_min_interval_s = 2.0;

    bool operator==(const MonsterConfig&) const = default;
};

struct GeneratorConfig {
    GeneratorMode mode = GeneratorMode::Local;
    std::string url;
    int timeout_ms = 2000;

    bool operator==(const GeneratorConfig&) const = default;
};

struct GameConfig {
    std::filesystem::path tileset_path;
    std::filesystem::path wordfreq_path;
    std::filesystem::path affinity_path;

    bool words_consumable = true;
    bool houses_respawn_daily = false;
    std::string starting_word = "forest";
    int start_grid = 0;
    int initial_boss_grid = 15;
    double combat_jitter = 0.2; // damage is scaled by uniform(1 - j, 1 + j)

    ClockConfig clock;
    VillagerConfig villager;
    MonsterConfig monster;
    GeneratorConfig generator;

    bool operator==(const GameConfig&) const = default;
};

// Directory holding the shipped tileset, word list and affinity table.
std::filesystem::path default_data_dir();

GameConfig default_config();

// Throws ConfigError.
void validate_config(const GameConfig& config);

nlohmann::json config_to_json(const GameConfig& config);
// Applies a (possibly partial) JSON document on top of `base` and validates.
// Relative paths resolve against `relative_to`.
GameConfig config_from_json(const nlohmann::json& overrides, const GameConfig& base = default_config(),
                            const std::filesystem::path& relative_to = {});
GameConfig load_config_file(const std::filesystem::path& path);

// Documents referenced by a configuration, loaded once and shared.
struct GameResources {
    std::shared_ptr<const TileSet> tileset;
    std::shared_ptr<const WordPool> pool;
    std::shared_ptr<const AffinityTable> affinity;
};

GameResources load_resources(const GameConfig& config);

// Builds the backend routing described by config.generator.
Generator make_generator(const GameConfig& config, const GameResources& resources);

} // namespace godgame
