#include "godgame/config.hpp"

#include <cmath>
#include <fstream>

#ifndef GODGAME_DATA_DIR
#define GODGAME_DATA_DIR "data"
#endif

namespace godgame {

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw GameError(ErrorCode::ConfigError, what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("GODGAME_DATA_DIR"); env && *env) return env;
    return GODGAME_DATA_DIR;
}

GameConfig default_config() {
    GameConfig c;
    const auto dir = default_data_dir();
    c.tileset_path = dir / "tileset.json";
    c.wordfreq_path = dir / "wordfreq.tsv";
    c.affinity_path = dir / "affinity.json";
    return c;
}

void validate_config(const GameConfig& c) {
    check(positive(c.clock.tick_seconds), "clock.tick_seconds must be positive");
    check(positive(c.clock.day_length_s), "clock.day_length_s must be positive");
    check(positive(c.clock.boss_interval_s), "clock.boss_interval_s must be positive");
    check(std::llround(c.clock.day_length_s / c.clock.tick_seconds) >= 1, "day shorter than one tick");
    check(std::llround(c.clock.boss_interval_s / c.clock.tick_seconds) >= 1, "boss interval shorter than one tick");

    const auto& v = c.villager;
    check(positive(v.max_hp), "villager.max_hp must be positive");
    check(v.fighter_dps >= 0 && v.archer_dps >= 0 && v.worker_dps >= 0, "villager dps must be >= 0");
    check(positive(v.melee_range) && positive(v.archer_range), "attack ranges must be positive");
    check(positive(v.attack_cooldown_s), "villager.attack_cooldown_s must be positive");
    check(positive(v.move_speed), "villager.move_speed must be positive");
    check(positive(v.chop_duration_s) && positive(v.chop_min_s), "chop durations must be positive");
    check(v.chop_level_factor > 0 && v.chop_level_factor <= 1, "villager.chop_level_factor must be in (0, 1]");
    check(v.xp_per_task >= 0 && v.xp_per_level > 0, "xp settings must be non-negative");
    check(v.level_damage_factor >= 1.0, "villager.level_damage_factor must be >= 1");
    check(v.flower_heal_per_s >= 0, "villager.flower_heal_per_s must be >= 0");

    const auto& m = c.monster;
    check(positive(m.boss_hp) && positive(m.minion_hp), "monster hp must be positive");
    check(m.boss_hp >= 3.0 * v.max_hp, "boss_hp must be at least 3x villager max_hp");
    check(m.boss_dps >= 0 && m.minion_dps >= 0, "monster dps must be >= 0");
    check(positive(m.melee_range) && positive(m.attack_cooldown_s), "monster attack settings must be positive");
    check(positive(m.boss_speed) && positive(m.minion_speed), "monster speeds must be positive");
    check(m.max_minions_per_grid >= 0, "monster.max_minions_per_grid must be >= 0");
    check(positive(m.minion_base_interval_s) && positive(m.minion_min_interval_s), "minion intervals must be positive");
    check(m.minion_decay > 0 && m.minion_decay <= 1, "monster.minion_decay must be in (0, 1]");

    check(c.start_grid >= 0 && c.start_grid < kGridCount, "start_grid outside [0, 15]");
    check(c.initial_boss_grid >= 0 && c.initial_boss_grid < kGridCount, "initial_boss_grid outside [0, 15]");
    check(c.initial_boss_grid != c.start_grid, "initial boss cannot share the start grid");
    check(c.combat_jitter >= 0 && c.combat_jitter < 1, "combat_jitter must be in [0, 1)");
    check(!c.starting_word.empty(), "starting_word must be set");
    check(c.generator.timeout_ms > 0, "generator.timeout_ms must be positive");
    check(c.generator.mode == GeneratorMode::Local || !c.generator.url.empty(),
          "generator.url is required for remote generation");
}

nlohmann::json config_to_json(const GameConfig& c) {
    const auto& v = c.villager;
    const auto& m = c.monster;
    return {
        {"tileset", c.tileset_path.string()},
        {"wordfreq", c.wordfreq_path.string()},
        {"affinity", c.affinity_path.string()},
        {"words_consumable", c.words_consumable},
        {"houses_respawn_daily", c.houses_respawn_daily},
        {"starting_word", c.starting_word},
        {"start_grid", c.start_grid},
        {"initial_boss_grid", c.initial_boss_grid},
        {"combat_jitter", c.combat_jitter},
        {"clock",
         {{"tick_seconds", c.clock.tick_seconds},
          {"day_length_s", c.clock.day_length_s},
          {"boss_interval_s", c.clock.boss_interval_s}}},
        {"villager",
         {{"max_hp", v.max_hp},
          {"fighter_dps", v.fighter_dps},
          {"archer_dps", v.archer_dps},
          {"worker_dps", v.worker_dps},
          {"melee_range", v.melee_range},
          {"archer_range", v.archer_range},
          {"attack_cooldown_s", v.attack_cooldown_s},
          {"move_speed", v.move_speed},
          {"chop_duration_s", v.chop_duration_s},
          {"chop_level_factor", v.chop_level_factor},
          {"chop_min_s", v.chop_min_s},
          {"xp_per_task", v.xp_per_task},
          {"xp_per_level", v.xp_per_level},
          {"level_damage_factor", v.level_damage_factor},
          {"flower_heal_per_s", v.flower_heal_per_s}}},
        {"monster",
         {{"boss_hp", m.boss_hp},
          {"boss_dps", m.boss_dps},
          {"minion_hp", m.minion_hp},
          {"minion_dps", m.minion_dps},
          {"melee_range", m.melee_range},
          {"attack_cooldown_s", m.attack_cooldown_s},
          {"boss_speed", m.boss_speed},
          {"minion_speed", m.minion_speed},
          {"max_minions_per_grid", m.max_minions_per_grid},
          {"minion_base_interval_s", m.minion_base_interval_s},
          {"minion_decay", m.minion_decay},
          {"minion_min_interval_s", m.minion_min_interval_s}}},
        {"generator",
         {{"mode", std::string(mode_name(c.generator.mode))},
          {"url", c.generator.url},
          {"timeout_ms", c.generator.timeout_ms}}},
    };
}

GameConfig config_from_json(const nlohmann::json& overrides, const GameConfig& base,
                            const std::filesystem::path& relative_to) {
    if (!overrides.is_null() && !overrides.is_object()) {
        throw GameError(ErrorCode::ConfigError, "configuration must be a JSON object");
    }
    nlohmann::json merged = config_to_json(base);
    const nlohmann::json known = merged;
    if (overrides.is_object()) {
        for (const auto& [key, value] : overrides.items()) {
            check(known.contains(key), "unknown configuration key '" + key + "'");
            if (known[key].is_object()) {
                check(value.is_object(), "configuration key '" + key + "' must be an object");
                for (const auto& [sub, _] : value.items()) {
                    check(known[key].contains(sub), "unknown configuration key '" + key + "." + sub + "'");
                }
            }
        }
        merged.merge_patch(overrides);
    }

    GameConfig c;
    try {
        auto path = [&](const char* key) {
            std::filesystem::path p = merged.at(key).get<std::string>();
            if (p.is_relative() && !relative_to.empty() && overrides.is_object() && overrides.contains(key)) {
                p = relative_to / p;
            }
            return p;
        };
        c.tileset_path = path("tileset");
        c.wordfreq_path = path("wordfreq");
        c.affinity_path = path("affinity");
        c.words_consumable = merged.at("words_consumable").get<bool>();
        c.houses_respawn_daily = merged.at("houses_respawn_daily").get<bool>();
        c.starting_word = merged.at("starting_word").get<std::string>();
        c.start_grid = merged.at("start_grid").get<int>();
        c.initial_boss_grid = merged.at("initial_boss_grid").get<int>();
        c.combat_jitter = merged.at("combat_jitter").get<double>();

        const auto& k = merged.at("clock");
        c.clock.tick_seconds = k.at("tick_seconds").get<double>();
        c.clock.day_length_s = k.at("day_length_s").get<double>();
        c.clock.boss_interval_s = k.at("boss_interval_s").get<double>();

        const auto& v = merged.at("villager");
        auto& cv = c.villager;
        cv.max_hp = v.at("max_hp").get<double>();
        cv.fighter_dps = v.at("fighter_dps").get<double>();
        cv.archer_dps = v.at("archer_dps").get<double>();
        cv.worker_dps = v.at("worker_dps").get<double>();
        cv.melee_range = v.at("melee_range").get<double>();
        cv.archer_range = v.at("archer_range").get<double>();
        cv.attack_cooldown_s = v.at("attack_cooldown_s").get<double>();
        cv.move_speed = v.at("move_speed").get<double>();
        cv.chop_duration_s = v.at("chop_duration_s").get<double>();
        cv.chop_level_factor = v.at("chop_level_factor").get<double>();
        cv.chop_min_s = v.at("chop_min_s").get<double>();
        cv.xp_per_task = v.at("xp_per_task").get<int>();
        cv.xp_per_level = v.at("xp_per_level").get<int>();
        cv.level_damage_factor = v.at("level_damage_factor").get<double>();
        cv.flower_heal_per_s = v.at("flower_heal_per_s").get<double>();

        const auto& m = merged.at("monster");
        auto& cm = c.monster;
        cm.boss_hp = m.at("boss_hp").get<double>();
        cm.boss_dps = m.at("boss_dps").get<double>();
        cm.minion_hp = m.at("minion_hp").get<double>();
        cm.minion_dps = m.at("minion_dps").get<double>();
        cm.melee_range = m.at("melee_range").get<double>();
        cm.attack_cooldown_s = m.at("attack_cooldown_s").get<double>();
        cm.boss_speed = m.at("boss_speed").get<double>();
        cm.minion_speed = m.at("minion_speed").get<double>();
        cm.max_minions_per_grid = m.at("max_minions_per_grid").get<int>();
        cm.minion_base_interval_s = m.at("minion_base_interval_s").get<double>();
        cm.minion_decay = m.at("minion_decay").get<double>();
        cm.minion_min_interval_s = m.at("minion_min_interval_s").get<double>();

        const auto& g = merged.at("generator");
        const auto mode = parse_mode(g.at("mode").get<std::string>());
        check(mode.has_value(), "generator.mode must be local, remote or remote_with_fallback");
        c.generator.mode = *mode;
        c.generator.url = g.at("url").get<std::string>();
        c.generator.timeout_ms = g.at("timeout_ms").get<int>();
    } catch (const nlohmann::json::exception& ex) {
        throw GameError(ErrorCode::ConfigError, std::string("bad configuration value: ") + ex.what());
    }
    validate_config(c);
    return c;
}

GameConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GameError(ErrorCode::ConfigError, "cannot open configuration " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw GameError(ErrorCode::ConfigError, path.string() + ": " + ex.what());
    }
    return config_from_json(doc, default_config(), path.parent_path());
}

GameResources load_resources(const GameConfig& config) {
    GameResources r;
    try {
        r.tileset = std::make_shared<const TileSet>(load_tileset_file(config.tileset_path));
        r.pool = std::make_shared<const WordPool>(build_pool(load_word_frequencies(config.wordfreq_path)));
        r.affinity = std::make_shared<const AffinityTable>(AffinityTable::from_file(config.affinity_path));
    } catch (const GameError& e) {
        throw GameError(ErrorCode::ConfigError, e.what());
    }
    if (!r.pool->vocabulary().contains(config.starting_word)) {
        throw GameError(ErrorCode::ConfigError, "starting word '" + config.starting_word + "' is not in the pool");
    }
    return r;
}

Generator make_generator(const GameConfig& config, const GameResources& resources) {
    auto local = std::make_shared<LocalGenerator>(resources.affinity);
    std::shared_ptr<GeneratorBackend> remote;
    if (config.generator.mode != GeneratorMode::Local) {
        remote = std::make_shared<RemoteGenerator>(RemoteEndpoint{config.generator.url, config.generator.timeout_ms});
    }
    return Generator(local, remote, config.generator.mode);
}

} // namespace godgame
