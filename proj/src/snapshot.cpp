#include "godgame/snapshot.hpp"

#include "godgame/rng.hpp"

#include <cstdio>

namespace godgame {

using nlohmann::json;

namespace {

json matrix_json(const std::array<std::array<int, kWorldSize>, kWorldSize>& m) {
    json rows = json::array();
    for (const auto& r : m) rows.push_back(r);
    return rows;
}

void matrix_from(const json& j, std::array<std::array<int, kWorldSize>, kWorldSize>& m, const char* what) {
    if (!j.is_array() || j.size() != kWorldSize) throw GameError(ErrorCode::ParseError, std::string(what) + " must have 40 rows");
    for (size_t y = 0; y < kWorldSize; ++y) {
        const auto& row = j[y];
        if (!row.is_array() || row.size() != kWorldSize) {
            throw GameError(ErrorCode::ParseError, std::string(what) + " rows must have 40 cells");
        }
        for (size_t x = 0; x < kWorldSize; ++x) m[y][x] = row[x].get<int>();
    }
}

json vec_json(Vec2 p) { return json::array({p.x, p.y}); }

json cell_json(Cell c) { return json::array({c.x, c.y}); }

json motion_json(const Motion& m) {
    json path = json::array();
    for (Cell c : m.path) path.push_back(cell_json(c));
    return {{"path", path}, {"next", m.next}, {"goal", m.goal ? cell_json(*m.goal) : json()}};
}

template <typename E, typename Parse>
E enum_from(const json& j, Parse parse, const char* what) {
    const auto v = parse(j.get<std::string>());
    if (!v) throw GameError(ErrorCode::ParseError, std::string("unknown ") + what + " '" + j.get<std::string>() + "'");
    return *v;
}

} // namespace

json task_to_json(const Task& t) {
    json j = {{"kind", std::string(task_kind_name(t.kind))}};
    switch (t.kind) {
    case TaskKind::Idle: break;
    case TaskKind::Attack: j["target"] = t.target; break;
    default:
        j["x"] = t.cell.x;
        j["y"] = t.cell.y;
        break;
    }
    return j;
}

Task task_from_json(const json& j) {
    Task t;
    t.kind = enum_from<TaskKind>(j.at("kind"), parse_task_kind, "task");
    if (t.kind == TaskKind::Attack) t.target = j.at("target").get<int>();
    if (t.kind == TaskKind::MoveTo || t.kind == TaskKind::Chop || t.kind == TaskKind::Collect) {
        t.cell = {j.at("x").get<int>(), j.at("y").get<int>()};
    }
    return t;
}

StateSnapshot make_snapshot(const GameState& s) {
    StateSnapshot out;
    out.tick = s.tick;
    out.elapsed_s = s.elapsed_s();
    out.outcome = s.outcome;
    out.day_index = s.day_index();
    out.boss_timer_remaining = s.boss_timer_remaining();
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) {
            const auto yi = static_cast<size_t>(y);
            const auto xi = static_cast<size_t>(x);
            out.cells[yi][xi] = s.world.at(x, y).value();
            out.rock[yi][xi] = s.rock.at({x, y});
            out.water[yi][xi] = s.water.at({x, y});
        }
    }
    for (int g = 0; g < kGridCount; ++g) out.boss_occupied[static_cast<size_t>(g)] = s.world.boss_occupied(g);
    for (const auto& v : s.villagers) out.villagers.push_back({v.id, v.kind, v.hp, v.max_hp, v.level, v.xp, v.pos, v.task});
    for (const auto& m : s.monsters) out.monsters.push_back({m.id, m.kind, m.hp, m.max_hp, m.grid_index, m.pos, m.target});
    for (const auto& [w, n] : s.inventory.counts()) out.inventory.emplace(w, n);
    out.pending_house_spawns = static_cast<int64_t>(s.pending_house_spawns.size());
    out.bosses_killed = s.stats.bosses_killed;
    out.receipts = static_cast<int64_t>(s.receipts.size());
    return out;
}

json snapshot_to_json(const StateSnapshot& s) {
    json villagers = json::array();
    for (const auto& v : s.villagers) {
        villagers.push_back({{"id", v.id},
                             {"kind", std::string(villager_kind_name(v.kind))},
                             {"hp", v.hp},
                             {"max_hp", v.max_hp},
                             {"level", v.level},
                             {"xp", v.xp},
                             {"x", v.pos.x},
                             {"y", v.pos.y},
                             {"task", task_to_json(v.task)}});
    }
    json monsters = json::array();
    for (const auto& m : s.monsters) {
        monsters.push_back({{"id", m.id},
                            {"kind", std::string(monster_kind_name(m.kind))},
                            {"hp", m.hp},
                            {"max_hp", m.max_hp},
                            {"grid_index", m.grid_index},
                            {"x", m.pos.x},
                            {"y", m.pos.y},
                            {"target", m.target ? json(*m.target) : json()}});
    }
    json occupied = json::array();
    for (bool b : s.boss_occupied) occupied.push_back(b);
    return {
        {"tick", s.tick},
        {"elapsed_s", s.elapsed_s},
        {"outcome", std::string(outcome_name(s.outcome))},
        {"day_index", s.day_index},
        {"boss_timer_remaining", s.boss_timer_remaining},
        {"cells", matrix_json(s.cells)},
        {"rock_heights", matrix_json(s.rock)},
        {"water_masks", matrix_json(s.water)},
        {"boss_occupied", occupied},
        {"villagers", villagers},
        {"monsters", monsters},
        {"inventory", s.inventory},
        {"pending_house_spawns", s.pending_house_spawns},
        {"bosses_killed", s.bosses_killed},
        {"receipts", s.receipts},
    };
}

StateSnapshot snapshot_from_json(const json& j) {
    StateSnapshot s;
    try {
        s.tick = j.at("tick").get<int64_t>();
        s.elapsed_s = j.at("elapsed_s").get<double>();
        s.outcome = enum_from<Outcome>(j.at("outcome"), parse_outcome, "outcome");
        s.day_index = j.at("day_index").get<int64_t>();
        s.boss_timer_remaining = j.at("boss_timer_remaining").get<int64_t>();
        matrix_from(j.at("cells"), s.cells, "cells");
        matrix_from(j.at("rock_heights"), s.rock, "rock_heights");
        matrix_from(j.at("water_masks"), s.water, "water_masks");
        const auto& occ = j.at("boss_occupied");
        if (!occ.is_array() || occ.size() != kGridCount) throw GameError(ErrorCode::ParseError, "boss_occupied must have 16 entries");
        for (size_t g = 0; g < kGridCount; ++g) s.boss_occupied[g] = occ[g].get<bool>();
        for (const auto& v : j.at("villagers")) {
            s.villagers.push_back({v.at("id").get<int>(),
                                   enum_from<VillagerKind>(v.at("kind"), parse_villager_kind, "villager kind"),
                                   v.at("hp").get<double>(), v.at("max_hp").get<double>(), v.at("level").get<int>(),
                                   v.at("xp").get<int>(), {v.at("x").get<double>(), v.at("y").get<double>()},
                                   task_from_json(v.at("task"))});
        }
        for (const auto& m : j.at("monsters")) {
            const auto& t = m.at("target");
            s.monsters.push_back({m.at("id").get<int>(),
                                  enum_from<MonsterKind>(m.at("kind"), parse_monster_kind, "monster kind"),
                                  m.at("hp").get<double>(), m.at("max_hp").get<double>(),
                                  m.at("grid_index").get<int>(), {m.at("x").get<double>(), m.at("y").get<double>()},
                                  t.is_null() ? std::nullopt : std::optional<int>(t.get<int>())});
        }
        s.inventory = j.at("inventory").get<std::map<std::string, uint32_t>>();
        s.pending_house_spawns = j.at("pending_house_spawns").get<int64_t>();
        s.bosses_killed = j.at("bosses_killed").get<int64_t>();
        s.receipts = j.at("receipts").get<int64_t>();
    } catch (const json::exception& e) {
        throw GameError(ErrorCode::ParseError, std::string("bad snapshot: ") + e.what());
    }
    return s;
}

json state_to_json(const GameState& s) {
    json villagers = json::array();
    for (const auto& v : s.villagers) {
        villagers.push_back({{"id", v.id},
                             {"kind", std::string(villager_kind_name(v.kind))},
                             {"hp", v.hp},
                             {"max_hp", v.max_hp},
                             {"level", v.level},
                             {"xp", v.xp},
                             {"pos", vec_json(v.pos)},
                             {"task", task_to_json(v.task)},
                             {"motion", motion_json(v.motion)},
                             {"work_ticks", v.work_ticks},
                             {"cooldown_ticks", v.cooldown_ticks}});
    }
    json monsters = json::array();
    for (const auto& m : s.monsters) {
        monsters.push_back({{"id", m.id},
                            {"kind", std::string(monster_kind_name(m.kind))},
                            {"hp", m.hp},
                            {"max_hp", m.max_hp},
                            {"grid_index", m.grid_index},
                            {"pos", vec_json(m.pos)},
                            {"anchor", cell_json(m.anchor)},
                            {"target", m.target ? json(*m.target) : json()},
                            {"motion", motion_json(m.motion)},
                            {"cooldown_ticks", m.cooldown_ticks},
                            {"spawned_tick", m.spawned_tick},
                            {"attackers", m.attackers}});
    }
    json receipts = json::array();
    for (const auto& r : s.receipts) receipts.push_back(receipt_to_json(r));
    json events = json::array();
    for (const auto& e : s.events) events.push_back({e.tick, e.kind, e.subject, e.detail});
    json pending = json::array();
    for (Cell c : s.pending_house_spawns) pending.push_back(cell_json(c));
    const auto& st = s.stats;
    const StateSnapshot snap = make_snapshot(s);
    return {
        {"config", config_to_json(s.config)},
        {"seed", s.seed},
        {"tick", s.tick},
        {"outcome", std::string(outcome_name(s.outcome))},
        {"cells", matrix_json(snap.cells)},
        {"rock_heights", matrix_json(snap.rock)},
        {"water_masks", matrix_json(snap.water)},
        {"boss_occupied", snapshot_to_json(snap)["boss_occupied"]},
        {"villagers", villagers},
        {"monsters", monsters},
        {"inventory", snap.inventory},
        {"pool", s.pool.queue()},
        {"pending_house_spawns", pending},
        {"minion_timers", s.minion_timers},
        {"rng",
         {{"gacha", s.rng.gacha.serialize()},
          {"spawn", s.rng.spawn.serialize()},
          {"combat", s.rng.combat.serialize()},
          {"generation", s.rng.generation.serialize()}}},
        {"receipts", receipts},
        {"events", events},
        {"stats",
         {{"words_gained", st.words_gained},
          {"words_spent", st.words_spent},
          {"trees_chopped", st.trees_chopped},
          {"treasures_collected", st.treasures_collected},
          {"villagers_spawned", st.villagers_spawned},
          {"villager_deaths", st.villager_deaths},
          {"bosses_spawned", st.bosses_spawned},
          {"bosses_killed", st.bosses_killed},
          {"minions_spawned", st.minions_spawned},
          {"minions_killed", st.minions_killed}}},
        {"next_id", s.next_id},
    };
}

std::string state_digest(const GameState& state) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(state_to_json(state).dump())));
    return buf;
}

} // namespace godgame
