#include "godgame/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace godgame {

namespace {

constexpr double kEps = 1e-9;
constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {-1, 0, 1, 0};

int64_t to_ticks(double seconds, double tick_seconds) {
    return std::max<int64_t>(1, std::llround(seconds / tick_seconds));
}

TileId grass_tile(const TileSet& tiles) {
    return tiles.first_of(TileCategory::Grass).value_or(TileId{});
}

void log_event(GameState& s, std::string kind, int subject, std::string detail = {}) {
    s.events.push_back({s.tick, std::move(kind), subject, std::move(detail)});
}

// --- movement -------------------------------------------------------------

// Moves along the planned centres for dt seconds. Speed is sampled from the
// cell being traversed and re-sampled at every cell boundary.
void advance(Vec2& pos, Motion& m, double base_speed, double dt, const World& world, const TileSet& tiles) {
    while (m.active()) {
        const Vec2 target = cell_centre(m.path[m.next]);
        const double dx = target.x - pos.x;
        const double dy = target.y - pos.y;
        const double dist = std::abs(dx) + std::abs(dy);
        if (dist <= kEps) {
            pos = target;
            ++m.next;
            continue;
        }
        if (dt <= 1e-12) break;

        const bool horizontal = std::abs(dx) >= std::abs(dy);
        const double sign = (horizontal ? dx : dy) > 0 ? 1.0 : -1.0;
        double& coord = horizontal ? pos.x : pos.y;
        const double lead = coord + sign * kEps;
        const int lead_cell = static_cast<int>(std::floor(lead));
        const Cell cur = horizontal ? Cell{lead_cell, static_cast<int>(std::floor(pos.y))}
                                    : Cell{static_cast<int>(std::floor(pos.x)), lead_cell};
        const double speed = base_speed * tiles[world.at(cur)].speed_multiplier;
        const double boundary = sign > 0 ? lead_cell + 1.0 : static_cast<double>(lead_cell);
        const double axis_dist = std::abs(horizontal ? dx : dy);
        const double to_boundary = std::abs(boundary - coord);

        const bool boundary_first = to_boundary < axis_dist - kEps;
        const double seg = boundary_first ? to_boundary : axis_dist;
        const double reach = speed * dt;
        if (reach + kEps >= seg) {
            dt -= seg / speed;
            if (boundary_first) {
                coord = boundary;
            } else {
                coord = horizontal ? target.x : target.y;
            }
        } else {
            coord += sign * reach;
            dt = 0;
        }
    }
}

enum class Route { Unreachable, Moving, Arrived };

template <typename Plan>
Route follow(GameState& s, Vec2& pos, Motion& m, Cell goal, double base_speed, Plan&& plan) {
    if (!m.goal || *m.goal != goal) {
        std::optional<Path> p = plan(cell_at(pos));
        if (!p) {
            m.clear();
            return Route::Unreachable;
        }
        m.path = std::move(p->cells);
        m.next = 0;
        m.goal = goal;
    }
    advance(pos, m, base_speed, s.config.clock.tick_seconds, s.world, s.tileset());
    return m.active() ? Route::Moving : Route::Arrived;
}

// --- spawning helpers -------------------------------------------------------

template <typename Pred>
std::optional<Cell> ring_search(Cell origin, Pred&& ok) {
    for (int d = 0; d <= 2 * kWorldSize; ++d) {
        for (int y = origin.y - d; y <= origin.y + d; ++y) {
            const int rx = d - std::abs(y - origin.y);
            const Cell a{origin.x - rx, y};
            if (in_world(a) && ok(a)) return a;
            const Cell b{origin.x + rx, y};
            if (rx != 0 && in_world(b) && ok(b)) return b;
        }
    }
    return std::nullopt;
}

std::optional<Cell> nearest_walkable_in_grid(const World& world, const TileSet& tiles, int grid_index, Cell origin) {
    return ring_search(origin, [&](Cell c) { return grid_of(c) == grid_index && tiles.walkable(world.at(c)); });
}

Cell grid_centre(int grid_index) {
    const Cell o = grid_origin(grid_index);
    return {o.x + kSubGridSize / 2, o.y + kSubGridSize / 2};
}

int count_minions(const GameState& s, int grid_index) {
    return static_cast<int>(std::count_if(s.monsters.begin(), s.monsters.end(), [&](const Monster& m) {
        return m.kind == MonsterKind::Minion && m.grid_index == grid_index;
    }));
}

Monster make_monster(GameState& s, MonsterKind kind, int grid_index, Cell at) {
    const auto& mc = s.config.monster;
    Monster m;
    m.id = s.next_id++;
    m.kind = kind;
    m.hp = m.max_hp = kind == MonsterKind::Boss ? mc.boss_hp : mc.minion_hp;
    m.grid_index = grid_index;
    m.pos = cell_centre(at);
    m.anchor = at;
    m.spawned_tick = s.tick;
    return m;
}

void spawn_boss(GameState& s, int grid_index) {
    const Cell centre = grid_centre(grid_index);
    const Cell at = nearest_walkable_in_grid(s.world, s.tileset(), grid_index, centre).value_or(centre);
    s.monsters.push_back(make_monster(s, MonsterKind::Boss, grid_index, at));
    s.world.set_boss_occupied(grid_index, true);
    s.minion_timers[static_cast<size_t>(grid_index)] = 0;
    ++s.stats.bosses_spawned;
    log_event(s, "boss_spawned", s.monsters.back().id, std::to_string(grid_index));
}

void spawn_villager(GameState& s, VillagerKind kind, Cell at) {
    Villager v;
    v.id = s.next_id++;
    v.kind = kind;
    v.hp = v.max_hp = s.config.villager.max_hp;
    v.pos = cell_centre(at);
    s.villagers.push_back(std::move(v));
}

void add_xp(GameState& s, Villager& v, int amount) {
    v.xp += amount;
    const int per_level = s.config.villager.xp_per_level;
    while (v.xp >= per_level * v.level) {
        v.xp -= per_level * v.level;
        ++v.level;
        log_event(s, "level_up", v.id, std::to_string(v.level));
    }
}

double attack_range(const VillagerConfig& c, VillagerKind kind) {
    return kind == VillagerKind::Archer ? c.archer_range : c.melee_range;
}

double villager_dps(const VillagerConfig& c, VillagerKind kind) {
    switch (kind) {
    case VillagerKind::Fighter: return c.fighter_dps;
    case VillagerKind::Archer: return c.archer_dps;
    case VillagerKind::Worker: return c.worker_dps;
    }
    return 0.0;
}

double jitter(GameState& s) {
    const double j = s.config.combat_jitter;
    return j > 0 ? s.rng.combat.uniform_real(1.0 - j, 1.0 + j) : 1.0;
}

// --- per-tick phases ----------------------------------------------------------

bool in_chop_reach(Cell at, Cell tree) { return manhattan(at, tree) <= 1; }

void run_task(GameState& s, Villager& v) {
    const auto& tiles = s.tileset();
    const double speed = s.config.villager.move_speed;
    auto abandon = [&] {
        v.task = Task::idle();
        v.motion.clear();
        v.work_ticks = 0;
    };

    switch (v.task.kind) {
    case TaskKind::Idle:
        v.motion.clear();
        return;

    case TaskKind::MoveTo: {
        const Cell goal = v.task.cell;
        const Route r = follow(s, v.pos, v.motion, goal, speed, [&](Cell from) {
            return find_path(s.world, tiles, from, goal);
        });
        if (r != Route::Moving) abandon();
        return;
    }

    case TaskKind::Chop: {
        const Cell tree = v.task.cell;
        if (!tiles[s.world.at(tree)].choppable) {
            abandon();
            return;
        }
        if (!v.motion.active() && in_chop_reach(cell_at(v.pos), tree) && v.pos == cell_centre(cell_at(v.pos))) {
            v.motion.clear();
            const double secs = chop_duration_s(s.config.villager, v.level);
            if (++v.work_ticks >= to_ticks(secs, s.config.clock.tick_seconds)) {
                chop_resolution(s, v.id, tree);
                abandon();
            }
            return;
        }
        const Route r = follow(s, v.pos, v.motion, tree, speed, [&](Cell from) {
            return find_path_to_nearest(s.world, tiles, from, [&](Cell c) { return c == tree; }, true);
        });
        if (r == Route::Unreachable) abandon();
        return;
    }

    case TaskKind::Collect: {
        const Cell ball = v.task.cell;
        if (!tiles[s.world.at(ball)].grants_treasure) {
            abandon();
            return;
        }
        const Route r = follow(s, v.pos, v.motion, ball, speed, [&](Cell from) {
            return find_path(s.world, tiles, from, ball);
        });
        if (r == Route::Unreachable) {
            abandon();
        } else if (r == Route::Arrived) {
            collect_treasure(s, v.id, ball);
            abandon();
        }
        return;
    }

    case TaskKind::Attack: {
        const Monster* m = s.find_monster(v.task.target);
        if (!m || m->hp <= 0) {
            abandon();
            return;
        }
        if (distance(v.pos, m->pos) <= attack_range(s.config.villager, v.kind)) {
            v.motion.clear();
            return;
        }
        const Cell goal = cell_at(m->pos);
        const Route r = follow(s, v.pos, v.motion, goal, speed, [&](Cell from) {
            return find_path(s.world, tiles, from, goal);
        });
        if (r == Route::Unreachable) abandon();
        return;
    }
    }
}

void villager_attacks(GameState& s) {
    const auto& vc = s.config.villager;
    const int64_t cd = to_ticks(vc.attack_cooldown_s, s.config.clock.tick_seconds);
    for (auto& v : s.villagers) {
        if (v.cooldown_ticks > 0) --v.cooldown_ticks;
        if (v.hp <= 0 || v.task.kind != TaskKind::Attack || v.cooldown_ticks > 0) continue;
        Monster* m = s.find_monster(v.task.target);
        if (!m || m->hp <= 0 || distance(v.pos, m->pos) > attack_range(vc, v.kind)) continue;
        const double dps = villager_dps(vc, v.kind);
        if (dps <= 0) continue;
        const double dmg = dps * vc.attack_cooldown_s * std::pow(vc.level_damage_factor, v.level - 1) * jitter(s);
        m->hp = std::max(0.0, m->hp - dmg);
        if (!std::binary_search(m->attackers.begin(), m->attackers.end(), v.id)) {
            m->attackers.insert(std::upper_bound(m->attackers.begin(), m->attackers.end(), v.id), v.id);
        }
        v.cooldown_ticks = cd;
    }
}

bool villager_in_grid(const Villager& v, int grid_index) {
    return v.hp > 0 && grid_of(cell_at(v.pos)) == grid_index;
}

void monster_phase(GameState& s) {
    const auto& mc = s.config.monster;
    const auto& tiles = s.tileset();
    const int64_t cd = to_ticks(mc.attack_cooldown_s, s.config.clock.tick_seconds);
    for (auto& m : s.monsters) {
        if (m.cooldown_ticks > 0) --m.cooldown_ticks;
        if (m.hp <= 0) continue;

        // Sticky target; re-acquire the nearest villager inside the home grid.
        const Villager* target = m.target ? s.find_villager(*m.target) : nullptr;
        if (!target || !villager_in_grid(*target, m.grid_index)) {
            target = nullptr;
            double best = 0;
            for (const auto& v : s.villagers) {
                if (!villager_in_grid(v, m.grid_index)) continue;
                const double d = distance(m.pos, v.pos);
                if (!target || d < best) {
                    target = &v;
                    best = d;
                }
            }
        }
        m.target = target ? std::optional<int>(target->id) : std::nullopt;

        const double speed = m.kind == MonsterKind::Boss ? mc.boss_speed : mc.minion_speed;
        auto in_home = [&](Cell c) { return grid_of(c) == m.grid_index; };
        if (!target) {
            follow(s, m.pos, m.motion, m.anchor, speed, [&](Cell from) {
                return find_path(s.world, tiles, from, m.anchor, in_home);
            });
            continue;
        }
        if (distance(m.pos, target->pos) > mc.melee_range) {
            const Cell goal = cell_at(target->pos);
            follow(s, m.pos, m.motion, goal, speed, [&](Cell from) {
                return find_path(s.world, tiles, from, goal, in_home);
            });
        } else {
            m.motion.clear();
        }
        if (m.cooldown_ticks == 0 && distance(m.pos, target->pos) <= mc.melee_range) {
            const double dps = m.kind == MonsterKind::Boss ? mc.boss_dps : mc.minion_dps;
            if (dps > 0) {
                Villager* v = s.find_villager(target->id);
                v->hp = std::max(0.0, v->hp - dps * mc.attack_cooldown_s * jitter(s));
                m.cooldown_ticks = cd;
            }
        }
    }
}

void heal(GameState& s) {
    const double amount = s.config.villager.flower_heal_per_s * s.config.clock.tick_seconds;
    for (auto& v : s.villagers) {
        if (v.hp <= 0 || v.hp >= v.max_hp) continue;
        if (s.tileset()[s.world.at(cell_at(v.pos))].heals) v.hp = std::min(v.max_hp, v.hp + amount);
    }
}

void remove_dead(GameState& s) {
    for (const auto& v : s.villagers) {
        if (v.hp <= 0) {
            ++s.stats.villager_deaths;
            log_event(s, "villager_died", v.id);
        }
    }
    std::erase_if(s.villagers, [](const Villager& v) { return v.hp <= 0; });

    std::vector<int> cleared_grids;
    for (const auto& m : s.monsters) {
        if (m.hp > 0) continue;
        for (int id : m.attackers) {
            if (Villager* v = s.find_villager(id)) add_xp(s, *v, s.config.villager.xp_per_task);
        }
        if (m.kind == MonsterKind::Boss) {
            ++s.stats.bosses_killed;
            cleared_grids.push_back(m.grid_index);
            log_event(s, "boss_killed", m.id, std::to_string(m.grid_index));
        } else {
            ++s.stats.minions_killed;
            log_event(s, "minion_killed", m.id, std::to_string(m.grid_index));
        }
    }
    std::erase_if(s.monsters, [](const Monster& m) { return m.hp <= 0; });

    // A dead boss takes its minions with it.
    for (int g : cleared_grids) {
        s.world.set_boss_occupied(g, false);
        s.minion_timers[static_cast<size_t>(g)] = 0;
        for (const auto& m : s.monsters) {
            if (m.kind == MonsterKind::Minion && m.grid_index == g) log_event(s, "minion_despawned", m.id);
        }
        std::erase_if(s.monsters, [g](const Monster& m) { return m.kind == MonsterKind::Minion && m.grid_index == g; });
    }
}

void boss_spawn_phase(GameState& s) {
    if (s.tick % s.boss_interval_ticks() != 0) return;
    std::vector<int> free;
    for (int g = 0; g < kGridCount; ++g) {
        if (!s.world.boss_occupied(g)) free.push_back(g);
    }
    if (free.empty()) return;
    spawn_boss(s, free[s.rng.spawn.uniform_below(free.size())]);
}

void minion_phase(GameState& s) {
    const int64_t interval = to_ticks(minion_scaling(s.elapsed_s(), s.config.monster), s.config.clock.tick_seconds);
    // Snapshot the bosses first; spawning appends to the monster list.
    std::vector<std::pair<int, Vec2>> bosses;
    for (const auto& m : s.monsters) {
        if (m.kind == MonsterKind::Boss) bosses.emplace_back(m.grid_index, m.pos);
    }
    for (const auto& [g, boss_pos] : bosses) {
        auto& timer = s.minion_timers[static_cast<size_t>(g)];
        const bool present = std::any_of(s.villagers.begin(), s.villagers.end(),
                                         [g = g](const Villager& v) { return villager_in_grid(v, g); });
        if (!present) {
            timer = 0;
            continue;
        }
        if (timer > 0) --timer;
        if (timer > 0 || count_minions(s, g) >= s.config.monster.max_minions_per_grid) continue;
        const Cell from = cell_at(boss_pos);
        const Cell at = nearest_walkable_in_grid(s.world, s.tileset(), g, from).value_or(from);
        s.monsters.push_back(make_monster(s, MonsterKind::Minion, g, at));
        ++s.stats.minions_spawned;
        log_event(s, "minion_spawned", s.monsters.back().id, std::to_string(g));
        timer = interval;
    }
}

void tick_once(GameState& s) {
    for (auto& v : s.villagers) run_task(s, v);
    villager_attacks(s);
    monster_phase(s);
    heal(s);
    remove_dead(s);
    ++s.tick;
    if (s.tick % s.day_ticks() == 0) day_rollover(s);
    boss_spawn_phase(s);
    minion_phase(s);
    s.outcome = check_end(s);
    if (s.outcome != Outcome::Ongoing) {
        log_event(s, "game_over", 0, std::string(outcome_name(s.outcome)));
    }
}

} // namespace

// --- small helpers -----------------------------------------------------------

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Cell cell_at(Vec2 p) {
    const int x = std::clamp(static_cast<int>(std::floor(p.x)), 0, kWorldSize - 1);
    const int y = std::clamp(static_cast<int>(std::floor(p.y)), 0, kWorldSize - 1);
    return {x, y};
}

std::string_view villager_kind_name(VillagerKind kind) {
    switch (kind) {
    case VillagerKind::Fighter: return "fighter";
    case VillagerKind::Archer: return "archer";
    case VillagerKind::Worker: return "worker";
    }
    return "?";
}

std::optional<VillagerKind> parse_villager_kind(std::string_view name) {
    for (auto k : {VillagerKind::Fighter, VillagerKind::Archer, VillagerKind::Worker}) {
        if (villager_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view task_kind_name(TaskKind kind) {
    switch (kind) {
    case TaskKind::Idle: return "idle";
    case TaskKind::MoveTo: return "move";
    case TaskKind::Chop: return "chop";
    case TaskKind::Attack: return "attack";
    case TaskKind::Collect: return "collect";
    }
    return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view name) {
    for (auto k : {TaskKind::Idle, TaskKind::MoveTo, TaskKind::Chop, TaskKind::Attack, TaskKind::Collect}) {
        if (task_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view monster_kind_name(MonsterKind kind) { return kind == MonsterKind::Boss ? "boss" : "minion"; }

std::optional<MonsterKind> parse_monster_kind(std::string_view name) {
    if (name == "boss") return MonsterKind::Boss;
    if (name == "minion") return MonsterKind::Minion;
    return std::nullopt;
}

std::string_view outcome_name(Outcome outcome) {
    switch (outcome) {
    case Outcome::Ongoing: return "ongoing";
    case Outcome::Win: return "win";
    case Outcome::Lose: return "lose";
    }
    return "?";
}

std::optional<Outcome> parse_outcome(std::string_view name) {
    for (auto o : {Outcome::Ongoing, Outcome::Win, Outcome::Lose}) {
        if (outcome_name(o) == name) return o;
    }
    return std::nullopt;
}

// --- GameState ----------------------------------------------------------------

int64_t GameState::day_ticks() const { return to_ticks(config.clock.day_length_s, config.clock.tick_seconds); }

int64_t GameState::boss_interval_ticks() const {
    return to_ticks(config.clock.boss_interval_s, config.clock.tick_seconds);
}

int64_t GameState::boss_timer_remaining() const {
    const int64_t period = boss_interval_ticks();
    return period - tick % period;
}

const Villager* GameState::find_villager(int id) const {
    auto it = std::lower_bound(villagers.begin(), villagers.end(), id,
                               [](const Villager& v, int key) { return v.id < key; });
    return it != villagers.end() && it->id == id ? &*it : nullptr;
}

Villager* GameState::find_villager(int id) {
    return const_cast<Villager*>(std::as_const(*this).find_villager(id));
}

const Monster* GameState::find_monster(int id) const {
    auto it = std::lower_bound(monsters.begin(), monsters.end(), id,
                               [](const Monster& m, int key) { return m.id < key; });
    return it != monsters.end() && it->id == id ? &*it : nullptr;
}

Monster* GameState::find_monster(int id) { return const_cast<Monster*>(std::as_const(*this).find_monster(id)); }

int GameState::bosses_alive() const {
    return static_cast<int>(std::count_if(monsters.begin(), monsters.end(),
                                          [](const Monster& m) { return m.kind == MonsterKind::Boss; }));
}

bool GameState::operator==(const GameState& o) const {
    const bool same_tiles = tiles == o.tiles || (tiles && o.tiles && *tiles == *o.tiles);
    return same_tiles && config == o.config && seed == o.seed && tick == o.tick && world == o.world &&
           rock == o.rock && water == o.water && villagers == o.villagers && monsters == o.monsters &&
           inventory == o.inventory && pool == o.pool && pending_house_spawns == o.pending_house_spawns &&
           minion_timers == o.minion_timers && rng == o.rng && outcome == o.outcome && receipts == o.receipts &&
           events == o.events && stats == o.stats && next_id == o.next_id;
}

// --- operations ---------------------------------------------------------------

GameState new_game(const GameConfig& config, const GameResources& resources, uint64_t seed) {
    validate_config(config);
    if (!resources.tileset || !resources.pool) throw GameError(ErrorCode::ConfigError, "resources not loaded");

    GameState s;
    s.config = config;
    s.tiles = resources.tileset;
    s.seed = seed;
    s.pool = *resources.pool;
    s.inventory = WordInventory(s.pool.shared_vocabulary());
    s.rng = {Rng(derive_seed(seed, "gacha")), Rng(derive_seed(seed, "spawn")), Rng(derive_seed(seed, "combat")),
             Rng(derive_seed(seed, "generation"))};

    const TileId grass = grass_tile(s.tileset());
    for (int g = 0; g < kGridCount; ++g) s.world.place(g, TileGrid::filled(grass));
    s.rock = rock_heights(s.world, s.tileset());
    s.water = water_masks(s.world, s.tileset());

    const Cell c = grid_centre(config.start_grid);
    spawn_villager(s, VillagerKind::Fighter, {c.x - 1, c.y});
    spawn_villager(s, VillagerKind::Archer, c);
    spawn_villager(s, VillagerKind::Worker, {c.x + 1, c.y});
    spawn_boss(s, config.initial_boss_grid);

    try {
        s.inventory.grant(config.starting_word);
    } catch (const GameError& e) {
        throw GameError(ErrorCode::ConfigError, e.what());
    }
    s.stats.words_gained = 1;
    return s;
}

GameState new_game(const GameConfig& config, uint64_t seed) {
    validate_config(config);
    return new_game(config, load_resources(config), seed);
}

void step(GameState& state, int64_t n_ticks) {
    for (int64_t i = 0; i < n_ticks && state.outcome == Outcome::Ongoing; ++i) tick_once(state);
}

void assign_task(GameState& state, int villager_id, const Task& task) {
    Villager* v = state.find_villager(villager_id);
    if (!v) throw GameError(ErrorCode::UnknownVillager, "no villager with id " + std::to_string(villager_id));
    const auto& tiles = state.tileset();
    switch (task.kind) {
    case TaskKind::Idle:
        break;
    case TaskKind::MoveTo:
        if (!in_world(task.cell) || !tiles.walkable(state.world.at(task.cell))) {
            throw GameError(ErrorCode::IllegalTask, "move target is not a walkable world cell");
        }
        break;
    case TaskKind::Chop:
        if (v->kind != VillagerKind::Worker) throw GameError(ErrorCode::IllegalTask, "only workers chop trees");
        if (!in_world(task.cell) || !tiles[state.world.at(task.cell)].choppable) {
            throw GameError(ErrorCode::NotChoppable, "chop target is not a tree");
        }
        break;
    case TaskKind::Collect:
        if (!in_world(task.cell) || !tiles[state.world.at(task.cell)].grants_treasure) {
            throw GameError(ErrorCode::NothingToCollect, "collect target is not a treasure ball");
        }
        break;
    case TaskKind::Attack:
        if (v->kind == VillagerKind::Worker) throw GameError(ErrorCode::IllegalTask, "workers do not fight");
        if (!state.find_monster(task.target)) {
            throw GameError(ErrorCode::UnknownMonster, "no monster with id " + std::to_string(task.target));
        }
        break;
    }
    v->task = task;
    v->motion.clear();
    v->work_ticks = 0;
}

double chop_duration_s(const VillagerConfig& c, int level) {
    return std::max(c.chop_min_s, c.chop_duration_s * std::pow(c.chop_level_factor, level - 1));
}

void chop_resolution(GameState& s, int villager_id, Cell cell) {
    Villager* v = s.find_villager(villager_id);
    if (!v) throw GameError(ErrorCode::UnknownVillager, "no villager with id " + std::to_string(villager_id));
    if (v->kind != VillagerKind::Worker) throw GameError(ErrorCode::IllegalTask, "only workers chop trees");
    if (!in_world(cell) || !s.tileset()[s.world.at(cell)].choppable) {
        throw GameError(ErrorCode::NotChoppable, "cell is not a tree");
    }
    s.world.set(cell, grass_tile(s.tileset()));
    const DrawOutcome draw = s.pool.draw(s.rng.gacha);
    s.inventory.grant(draw.word);
    ++s.stats.words_gained;
    ++s.stats.trees_chopped;
    log_event(s, "word_drawn", v->id, draw.word);
    add_xp(s, *v, s.config.villager.xp_per_task);
}

void collect_treasure(GameState& s, int villager_id, Cell cell) {
    if (!s.find_villager(villager_id)) {
        throw GameError(ErrorCode::UnknownVillager, "no villager with id " + std::to_string(villager_id));
    }
    if (!in_world(cell) || !s.tileset()[s.world.at(cell)].grants_treasure) {
        throw GameError(ErrorCode::NothingToCollect, "no treasure at this cell");
    }
    s.world.set(cell, grass_tile(s.tileset()));
    const auto words = s.pool.draw_treasure(s.rng.gacha);
    std::string detail;
    for (const auto& w : words) {
        s.inventory.grant(w);
        detail += detail.empty() ? w : "," + w;
    }
    s.stats.words_gained += static_cast<int64_t>(words.size());
    ++s.stats.treasures_collected;
    log_event(s, "treasure_collected", villager_id, detail);
}

void day_rollover(GameState& s) {
    std::vector<Cell> houses;
    if (s.config.houses_respawn_daily) {
        for (int y = 0; y < kWorldSize; ++y) {
            for (int x = 0; x < kWorldSize; ++x) {
                if (s.tileset()[s.world.at(x, y)].spawns_villager) houses.push_back({x, y});
            }
        }
    } else {
        houses = std::move(s.pending_house_spawns);
    }
    s.pending_house_spawns.clear();
    for (Cell h : houses) {
        const auto kind = static_cast<VillagerKind>(s.rng.spawn.uniform_below(3));
        const auto at = nearest_open_cell(s.world, s.tileset(), h);
        if (!at) break;
        spawn_villager(s, kind, *at);
        ++s.stats.villagers_spawned;
        log_event(s, "villager_spawned", s.villagers.back().id, std::string(villager_kind_name(kind)));
    }
}

Outcome check_end(const GameState& s) {
    if (s.outcome != Outcome::Ongoing) return s.outcome;
    if (s.world.occupied_count() == kGridCount) return Outcome::Lose;
    if (s.stats.bosses_killed >= 1 && s.bosses_alive() == 0) return Outcome::Win;
    return Outcome::Ongoing;
}

double minion_scaling(double elapsed_s, const MonsterConfig& c) {
    return std::max(c.minion_min_interval_s, c.minion_base_interval_s * std::pow(c.minion_decay, elapsed_s / 120.0));
}

std::optional<Cell> nearest_open_cell(const World& world, const TileSet& tiles, Cell origin) {
    // Label the largest 4-connected walkable region; ties go to the region
    // whose first cell comes first in row-major order.
    std::array<int, kWorldCells> label;
    label.fill(-1);
    int best = -1;
    size_t best_size = 0;
    int next_label = 0;
    for (int start = 0; start < kWorldCells; ++start) {
        const Cell sc{start % kWorldSize, start / kWorldSize};
        if (label[static_cast<size_t>(start)] != -1 || !tiles.walkable(world.at(sc))) continue;
        const int id = next_label++;
        size_t size = 0;
        std::queue<Cell> q;
        q.push(sc);
        label[static_cast<size_t>(start)] = id;
        while (!q.empty()) {
            const Cell c = q.front();
            q.pop();
            ++size;
            for (int k = 0; k < 4; ++k) {
                const Cell n{c.x + kDx[k], c.y + kDy[k]};
                const auto ni = static_cast<size_t>(n.y * kWorldSize + n.x);
                if (in_world(n) && label[ni] == -1 && tiles.walkable(world.at(n))) {
                    label[ni] = id;
                    q.push(n);
                }
            }
        }
        if (size > best_size) {
            best_size = size;
            best = id;
        }
    }
    if (best < 0) return std::nullopt;
    return ring_search(origin, [&](Cell c) { return label[static_cast<size_t>(c.y * kWorldSize + c.x)] == best; });
}

void apply_placement(GameState& s, int grid_index, const TileGrid& grid) {
    const auto& tiles = s.tileset();
    s.world.place(grid_index, grid);
    update_rock_heights(s.rock, s.world, tiles, grid_index);
    update_water_masks(s.water, s.world, tiles, grid_index);

    std::erase_if(s.pending_house_spawns, [&](Cell c) { return grid_of(c) == grid_index; });
    const Cell o = grid_origin(grid_index);
    for (int y = 0; y < kSubGridSize; ++y) {
        for (int x = 0; x < kSubGridSize; ++x) {
            if (tiles[grid.at(x, y)].spawns_villager) s.pending_house_spawns.push_back({o.x + x, o.y + y});
        }
    }

    for (auto& v : s.villagers) {
        v.motion.clear();
        const Cell at = cell_at(v.pos);
        if (tiles.walkable(s.world.at(at))) continue;
        if (const auto to = nearest_open_cell(s.world, tiles, at)) {
            v.pos = cell_centre(*to);
            v.work_ticks = 0;
        }
    }
    for (auto& m : s.monsters) m.motion.clear();
}

std::vector<std::string> check_invariants(const GameState& s) {
    std::vector<std::string> out;
    const auto& tiles = s.tileset();
    int prev = 0;
    for (const auto& v : s.villagers) {
        const std::string who = "villager " + std::to_string(v.id);
        if (v.id <= prev) out.push_back(who + ": ids not ascending");
        prev = v.id;
        if (!tiles.walkable(s.world.at(cell_at(v.pos)))) out.push_back(who + ": on an unwalkable cell");
        if (v.hp < 0 || v.hp > v.max_hp) out.push_back(who + ": hp outside [0, max_hp]");
        if (v.level < 1 || v.xp < 0) out.push_back(who + ": bad level or xp");
        if (v.kind == VillagerKind::Worker && v.task.kind == TaskKind::Attack) out.push_back(who + ": worker attacking");
        if (v.kind != VillagerKind::Worker && v.task.kind == TaskKind::Chop) out.push_back(who + ": non-worker chopping");
    }
    std::array<int, kGridCount> bosses{};
    prev = 0;
    for (const auto& m : s.monsters) {
        if (m.id <= prev) out.push_back("monster ids not ascending");
        prev = m.id;
        if (m.kind == MonsterKind::Boss) ++bosses[static_cast<size_t>(m.grid_index)];
    }
    for (int g = 0; g < kGridCount; ++g) {
        const int n = bosses[static_cast<size_t>(g)];
        if (n > 1) out.push_back("grid " + std::to_string(g) + " holds more than one boss");
        if ((n == 1) != s.world.boss_occupied(g)) out.push_back("grid " + std::to_string(g) + " occupation mismatch");
    }
    if (s.bosses_alive() + s.stats.bosses_killed != s.stats.bosses_spawned) out.push_back("boss accounting broken");
    if (static_cast<int64_t>(s.villagers.size()) != 3 + s.stats.villagers_spawned - s.stats.villager_deaths) {
        out.push_back("villager population accounting broken");
    }
    if (static_cast<int64_t>(s.inventory.total()) != s.stats.words_gained - s.stats.words_spent) {
        out.push_back("word accounting broken");
    }
    if (s.stats.words_gained != s.stats.trees_chopped + 5 * s.stats.treasures_collected + 1) {
        out.push_back("word sources do not add up");
    }
    return out;
}

} // namespace godgame
