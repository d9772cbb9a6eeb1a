#include "godgame/runner.hpp"

#include "godgame/snapshot.hpp"
#include "godgame/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace godgame {

namespace {

int grid_distance(int a, int b) {
    return std::abs(a % kGridsPerSide - b % kGridsPerSide) + std::abs(a / kGridsPerSide - b / kGridsPerSide);
}

double share(const Affinity& a, const std::array<bool, kTileCount>& mask) {
    int64_t part = 0;
    int64_t total = 0;
    for (size_t i = 0; i < kTileCount; ++i) {
        total += a.weights[i];
        if (mask[i]) part += a.weights[i];
    }
    return total > 0 ? static_cast<double>(part) / static_cast<double>(total) : 0.0;
}

} // namespace

BaselineBot::BaselineBot(std::shared_ptr<const AffinityTable> affinity, const TileSet& tiles)
    : BaselineBot(std::move(affinity), tiles, Options{}) {}

BaselineBot::BaselineBot(std::shared_ptr<const AffinityTable> affinity, const TileSet& tiles, Options options)
    : affinity_(std::move(affinity)), options_(options) {
    for (const auto& t : tiles.tiles()) {
        const auto i = static_cast<size_t>(t.id.value());
        house_tile_[i] = t.spawns_villager;
        tree_tile_[i] = t.choppable;
        treasure_tile_[i] = t.grants_treasure;
    }
}

bool BaselineBot::is_house_word(std::string_view word) const {
    const Affinity* a = affinity_->find(word);
    return a && share(*a, house_tile_) >= options_.house_share;
}

bool BaselineBot::is_tree_word(std::string_view word) const {
    const Affinity* a = affinity_->find(word);
    return a && tree_tile_[static_cast<size_t>(a->dominant.value())];
}

bool BaselineBot::is_treasure_word(std::string_view word) const {
    const Affinity* a = affinity_->find(word);
    return a && share(*a, treasure_tile_) > 0.0;
}

std::optional<Command> BaselineBot::choose_terraform(const GameState& s) const {
    const auto& tiles = s.tileset();
    std::vector<std::string> house, tree, treasure;
    for (const auto& [w, n] : s.inventory.counts()) {
        for (uint32_t k = 0; k < n; ++k) {
            if (is_house_word(w)) house.push_back(w);
            else if (is_tree_word(w)) tree.push_back(w);
            else if (is_treasure_word(w)) treasure.push_back(w);
        }
    }

    int trees_total = 0;
    std::array<int, kGridCount> trees{};
    std::array<bool, kGridCount> pending{};
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) {
            if (tiles[s.world.at(x, y)].choppable) {
                ++trees[static_cast<size_t>(grid_of({x, y}))];
                ++trees_total;
            }
        }
    }
    for (Cell c : s.pending_house_spawns) pending[static_cast<size_t>(grid_of(c))] = true;

    // Free grid with the fewest trees, nearest the start grid.
    auto pick_grid = [&]() -> std::optional<int> {
        std::optional<int> best;
        for (int g = 0; g < kGridCount; ++g) {
            if (s.world.boss_occupied(g) || pending[static_cast<size_t>(g)]) continue;
            auto key = [&](int i) {
                return std::tuple(trees[static_cast<size_t>(i)], grid_distance(i, s.config.start_grid), i);
            };
            if (!best || key(g) < key(*best)) best = g;
        }
        return best;
    };

    std::vector<std::string> words;
    if (!house.empty()) {
        words = {house.front()};
    } else if (!tree.empty() && (s.receipts.empty() || trees_total < options_.low_tree_threshold)) {
        words = tree;
        if (words.size() > 5) words.resize(5);
    } else if (!treasure.empty()) {
        words = {treasure.front()};
    }
    if (words.empty()) return std::nullopt;
    const auto g = pick_grid();
    if (!g) return std::nullopt;
    return Command::terraform(s.tick, *g, words);
}

std::vector<Command> BaselineBot::decide(const GameState& s) {
    std::vector<Command> out;
    if (s.outcome != Outcome::Ongoing || s.tick % options_.decide_every_ticks != 0) return out;
    const auto& tiles = s.tileset();

    // Workers: treasure first, then the nearest unclaimed tree outside boss grids.
    std::set<Cell> claimed;
    for (const auto& v : s.villagers) {
        if (v.task.kind == TaskKind::Chop || v.task.kind == TaskKind::Collect) claimed.insert(v.task.cell);
    }
    for (const auto& v : s.villagers) {
        if (v.kind != VillagerKind::Worker || v.task.kind != TaskKind::Idle) continue;
        const Cell from = cell_at(v.pos);
        auto safe = [&](Cell c) { return !s.world.boss_occupied(grid_of(c)) && !claimed.contains(c); };
        auto ball = find_path_to_nearest(s.world, tiles, from, [&](Cell c) {
            return safe(c) && tiles[s.world.at(c)].grants_treasure;
        });
        if (ball) {
            claimed.insert(ball->cells.back());
            out.push_back(Command::assign(s.tick, v.id, Task::collect(ball->cells.back())));
            continue;
        }
        std::optional<Cell> tree;
        auto route = find_path_to_nearest(
            s.world, tiles, from,
            [&](Cell c) {
                if (!safe(c) || !tiles[s.world.at(c)].choppable) return false;
                if (!tree) tree = c;
                return true;
            },
            true);
        if (route && tree) {
            claimed.insert(*tree);
            out.push_back(Command::assign(s.tick, v.id, Task::chop(*tree)));
        }
    }

    // Fighters and archers: defend an invaded grid, otherwise push on the
    // oldest boss once the village is big enough.
    std::optional<int> target;
    for (const auto& m : s.monsters) {
        if (m.kind != MonsterKind::Boss) continue;
        const bool invaded = std::any_of(s.villagers.begin(), s.villagers.end(), [&](const Villager& v) {
            return grid_of(cell_at(v.pos)) == m.grid_index;
        });
        if (invaded) {
            target = m.id;
            break;
        }
    }
    if (!target && static_cast<int>(s.villagers.size()) >= options_.attack_population) {
        const Monster* oldest = nullptr;
        for (const auto& m : s.monsters) {
            if (m.kind == MonsterKind::Boss && (!oldest || m.spawned_tick < oldest->spawned_tick)) oldest = &m;
        }
        if (oldest) target = oldest->id;
    }
    if (target) {
        for (const auto& v : s.villagers) {
            if (v.kind == VillagerKind::Worker) continue;
            if (v.task.kind == TaskKind::Attack && s.find_monster(v.task.target)) continue;
            out.push_back(Command::assign(s.tick, v.id, Task::attack(*target)));
        }
    }
    // Last, so the task choices above still refer to the current terrain.
    if (auto t = choose_terraform(s)) out.push_back(std::move(*t));
    return out;
}

nlohmann::json run_report_to_json(const RunReport& r, bool include_receipts) {
    const auto& st = r.stats;
    nlohmann::json j = {
        {"outcome", std::string(outcome_name(r.outcome))},
        {"ticks", r.ticks},
        {"elapsed_s", r.elapsed_s},
        {"words_gained", r.words_gained},
        {"words_spent", r.words_spent},
        {"receipt_count", r.receipts.size()},
        {"commands_applied", r.applied.size()},
        {"commands_rejected", r.rejected},
        {"villagers_alive", r.villagers_alive},
        {"stats",
         {{"trees_chopped", st.trees_chopped},
          {"treasures_collected", st.treasures_collected},
          {"villagers_spawned", st.villagers_spawned},
          {"villager_deaths", st.villager_deaths},
          {"bosses_spawned", st.bosses_spawned},
          {"bosses_killed", st.bosses_killed},
          {"minions_spawned", st.minions_spawned},
          {"minions_killed", st.minions_killed}}},
        {"digest", r.digest},
    };
    if (include_receipts) {
        nlohmann::json rs = nlohmann::json::array();
        for (const auto& rc : r.receipts) rs.push_back(receipt_to_json(rc));
        j["receipts"] = rs;
    }
    return j;
}

namespace {

class Driver {
public:
    Driver(GameState& s, Generator& g, const RunOptions& o) : s_(s), g_(g), o_(o) {
        max_ticks_ = o.max_ticks > 0 ? o.max_ticks : std::llround(2000.0 / s.config.clock.tick_seconds);
    }

    bool running() const { return s_.outcome == Outcome::Ongoing && s_.tick < max_ticks_; }

    void apply(Command c) {
        c.tick = s_.tick;
        try {
            if (auto receipt = apply_command(s_, g_, c)) {
                if (o_.prompt_log) append_log(*o_.prompt_log, log_entry_from_receipt(*receipt));
                if (o_.receipts_log) append_receipt(*o_.receipts_log, *receipt);
            }
            report_.applied.push_back(std::move(c));
        } catch (const GameError& e) {
            if (e.code() == ErrorCode::IoError) throw;
            report_.rejected.push_back(format_command(c) + ": " + e.what());
        }
    }

    RunReport finish() {
        report_.outcome = s_.outcome;
        report_.ticks = s_.tick;
        report_.elapsed_s = s_.elapsed_s();
        report_.words_gained = s_.stats.words_gained;
        report_.words_spent = s_.stats.words_spent;
        report_.receipts = s_.receipts;
        report_.stats = s_.stats;
        report_.villagers_alive = static_cast<int64_t>(s_.villagers.size());
        report_.digest = state_digest(s_);
        if (o_.command_log) {
            std::ofstream out(*o_.command_log, std::ios::binary | std::ios::trunc);
            if (!out) throw GameError(ErrorCode::IoError, "cannot write " + o_.command_log->string());
            out << format_script(report_.applied);
        }
        return std::move(report_);
    }

private:
    GameState& s_;
    Generator& g_;
    const RunOptions& o_;
    int64_t max_ticks_ = 0;
    RunReport report_;
};

} // namespace

RunReport run_script(GameState& state, Generator& generator, const std::vector<Command>& commands,
                     const RunOptions& options) {
    Driver d(state, generator, options);
    size_t i = 0;
    while (d.running()) {
        for (; i < commands.size() && commands[i].tick <= state.tick; ++i) d.apply(commands[i]);
        step(state, 1);
    }
    return d.finish();
}

RunReport run_bot(GameState& state, Generator& generator, BaselineBot& bot, const RunOptions& options) {
    Driver d(state, generator, options);
    while (d.running()) {
        for (auto& c : bot.decide(state)) d.apply(std::move(c));
        step(state, 1);
    }
    return d.finish();
}

} // namespace godgame
