// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "support.hpp"

#include "godgame/runner.hpp"
#include "godgame/server.hpp"
#include "godgame/snapshot.hpp"
#include "godgame/telemetry.hpp"
#include "godgame/terraform.hpp"
#include "godgame/wordbank.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace godgame;
using namespace godgame::testing;
using Clock = std::chrono::steady_clock;

namespace {

// Collects the first few failed expectations of one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) detail_ << (failures_ > 1 ? "; " : "") << what;
    }
    bool ok() const { return failures_ == 0; }
    std::string detail() const {
        return failures_ > 3 ? detail_.str() + "; +" + std::to_string(failures_ - 3) + " more" : detail_.str();
    }

private:
    int failures_ = 0;
    std::ostringstream detail_;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const GameError& e) {
        return e.code();
    }
    return std::nullopt;
}

Prompt prompt(std::vector<std::string> words) { return Prompt{words, render_words(words)}; }

int count_category(const TileGrid& g, TileCategory c) {
    int n = 0;
    for (TileId id : g.cells()) n += default_tiles().category(id) == c;
    return n;
}

GameState fresh(uint64_t seed) { return new_game(default_config(), shared_resources(), seed); }

// --- criteria ---------------------------------------------------------------

void world_structure(Check& c) {
    std::set<SubGridCoord> seen;
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x < 40; ++x) {
            const auto sg = world_to_subgrid(x, y);
            c.expect(sg.grid_index == (y / 10) * 4 + x / 10 && sg.local_x == x % 10 && sg.local_y == y % 10,
                     "bad coordinate for (" + std::to_string(x) + "," + std::to_string(y) + ")");
            c.expect(subgrid_to_world(sg) == Cell{x, y}, "inverse mismatch");
            seen.insert(sg);
        }
    }
    c.expect(seen.size() == 1600, "map is not injective");
    c.expect(kWorldSize == 40 && kSubGridSize == 10 && kGridCount == 16 && kWorldCells == 1600, "world dimensions");
    c.expect(code_of([] { world_to_subgrid(40, 0); }) == ErrorCode::OutOfBounds, "out-of-range cell accepted");
}

void tile_vocabulary(Check& c) {
    Rng rng(404);
    int accepted = 0;
    for (int i = 0; i < 10000; ++i) {
        const std::string body = random_payload(rng);
        try {
            const TileGrid g = decode_grid_response(body);
            ++accepted;
            c.expect(oracle_accepts(body), "decoder accepted an invalid payload");
            for (TileId id : g.cells()) c.expect(id.value() >= 0 && id.value() <= 15, "tile id out of range");
        } catch (const GameError& e) {
            c.expect(e.code() == ErrorCode::MalformedResponse, "decoder raised " + std::string(error_code_name(e.code())));
            c.expect(!oracle_accepts(body), "decoder rejected a valid payload");
        }
    }
    c.expect(accepted > 0, "no fuzz payload was accepted");
    c.expect(code_of([] { TileId(16); }) == ErrorCode::InvalidGrid, "TileId(16) constructed");
    c.expect(code_of([] { TileId(-1); }) == ErrorCode::InvalidGrid, "TileId(-1) constructed");
}

void gacha_statistics(Check& c) {
    const WordPool& pool = *shared_resources().pool;
    Rng rng(2024);
    constexpr int n = 100000;
    std::vector<int> hits(1001, 0);
    int common = 0;
    for (int i = 0; i < n; ++i) {
        const size_t pos = pool.sample_position(rng);
        ++hits[pos];
        common += pos <= 100;
    }
    const double rate = static_cast<double>(common) / n;
    c.expect(std::abs(rate - 0.5) <= 0.01, "common rate " + fmt(rate));
    auto within_3_sigma = [&](size_t pos, double p) {
        return std::abs(hits[pos] - n * p) <= 3 * std::sqrt(n * p * (1 - p));
    };
    for (size_t pos : {1, 50, 100}) c.expect(within_3_sigma(pos, 1.0 / 200), "marginal at " + std::to_string(pos));
    for (size_t pos : {101, 500, 1000}) c.expect(within_3_sigma(pos, 1.0 / 1800), "marginal at " + std::to_string(pos));

    WordPool rotating = pool;
    std::vector<std::string> initial = pool.queue();
    for (int i = 0; i < 10000; ++i) rotating.draw(rng);
    std::vector<std::string> after = rotating.queue();
    std::sort(initial.begin(), initial.end());
    std::sort(after.begin(), after.end());
    c.expect(initial.size() == 1000 && after == initial, "queue is no longer a permutation");
}

void queue_rotation(Check& c) {
    const WordPool& base = *shared_resources().pool;
    const auto& old = base.queue();
    for (size_t k = 1; k <= 1000; ++k) {
        WordPool p = base;
        const DrawOutcome d = p.take_at(k);
        const auto& now = p.queue();
        bool ok = d.word == old[k - 1] && now.back() == old[k - 1];
        for (size_t i = 1; ok && i < k; ++i) ok = now[i - 1] == old[i - 1];
        for (size_t i = k + 1; ok && i <= 1000; ++i) ok = now[i - 2] == old[i - 1];
        c.expect(ok, "rotation wrong at k=" + std::to_string(k));
    }
    WordPool p = base;
    const std::string promoted = old[100];
    p.take_at(100);
    c.expect(p.position_of(promoted) == 100 && group_of_position(100) == WordGroup::Common, "position 101 not promoted");
}

void treasure(Check& c) {
    const WordPool& pool = *shared_resources().pool;
    Rng rng(17);
    for (int i = 0; i < 10000; ++i) {
        const auto words = pool.draw_treasure(rng);
        c.expect(words.size() == 5, "treasure size " + std::to_string(words.size()));
        c.expect(std::set<std::string>(words.begin(), words.end()).size() == words.size(), "duplicate treasure word");
        for (const auto& w : words) c.expect(pool.vocabulary().contains(w), "treasure word outside vocabulary: " + w);
    }
    // Through the engine: collecting a treasure tile grants exactly five words.
    GameState s = fresh(5);
    TileGrid g = TileGrid::filled(tile_of(TileCategory::Grass));
    g.set(5, 5, tile_of(TileCategory::TreasureBall));
    s.world.place(0, g);
    s.rock = rock_heights(s.world, s.tileset());
    s.water = water_masks(s.world, s.tileset());
    const uint64_t before = s.inventory.total();
    assign_task(s, s.villagers[0].id, Task::collect({5, 5}));
    for (int i = 0; i < 600 && s.inventory.total() == before; ++i) step(s, 1);
    c.expect(s.inventory.total() == before + 5, "collecting a treasure granted " + std::to_string(s.inventory.total() - before));
}

void start_state(Check& c) {
    for (uint64_t seed : {0, 7, 42}) {
        const GameState s = fresh(seed);
        std::set<VillagerKind> kinds;
        for (const auto& v : s.villagers) kinds.insert(v.kind);
        c.expect(s.villagers.size() == 3 && kinds.size() == 3, "villagers are not one per kind");
        c.expect(s.monsters.size() == 1 && s.monsters[0].kind == MonsterKind::Boss && s.monsters[0].grid_index == 15,
                 "boss is not alone on grid 15");
        c.expect(s.world.boss_occupied(15) && s.world.occupied_count() == 1, "occupation flags");
        c.expect(s.inventory.counts().size() == 1 && s.inventory.count("forest") == 1, "inventory is not {forest:1}");
        c.expect(s.tick == 0 && s.outcome == Outcome::Ongoing, "clock or outcome");
        c.expect(fresh(seed) == s, "start state is not seed-pinned");
    }
}

void boss_cadence(Check& c) {
    const auto t0 = Clock::now();
    GameState s = fresh(3);
    constexpr int64_t interval = 1200; // 120 s at 0.1 s per tick
    while (s.outcome == Outcome::Ongoing) {
        const int64_t expected = std::min<int64_t>(16, 1 + s.tick / interval);
        if (s.bosses_alive() != expected) {
            c.expect(false, "tick " + std::to_string(s.tick) + ": " + std::to_string(s.bosses_alive()) + " bosses");
            break;
        }
        step(s, 1);
    }
    c.expect(s.outcome == Outcome::Lose, "outcome " + std::string(outcome_name(s.outcome)));
    c.expect(s.world.occupied_count() == 16, "not all grids occupied");
    c.expect(s.tick == 15 * interval, "lost at tick " + std::to_string(s.tick));
    const double wall = seconds_since(t0);
    c.expect(wall < 30.0, "took " + fmt(wall, 1) + " s");
}

void win_path(Check& c) {
    const auto t0 = Clock::now();
    auto play = [] {
        GameState s = fresh(7);
        Generator gen = make_generator(s.config, shared_resources());
        BaselineBot bot(shared_resources().affinity, s.tileset());
        RunReport r = run_bot(s, gen, bot);
        return std::pair{std::move(s), std::move(r)};
    };
    const auto [a, ra] = play();
    const auto [b, rb] = play();
    c.expect(ra.outcome == Outcome::Win, "bot did not win: " + std::string(outcome_name(ra.outcome)));
    c.expect(ra.digest == rb.digest && a == b, "two executions diverged");

    GameState replayed = fresh(7);
    Generator gen = make_generator(replayed.config, shared_resources());
    const auto rr = replay(replayed, gen, parse_script(format_script(ra.applied)), a.tick);
    c.expect(rr.rejected.empty(), "replay rejected commands");
    c.expect(state_digest(replayed) == ra.digest && replayed == a, "replay diverged");
    const double wall = seconds_since(t0);
    c.expect(wall < 60.0, "took " + fmt(wall, 1) + " s");
}

void pathfinding_oracle(Check& c) {
    const TileSet& t = default_tiles();
    auto in_grid0 = [](Cell p) { return p.x < 10 && p.y < 10; };
    Rng rng(31);
    int reachable = 0;
    for (int i = 0; i < 100; ++i) {
        World w;
        w.place(0, random_grid(rng));
        for (int k = 0; k < 10; ++k) {
            const Cell from{static_cast<int>(rng.uniform_below(10)), static_cast<int>(rng.uniform_below(10))};
            const Cell to{static_cast<int>(rng.uniform_below(10)), static_cast<int>(rng.uniform_below(10))};
            const auto oracle = ucs_cost(w, t, from, to, in_grid0);
            const auto got = find_path(w, t, from, to, in_grid0);
            c.expect(got.has_value() == oracle.has_value(), "reachability disagrees");
            if (got && oracle) {
                ++reachable;
                c.expect(got->cost == *oracle, "cost " + std::to_string(got->cost) + " vs " + std::to_string(*oracle));
                c.expect(valid_path(w, t, *got, from, to), "path crosses a blocked cell or breaks adjacency");
            }
        }
    }
    c.expect(reachable > 100, "too few reachable pairs to be meaningful");
}

void post_processing(Check& c) {
    const TileSet& t = default_tiles();
    auto is_water = [&](const World& w, Cell p) { return in_world(p) && t.category(w.at(p)) == TileCategory::Water; };
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const World w = random_world(rng, 0.3, 0.3);
        const auto heights = rock_heights(w, t);
        const auto brute = brute_rock_heights(w, t);
        for (int k = 0; k < kWorldCells; ++k) {
            c.expect(heights.at({k % 40, k / 40}) == brute[static_cast<size_t>(k)], "rock height mismatch");
        }
        const auto m = water_masks(w, t);
        for (int y = 0; y < 40; ++y) {
            for (int x = 0; x < 40; ++x) {
                if (x + 1 < 40) c.expect(((m.at({x, y}) & kWaterEast) != 0) == ((m.at({x + 1, y}) & kWaterWest) != 0), "E/W asymmetry");
                if (y + 1 < 40) c.expect(((m.at({x, y}) & kWaterSouth) != 0) == ((m.at({x, y + 1}) & kWaterNorth) != 0), "N/S asymmetry");
                if (!is_water(w, {x, y})) c.expect(m.at({x, y}) == 0, "mask on dry cell");
            }
        }
        // Components reached through mask bits equal the union-find labelling.
        const auto labels = union_find_labels([&](Cell p) { return is_water(w, p); });
        std::map<int, size_t> sizes;
        for (int l : labels) {
            if (l >= 0) ++sizes[l];
        }
        std::vector<bool> seen(kWorldCells, false);
        size_t walked = 0;
        for (int k = 0; k < kWorldCells; ++k) {
            if (labels[static_cast<size_t>(k)] < 0 || seen[static_cast<size_t>(k)]) continue;
            ++walked;
            size_t size = 0;
            std::vector<Cell> stack{{k % 40, k / 40}};
            seen[static_cast<size_t>(k)] = true;
            while (!stack.empty()) {
                const Cell p = stack.back();
                stack.pop_back();
                ++size;
                c.expect(labels[static_cast<size_t>(p.y * 40 + p.x)] == labels[static_cast<size_t>(k)], "mask joins two components");
                const Cell ns[4] = {{p.x, p.y - 1}, {p.x + 1, p.y}, {p.x, p.y + 1}, {p.x - 1, p.y}};
                for (int b = 0; b < 4; ++b) {
                    if (!(m.at(p) >> b & 1)) continue;
                    const size_t ni = static_cast<size_t>(ns[b].y * 40 + ns[b].x);
                    if (!seen[ni]) {
                        seen[ni] = true;
                        stack.push_back(ns[b]);
                    }
                }
            }
            c.expect(size == sizes[labels[static_cast<size_t>(k)]], "mask walk misses part of a component");
        }
        c.expect(walked == sizes.size(), "component count");
        c.expect(water_components(w, t).size() == sizes.size(), "water_components count");
    }
    // A river crossing the boundary between grids 0 and 1.
    World river;
    for (int x = 7; x <= 12; ++x) river.set({x, 4}, tile_of(TileCategory::Water));
    const auto m = water_masks(river, t);
    c.expect((m.at({9, 4}) & kWaterEast) && (m.at({10, 4}) & kWaterWest), "boundary river is disconnected");
    c.expect(water_components(river, t).size() == 1, "boundary river splits");
}

void local_generator(Check& c) {
    const AffinityTable& aff = *shared_resources().affinity;
    const TileId tree = tile_of(TileCategory::Tree);
    for (uint64_t seed = 0; seed < 100; ++seed) {
        const TileGrid g = generate_local(prompt({"forest"}), seed, aff);
        c.expect(g.count(tree) >= 30, "seed " + std::to_string(seed) + ": " + std::to_string(g.count(tree)) + " trees");
        c.expect(largest_component(g, tree) >= 8, "seed " + std::to_string(seed) + ": tree component too small");
        const Prompt p = prompt({"a", "river", "in", "a", "forest"});
        c.expect(generate_local(p, seed, aff) == generate_local(p, seed, aff), "not a pure function");
    }
    std::vector<std::string> water_words;
    for (const auto& [word, a] : aff.entries()) {
        if (default_tiles().category(a.dominant) == TileCategory::Water) water_words.push_back(word);
    }
    c.expect(!water_words.empty(), "no water words");
    for (const std::vector<std::string>& base : {std::vector<std::string>{"forest"}, {"village"}, {"mountain", "path"}}) {
        for (const auto& w : water_words) {
            auto extended = base;
            extended.push_back(w);
            int64_t before = 0, after = 0;
            for (uint64_t seed = 0; seed < 100; ++seed) {
                before += count_category(generate_local(prompt(base), seed, aff), TileCategory::Water);
                after += count_category(generate_local(prompt(extended), seed, aff), TileCategory::Water);
            }
            c.expect(after >= before, "water fell when adding '" + w + "'");
        }
    }
}

void remote_protocol(Check& c) {
    auto expect_code = [&](ErrorCode want, const std::function<void()>& f, const std::string& what) {
        const auto got = code_of(f);
        c.expect(got == want, what + ": got " + (got ? std::string(error_code_name(*got)) : "no error"));
    };
    {
        MockGenerator ok([](const httplib::Request&, httplib::Response& rs) { rs.set_content(grid_body(9), "application/json"); });
        RemoteGenerator remote({ok.url(), 2000});
        c.expect(remote.generate(prompt({"lake"}), 0) == TileGrid::filled(TileId(9)), "valid grid did not pass");
    }
    for (const std::string& body : {grid_body(9, 11), grid_body(9, 10, 9), grid_body(16), grid_body(-1)}) {
        MockGenerator bad([&](const httplib::Request&, httplib::Response& rs) { rs.set_content(body, "application/json"); });
        RemoteGenerator remote({bad.url(), 2000});
        expect_code(ErrorCode::MalformedResponse, [&] { remote.generate(prompt({"lake"}), 0); }, "bad grid");
    }
    {
        std::atomic<bool> release{false};
        MockGenerator stalled([&](const httplib::Request&, httplib::Response& rs) {
            const auto until = Clock::now() + std::chrono::seconds(5);
            while (!release && Clock::now() < until) std::this_thread::sleep_for(std::chrono::milliseconds(10));
            rs.set_content(grid_body(0), "application/json");
        });
        constexpr int timeout_ms = 400;
        RemoteGenerator remote({stalled.url(), timeout_ms});
        const auto t0 = Clock::now();
        expect_code(ErrorCode::Timeout, [&] { remote.generate(prompt({"lake"}), 0); }, "stalled server");
        const double ms = seconds_since(t0) * 1000;
        release = true;
        c.expect(ms <= timeout_ms * 1.25, "timeout took " + fmt(ms, 0) + " ms");
    }
    {
        MockGenerator down([](const httplib::Request&, httplib::Response& rs) { rs.status = 503; });
        GameConfig cfg = default_config();
        cfg.generator.mode = GeneratorMode::RemoteWithFallback;
        cfg.generator.url = down.url();
        cfg.generator.timeout_ms = 1000;
        GameState s = new_game(cfg, shared_resources(), 1);
        Generator gen = make_generator(cfg, shared_resources());
        const TerraformReceipt r = terraform(s, gen, 0, {"forest"});
        c.expect(r.backend == BackendKind::LocalRuleBased, "fallback receipt is not local");
        c.expect(down.hits() >= 1, "remote was never tried");
    }
}

void telemetry(Check& c) {
    const auto dir = std::filesystem::temp_directory_path() / ("godgame_acceptance_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    const auto& words = shared_resources().pool->queue();
    Rng rng(5);
    std::vector<PromptLogEntry> written;
    for (int i = 0; i < 1000; ++i) {
        TerraformReceipt r;
        r.tick = static_cast<int64_t>(rng.uniform_below(100000));
        r.grid_index = static_cast<int>(rng.uniform_below(16));
        const uint64_t n = 1 + rng.uniform_below(7);
        for (uint64_t k = 0; k < n; ++k) r.prompt.words.push_back(words[rng.uniform_below(1000)]);
        r.prompt.rendered = render_words(r.prompt.words);
        r.backend = rng.coin() ? BackendKind::Remote : BackendKind::LocalRuleBased;
        written.push_back(log_entry_from_receipt(r));
        append_log(dir / "random.log", written.back());
    }
    const ParsedLog back = parse_log(dir / "random.log", true);
    c.expect(back.entries == written, "log round trip changed entries");

    const auto h = prompt_length_histogram(back.entries);
    int64_t sum = 0;
    for (int b = 0; b < kLengthBuckets; ++b) sum += h.counts[static_cast<size_t>(b)];
    c.expect(sum == 1000 && h.total == 1000, "buckets do not partition the entries");
    std::array<int64_t, 5> oracle{};
    for (const auto& e : back.entries) ++oracle[static_cast<size_t>(std::min(e.word_count, 5) - 1)];
    for (int b = 0; b < kLengthBuckets; ++b) c.expect(h.counts[static_cast<size_t>(b)] == oracle[static_cast<size_t>(b)], "bucket " + std::string(length_bucket_label(b)));

    GameState s = fresh(7);
    Generator gen = make_generator(s.config, shared_resources());
    BaselineBot bot(shared_resources().affinity, s.tileset());
    RunOptions o;
    o.prompt_log = dir / "run.log";
    o.receipts_log = dir / "run.jsonl";
    const RunReport report = run_bot(s, gen, bot, o);
    const ParsedLog log = parse_log(*o.prompt_log, true);
    const auto receipts = load_receipts(*o.receipts_log);
    c.expect(!receipts.empty(), "run produced no receipts");
    c.expect(receipts == report.receipts, "receipt file differs from the run");
    c.expect(log.entries.size() == receipts.size(), "log lines and receipts differ in number");
    for (size_t i = 0; i < std::min(log.entries.size(), receipts.size()); ++i) {
        c.expect(log.entries[i] == log_entry_from_receipt(receipts[i]), "log line " + std::to_string(i + 1) + " mismatches");
    }
    std::filesystem::remove_all(dir);
}

void api_equivalence(Check& c) {
    GameState direct = fresh(7);
    Generator gen = make_generator(direct.config, shared_resources());
    BaselineBot bot(shared_resources().affinity, direct.tileset());
    const RunReport report = run_bot(direct, gen, bot);

    // Replaying the recorded script directly must land on the same state too.
    GameState scripted = fresh(7);
    run_script(scripted, gen, report.applied);
    c.expect(scripted == direct, "direct script run diverged from the bot run");

    GameServer server(ServerOptions{});
    const int port = server.start_background();
    const auto over_api = drive_over_api(port, 7, report.applied, direct.tick);
    server.stop();
    c.expect(over_api.has_value(), "API transport failed");
    if (over_api) c.expect(*over_api == snapshot_to_json(make_snapshot(direct)), "API snapshot differs");
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, void (*)(Check&)>> criteria = {
        {"world structure", world_structure},
        {"tile vocabulary", tile_vocabulary},
        {"gacha statistics", gacha_statistics},
        {"queue rotation", queue_rotation},
        {"treasure", treasure},
        {"start state", start_state},
        {"boss cadence and loss", boss_cadence},
        {"win path", win_path},
        {"pathfinding oracle", pathfinding_oracle},
        {"post-processing", post_processing},
        {"local generator", local_generator},
        {"remote protocol", remote_protocol},
        {"telemetry", telemetry},
        {"API equivalence", api_equivalence},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        const auto t0 = Clock::now();
        try {
            run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("threw: ") + e.what());
        }
        const std::string secs = fmt(seconds_since(t0), 2) + " s";
        if (c.ok()) {
            std::cout << "PASS " << name << " (" << secs << ")\n";
        } else {
            ++failed;
            std::cout << "FAIL " << name << " (" << secs << "): " << c.detail() << "\n";
        }
        std::cout.flush();
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<size_t>(failed) << "/"
              << criteria.size() << "\n";
    return failed ? 1 : 0;
}
