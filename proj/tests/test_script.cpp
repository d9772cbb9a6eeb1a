#include "support.hpp"

#include "godgame/runner.hpp"
#include "godgame/script.hpp"
#include "godgame/snapshot.hpp"

#include <doctest.h>

using namespace godgame;
using namespace godgame::testing;

namespace {

size_t parse_error_line(std::string_view text) {
    try {
        parse_script(text);
    } catch (const LineError& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        return e.line();
    }
    FAIL("expected a ParseError");
    return 0;
}

GameState fresh(uint64_t seed) { return new_game(default_config(), shared_resources(), seed); }

} // namespace

TEST_CASE("command grammar") {
    const auto cmds = parse_script(
        "# opening\n"
        "0 terraform 0 forest\n"
        "\n"
        "10 task 3 chop 4 5\n"
        "10 task 1 attack 4\n"
        "12 task 2 move 7 8\n"
        "15 task 3 collect 1 2\n"
        "20 task 1 idle\n"
        "30 terraform 2 a,river,in,a,forest\n");
    REQUIRE(cmds.size() == 7);
    CHECK(cmds[0] == Command::terraform(0, 0, {"forest"}));
    CHECK(cmds[1] == Command::assign(10, 3, Task::chop({4, 5})));
    CHECK(cmds[2] == Command::assign(10, 1, Task::attack(4)));
    CHECK(cmds[3] == Command::assign(12, 2, Task::move_to({7, 8})));
    CHECK(cmds[4] == Command::assign(15, 3, Task::collect({1, 2})));
    CHECK(cmds[5] == Command::assign(20, 1, Task::idle()));
    CHECK(cmds[6].words == std::vector<std::string>{"a", "river", "in", "a", "forest"});
    CHECK(parse_script(format_script(cmds)) == cmds);
    CHECK(format_command(cmds[1]) == "10 task 3 chop 4 5");
}

TEST_CASE("command grammar rejects bad lines with their line number") {
    CHECK(parse_error_line("0 terraform 0 forest\n5 dance 1\n") == 2);
    CHECK(parse_error_line("0 task 1 fly 2 3\n") == 1);
    CHECK(parse_error_line("5 task 1 idle\n4 task 1 idle\n") == 2);
    CHECK(parse_error_line("x task 1 idle\n") == 1);
    CHECK(parse_error_line("1 task 1 chop 3\n") == 1);
    CHECK(parse_error_line("1 terraform 0 forest,,path\n") == 1);
    CHECK(parse_error_line("-1 task 1 idle\n") == 1);
    CHECK(parse_error_line("1 task 1 idle extra\n") == 1);
}

TEST_CASE("random commands survive a format/parse round trip") {
    Rng rng(12);
    std::vector<Command> cmds;
    int64_t tick = 0;
    for (int i = 0; i < 500; ++i) {
        tick += static_cast<int64_t>(rng.uniform_below(5));
        if (rng.coin()) {
            std::vector<std::string> w;
            for (uint64_t k = 0; k <= rng.uniform_below(4); ++k) w.push_back(shared_resources().pool->queue()[rng.uniform_below(1000)]);
            cmds.push_back(Command::terraform(tick, static_cast<int>(rng.uniform_below(16)), w));
        } else {
            const int id = static_cast<int>(rng.uniform_below(50)) + 1;
            const Cell c{static_cast<int>(rng.uniform_below(40)), static_cast<int>(rng.uniform_below(40))};
            const Task tasks[] = {Task::idle(), Task::move_to(c), Task::chop(c), Task::collect(c),
                                  Task::attack(static_cast<int>(rng.uniform_below(99)) + 1)};
            cmds.push_back(Command::assign(tick, id, tasks[rng.uniform_below(5)]));
        }
    }
    CHECK(parse_script(format_script(cmds)) == cmds);
}

TEST_CASE("replay reproduces a bot game from its command log") {
    GameState a = fresh(7);
    Generator gen = make_generator(a.config, shared_resources());
    BaselineBot bot(shared_resources().affinity, a.tileset());
    const RunReport report = run_bot(a, gen, bot);
    CHECK(report.outcome == Outcome::Win);

    GameState b = fresh(7);
    const ReplayResult r = replay(b, gen, parse_script(format_script(report.applied)), a.tick);
    CHECK(r.rejected.empty());
    CHECK(r.applied == static_cast<int64_t>(report.applied.size()));
    CHECK(b == a);
    CHECK(state_digest(b) == report.digest);

    GameState c = fresh(7);
    const RunReport scripted = run_script(c, gen, report.applied);
    CHECK(scripted.digest == report.digest);
}

TEST_CASE("replay reports rejected commands without stopping") {
    GameState s = fresh(1);
    Generator gen = make_generator(s.config, shared_resources());
    const auto r = replay(s, gen, parse_script("0 terraform 15 forest\n0 terraform 0 forest\n3 task 99 idle\n"), 10);
    CHECK(r.applied == 1);
    CHECK(r.rejected.size() == 2);
    CHECK(s.tick == 10);
    CHECK(s.receipts.size() == 1);
}

TEST_CASE("snapshots round-trip through JSON") {
    GameState s = fresh(7);
    Generator gen = make_generator(s.config, shared_resources());
    BaselineBot bot(shared_resources().affinity, s.tileset());
    RunOptions o;
    o.max_ticks = 700;
    run_bot(s, gen, bot, o);
    const StateSnapshot snap = make_snapshot(s);
    CHECK(snapshot_from_json(snapshot_to_json(snap)) == snap);
    CHECK(snapshot_from_json(nlohmann::json::parse(snapshot_to_json(snap).dump())) == snap);

    const auto j = snapshot_to_json(snap);
    CHECK(j["cells"].size() == 40);
    CHECK(j["cells"][0].size() == 40);
    CHECK(j["boss_occupied"].size() == 16);
    CHECK(j["tick"] == 700);
    for (const char* key : {"tick", "elapsed_s", "outcome", "day_index", "boss_timer_remaining", "cells", "rock_heights",
                            "water_masks", "boss_occupied", "villagers", "monsters", "inventory",
                            "pending_house_spawns", "bosses_killed", "receipts"}) {
        CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK_THROWS_AS(snapshot_from_json(nlohmann::json::object()), GameError);
}

TEST_CASE("digest is stable and sensitive") {
    GameState a = fresh(3);
    GameState b = fresh(3);
    CHECK(state_digest(a) == state_digest(b));
    CHECK(state_digest(a).size() == 16);
    step(b, 1);
    CHECK(state_digest(a) != state_digest(b));
}
