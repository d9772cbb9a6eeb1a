#include "support.hpp"

#include "godgame/pathfinding.hpp"

#include <doctest.h>

using namespace godgame;
using namespace godgame::testing;

namespace {

bool in_grid0(Cell c) { return c.x < 10 && c.y < 10; }

} // namespace

TEST_CASE("trivial paths") {
    const TileSet& t = default_tiles();
    World w;
    const auto same = find_path(w, t, {3, 3}, {3, 3});
    REQUIRE(same);
    CHECK(same->cells == std::vector<Cell>{{3, 3}});
    CHECK(same->cost == 0);

    // A corridor at y=1 walled by rock on both sides.
    for (int x = 0; x < 10; ++x) {
        w.set({x, 0}, tile_of(TileCategory::Rock));
        w.set({x, 2}, tile_of(TileCategory::Rock));
    }
    const auto corridor = find_path(w, t, {0, 1}, {9, 1}, in_grid0);
    REQUIRE(corridor);
    CHECK(corridor->cells.size() == 10);
    for (size_t i = 0; i < 10; ++i) CHECK(corridor->cells[i] == Cell{static_cast<int>(i), 1});

    w.set({5, 1}, tile_of(TileCategory::Rock));
    CHECK_FALSE(find_path(w, t, {0, 1}, {9, 1}, in_grid0));
}

TEST_CASE("water costs twice as much as grass") {
    const TileSet& t = default_tiles();
    World w;
    CHECK(step_cost(t[tile_of(TileCategory::Water)]) == 2 * step_cost(t[tile_of(TileCategory::Grass)]));
    w.set({1, 0}, tile_of(TileCategory::Water));
    w.set({2, 0}, tile_of(TileCategory::Water));
    const auto p = find_path(w, t, {0, 0}, {3, 0}, [](Cell c) { return c.y == 0; });
    REQUIRE(p);
    CHECK(p->cost == 2000 + 2000 + 1000);
    // Unrestricted, the five-step detour around the water ties the direct route.
    const auto free = find_path(w, t, {0, 0}, {3, 0});
    REQUIRE(free);
    CHECK(free->cost == 5000);
}

TEST_CASE("A* matches the uniform-cost oracle on 100 random 10x10 worlds") {
    const TileSet& t = default_tiles();
    Rng rng(31);
    int reachable = 0;
    for (int i = 0; i < 100; ++i) {
        World w;
        w.place(0, random_grid(rng));
        for (int k = 0; k < 5; ++k) {
            const Cell from{static_cast<int>(rng.uniform_below(10)), static_cast<int>(rng.uniform_below(10))};
            const Cell to{static_cast<int>(rng.uniform_below(10)), static_cast<int>(rng.uniform_below(10))};
            const auto oracle = ucs_cost(w, t, from, to, in_grid0);
            const auto got = find_path(w, t, from, to, in_grid0);
            REQUIRE(got.has_value() == oracle.has_value());
            if (got) {
                ++reachable;
                CHECK(got->cost == *oracle);
                CHECK(valid_path(w, t, *got, from, to));
            }
        }
    }
    CHECK(reachable > 50);
}

TEST_CASE("A* matches the oracle on full random worlds") {
    const TileSet& t = default_tiles();
    Rng rng(32);
    for (int i = 0; i < 10; ++i) {
        const World w = random_world(rng, 0.25, 0.2);
        const Cell from{static_cast<int>(rng.uniform_below(40)), static_cast<int>(rng.uniform_below(40))};
        const Cell to{static_cast<int>(rng.uniform_below(40)), static_cast<int>(rng.uniform_below(40))};
        const auto oracle = ucs_cost(w, t, from, to);
        const auto got = find_path(w, t, from, to);
        REQUIRE(got.has_value() == oracle.has_value());
        if (got) {
            CHECK(got->cost == *oracle);
            CHECK(valid_path(w, t, *got, from, to));
        }
    }
}

TEST_CASE("nearest-goal search agrees with the oracle minimum") {
    const TileSet& t = default_tiles();
    Rng rng(33);
    for (int i = 0; i < 30; ++i) {
        World w;
        w.place(0, random_grid(rng));
        const Cell from{0, 0};
        auto goal = [&](Cell c) { return in_grid0(c) && t[w.at(c)].grants_treasure; };
        std::optional<int64_t> best;
        for (int y = 0; y < 10; ++y) {
            for (int x = 0; x < 10; ++x) {
                if (!goal({x, y})) continue;
                if (auto c = ucs_cost(w, t, from, {x, y}, in_grid0); c && (!best || *c < *best)) best = c;
            }
        }
        const auto got = find_path_to_nearest(w, t, from, goal, false, in_grid0);
        REQUIRE(got.has_value() == best.has_value());
        if (got) {
            CHECK(got->cost == *best);
            CHECK(goal(got->cells.back()));
        }
    }
}

TEST_CASE("adjacent mode stops next to a blocked goal") {
    const TileSet& t = default_tiles();
    World w;
    w.set({5, 5}, tile_of(TileCategory::Rock));
    const auto p = find_path_to_nearest(w, t, {0, 5}, [](Cell c) { return c == Cell{5, 5}; }, true);
    REQUIRE(p);
    CHECK(p->cells.back() == Cell{4, 5});
    CHECK(p->cost == 4000);
}
