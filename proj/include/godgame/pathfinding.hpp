#pragma once

#include "godgame/tilemap.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace godgame {

// Integer cost of stepping into a cell: round(1000 / speed_multiplier).
// Exact integers keep A* and its oracle comparable without float drift.
inline constexpr int64_t kCostScale = 1000;

int64_t step_cost(const TileDef& tile);

struct Path {
    std::vector<Cell> cells; // includes both endpoints
    int64_t cost = 0;        // sum of step_cost over cells[1..]
};

// Restricts which walkable cells a search may enter; empty means all.
using CellFilter = std::function<bool(Cell)>;

// Minimal-cost 4-connected path over walkable cells; nullopt when
// unreachable. `from` itself need not be walkable.
std::optional<Path> find_path(const World& world, const TileSet& tiles, Cell from, Cell to,
                              const CellFilter& allowed = {});

// Cheapest path to any cell satisfying `goal` (which need not be walkable;
// the path then stops at a walkable neighbour of it when `adjacent` is set).
std::optional<Path> find_path_to_nearest(const World& world, const TileSet& tiles, Cell from,
                                         const std::function<bool(Cell)>& goal, bool adjacent = false,
                                         const CellFilter& allowed = {});

} // namespace godgame
