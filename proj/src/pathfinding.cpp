#include "godgame/pathfinding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace godgame {

namespace {

constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {-1, 0, 1, 0};
constexpr int64_t kInf = std::numeric_limits<int64_t>::max();

int flat(Cell c) { return c.y * kWorldSize + c.x; }
Cell unflat(int i) { return {i % kWorldSize, i / kWorldSize}; }

// (priority, tiebreak, cell). Ties resolve on the lower flat index so the
// returned path is a deterministic function of the world.
using Entry = std::tuple<int64_t, int64_t, int>;
using MinQueue = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

bool enterable(const World& world, const TileSet& tiles, Cell c, const CellFilter& allowed) {
    return in_world(c) && tiles.walkable(world.at(c)) && (!allowed || allowed(c));
}

Path rebuild(const std::array<int, kWorldCells>& parent, const std::array<int64_t, kWorldCells>& dist, int end) {
    Path p;
    p.cost = dist[static_cast<size_t>(end)];
    for (int i = end; i != -1; i = parent[static_cast<size_t>(i)]) p.cells.push_back(unflat(i));
    std::reverse(p.cells.begin(), p.cells.end());
    return p;
}

} // namespace

int64_t step_cost(const TileDef& tile) {
    return std::llround(static_cast<double>(kCostScale) / tile.speed_multiplier);
}

std::optional<Path> find_path(const World& world, const TileSet& tiles, Cell from, Cell to,
                              const CellFilter& allowed) {
    if (!in_world(from) || !in_world(to)) return std::nullopt;
    if (from == to) return Path{{from}, 0};
    if (!enterable(world, tiles, to, allowed)) return std::nullopt;

    std::array<int64_t, kWorldCells> dist;
    std::array<int, kWorldCells> parent;
    dist.fill(kInf);
    parent.fill(-1);
    // Every step costs at least kCostScale since speed <= 1, so this is consistent.
    auto h = [&](Cell c) { return static_cast<int64_t>(manhattan(c, to)) * kCostScale; };

    MinQueue open;
    dist[static_cast<size_t>(flat(from))] = 0;
    open.emplace(h(from), h(from), flat(from));
    while (!open.empty()) {
        const auto [f, hc, i] = open.top();
        open.pop();
        const Cell c = unflat(i);
        const int64_t g = dist[static_cast<size_t>(i)];
        if (f != g + hc) continue; // stale
        if (c == to) return rebuild(parent, dist, i);
        for (int k = 0; k < 4; ++k) {
            const Cell n{c.x + kDx[k], c.y + kDy[k]};
            if (!enterable(world, tiles, n, allowed)) continue;
            const int64_t ng = g + step_cost(tiles[world.at(n)]);
            auto& slot = dist[static_cast<size_t>(flat(n))];
            if (ng < slot) {
                slot = ng;
                parent[static_cast<size_t>(flat(n))] = i;
                open.emplace(ng + h(n), h(n), flat(n));
            }
        }
    }
    return std::nullopt;
}

std::optional<Path> find_path_to_nearest(const World& world, const TileSet& tiles, Cell from,
                                         const std::function<bool(Cell)>& goal, bool adjacent,
                                         const CellFilter& allowed) {
    if (!in_world(from)) return std::nullopt;
    auto reached = [&](Cell c) {
        if (goal(c)) return true;
        if (!adjacent) return false;
        for (int k = 0; k < 4; ++k) {
            const Cell n{c.x + kDx[k], c.y + kDy[k]};
            if (in_world(n) && goal(n)) return true;
        }
        return false;
    };

    std::array<int64_t, kWorldCells> dist;
    std::array<int, kWorldCells> parent;
    dist.fill(kInf);
    parent.fill(-1);
    MinQueue open;
    dist[static_cast<size_t>(flat(from))] = 0;
    open.emplace(0, 0, flat(from));
    while (!open.empty()) {
        const auto [g, tiebreak, i] = open.top();
        (void)tiebreak;
        open.pop();
        if (g != dist[static_cast<size_t>(i)]) continue;
        const Cell c = unflat(i);
        if (reached(c)) return rebuild(parent, dist, i);
        for (int k = 0; k < 4; ++k) {
            const Cell n{c.x + kDx[k], c.y + kDy[k]};
            if (!enterable(world, tiles, n, allowed)) continue;
            const int64_t ng = g + step_cost(tiles[world.at(n)]);
            auto& slot = dist[static_cast<size_t>(flat(n))];
            if (ng < slot) {
                slot = ng;
                parent[static_cast<size_t>(flat(n))] = i;
                open.emplace(ng, 0, flat(n));
            }
        }
    }
    return std::nullopt;
}

} // namespace godgame
