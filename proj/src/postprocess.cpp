#include "godgame/postprocess.hpp"

#include <algorithm>
#include <queue>

namespace godgame {

namespace {

bool is_rock(const World& w, const TileSet& t, Cell c) {
    return in_world(c) && t.category(w.at(c)) == TileCategory::Rock;
}

bool is_water(const World& w, const TileSet& t, Cell c) {
    return in_world(c) && t.category(w.at(c)) == TileCategory::Water;
}

size_t flat(Cell c) { return static_cast<size_t>(c.y * kWorldSize + c.x); }

uint8_t rock_height_at(const World& w, const TileSet& t, Cell c) {
    if (!is_rock(w, t, c)) return 0;
    uint8_t n = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if ((dx || dy) && is_rock(w, t, {c.x + dx, c.y + dy})) ++n;
        }
    }
    return n;
}

uint8_t water_mask_at(const World& w, const TileSet& t, Cell c) {
    if (!is_water(w, t, c)) return 0;
    uint8_t m = 0;
    if (is_water(w, t, {c.x, c.y - 1})) m |= kWaterNorth;
    if (is_water(w, t, {c.x + 1, c.y})) m |= kWaterEast;
    if (is_water(w, t, {c.x, c.y + 1})) m |= kWaterSouth;
    if (is_water(w, t, {c.x - 1, c.y})) m |= kWaterWest;
    return m;
}

template <typename F>
void for_region(int grid_index, F&& f) {
    const Cell o = grid_origin(grid_index);
    for (int y = std::max(0, o.y - 1); y <= std::min(kWorldSize - 1, o.y + kSubGridSize); ++y) {
        for (int x = std::max(0, o.x - 1); x <= std::min(kWorldSize - 1, o.x + kSubGridSize); ++x) f(Cell{x, y});
    }
}

} // namespace

RockHeightMap rock_heights(const World& world, const TileSet& tiles) {
    RockHeightMap map;
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) map.heights[flat({x, y})] = rock_height_at(world, tiles, {x, y});
    }
    return map;
}

WaterMaskMap water_masks(const World& world, const TileSet& tiles) {
    WaterMaskMap map;
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) map.masks[flat({x, y})] = water_mask_at(world, tiles, {x, y});
    }
    return map;
}

void update_rock_heights(RockHeightMap& map, const World& world, const TileSet& tiles, int grid_index) {
    for_region(grid_index, [&](Cell c) { map.heights[flat(c)] = rock_height_at(world, tiles, c); });
}

void update_water_masks(WaterMaskMap& map, const World& world, const TileSet& tiles, int grid_index) {
    for_region(grid_index, [&](Cell c) { map.masks[flat(c)] = water_mask_at(world, tiles, c); });
}

std::vector<std::vector<Cell>> water_components(const World& world, const TileSet& tiles) {
    std::vector<std::vector<Cell>> out;
    std::array<bool, kWorldCells> seen{};
    constexpr int dx[4] = {0, 1, 0, -1};
    constexpr int dy[4] = {-1, 0, 1, 0};
    for (int y = 0; y < kWorldSize; ++y) {
        for (int x = 0; x < kWorldSize; ++x) {
            const Cell start{x, y};
            if (seen[flat(start)] || !is_water(world, tiles, start)) continue;
            std::vector<Cell> comp;
            std::queue<Cell> q;
            q.push(start);
            seen[flat(start)] = true;
            while (!q.empty()) {
                const Cell c = q.front();
                q.pop();
                comp.push_back(c);
                for (int k = 0; k < 4; ++k) {
                    const Cell n{c.x + dx[k], c.y + dy[k]};
                    if (is_water(world, tiles, n) && !seen[flat(n)]) {
                        seen[flat(n)] = true;
                        q.push(n);
                    }
                }
            }
            std::sort(comp.begin(), comp.end(), [](Cell a, Cell b) { return flat(a) < flat(b); });
            out.push_back(std::move(comp));
        }
    }
    return out;
}

} // namespace godgame
