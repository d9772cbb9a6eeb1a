#pragma once

#include "godgame/tilemap.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace godgame {

// Per-cell count of rock neighbours (8-neighbourhood) for rock cells; 0 elsewhere.
struct RockHeightMap {
    std::array<uint8_t, kWorldCells> heights{};

    int at(Cell c) const { return heights[static_cast<size_t>(c.y * kWorldSize + c.x)]; }
    bool operator==(const RockHeightMap&) const = default;
};

enum WaterBit : uint8_t {
    kWaterNorth = 1 << 0,
    kWaterEast = 1 << 1,
    kWaterSouth = 1 << 2,
    kWaterWest = 1 << 3,
};

// 4-bit autotile masks for water cells; 0 elsewhere.
struct WaterMaskMap {
    std::array<uint8_t, kWorldCells> masks{};

    int at(Cell c) const { return masks[static_cast<size_t>(c.y * kWorldSize + c.x)]; }
    bool operator==(const WaterMaskMap&) const = default;
};

RockHeightMap rock_heights(const World& world, const TileSet& tiles);
WaterMaskMap water_masks(const World& world, const TileSet& tiles);

// 4-connected water components, each sorted row-major; components ordered by
// their first cell.
std::vector<std::vector<Cell>> water_components(const World& world, const TileSet& tiles);

// Recompute only the placed sub-grid and its one-cell border.
void update_rock_heights(RockHeightMap& map, const World& world, const TileSet& tiles, int grid_index);
void update_water_masks(WaterMaskMap& map, const World& world, const TileSet& tiles, int grid_index);

// Linear presentation scale for a rock height level.
inline double rock_visual_scale(int height, double step = 0.1) { return 1.0 + step * height; }

} // namespace godgame
