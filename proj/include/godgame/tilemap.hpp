#pragma once

#include "godgame/errors.hpp"

#include <json.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace godgame {

inline constexpr int kTileCount = 16;
inline constexpr int kSubGridSize = 10;
inline constexpr int kGridsPerSide = 4;
inline constexpr int kGridCount = kGridsPerSide * kGridsPerSide;
inline constexpr int kWorldSize = kSubGridSize * kGridsPerSide;
inline constexpr int kWorldCells = kWorldSize * kWorldSize;

// Index into the 16-entry tile vocabulary. Construction rejects anything
// outside [0, 15].
class TileId {
public:
    constexpr TileId() = default;
    explicit TileId(long long value);

    static std::optional<TileId> checked(long long value) noexcept;

    constexpr int value() const noexcept { return value_; }

    friend constexpr auto operator<=>(TileId, TileId) = default;

private:
    uint8_t value_ = 0;
};

enum class TileCategory : uint8_t {
    Grass,
    Flowers,
    Bushes,
    Path,
    Sand,
    Rock,
    Fence,
    Post,
    Tree,
    Water,
    HouseDoor,
    HouseWindow,
    HouseRoof,
    TreasureBall,
    Decorative,
};

inline constexpr int kCategoryCount = 15;

std::string_view category_name(TileCategory c);
std::optional<TileCategory> parse_category(std::string_view name);

inline bool is_house(TileCategory c) {
    return c == TileCategory::HouseDoor || c == TileCategory::HouseWindow ||
           c == TileCategory::HouseRoof;
}

struct TileDef {
    TileId id;
    std::string name;
    TileCategory category = TileCategory::Grass;
    bool walkable = true;
    double speed_multiplier = 1.0;
    bool choppable = false;
    bool heals = false;
    bool spawns_villager = false;
    bool grants_treasure = false;

    bool operator==(const TileDef&) const = default;
};

class TileSet {
public:
    const TileDef& operator[](TileId id) const { return tiles_[static_cast<size_t>(id.value())]; }
    const std::array<TileDef, kTileCount>& tiles() const { return tiles_; }

    std::optional<TileId> find(std::string_view name) const;
    // Lowest id in the category, if any.
    std::optional<TileId> first_of(TileCategory category) const;

    bool walkable(TileId id) const { return (*this)[id].walkable; }
    TileCategory category(TileId id) const { return (*this)[id].category; }

    nlohmann::json to_json() const;

    bool operator==(const TileSet&) const = default;

private:
    friend TileSet load_tileset(const nlohmann::json& document);
    std::array<TileDef, kTileCount> tiles_{};
};

// Validates a tileset document: {"tiles": [ {id, name, category, walkable,
// speed_multiplier, choppable, heals, spawns_villager, grants_treasure}, ... ]}.
// Throws MissingTile, DuplicateId, SemanticsViolation or ParseError.
TileSet load_tileset(const nlohmann::json& document);
TileSet load_tileset_file(const std::filesystem::path& path);

struct Cell {
    int x = 0;
    int y = 0;

    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

inline constexpr bool in_world(Cell c) {
    return c.x >= 0 && c.y >= 0 && c.x < kWorldSize && c.y < kWorldSize;
}

inline constexpr int manhattan(Cell a, Cell b) {
    return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

struct SubGridCoord {
    int grid_index = 0;
    int local_x = 0;
    int local_y = 0;

    friend constexpr auto operator<=>(const SubGridCoord&, const SubGridCoord&) = default;
};

// Throws OutOfBounds.
SubGridCoord world_to_subgrid(int x, int y);
Cell subgrid_to_world(const SubGridCoord& coord);

inline int grid_of(Cell c) { return world_to_subgrid(c.x, c.y).grid_index; }
// Top-left world cell of a sub-grid.
Cell grid_origin(int grid_index);

// A 10x10 generated matrix of tile ids, row-major with row 0 at the top.
class TileGrid {
public:
    TileGrid() = default;

    static TileGrid filled(TileId id);
    // Throws InvalidGrid unless rows is exactly 10x10 with values in [0, 15].
    static TileGrid from_rows(const std::vector<std::vector<long long>>& rows);

    TileId at(int x, int y) const { return cells_[index(x, y)]; }
    void set(int x, int y, TileId id) { cells_[index(x, y)] = id; }

    const std::array<TileId, kSubGridSize * kSubGridSize>& cells() const { return cells_; }
    int count(TileId id) const;
    std::vector<std::vector<int>> rows() const;

    bool operator==(const TileGrid&) const = default;

private:
    static size_t index(int x, int y);
    std::array<TileId, kSubGridSize * kSubGridSize> cells_{};
};

struct SubGrid {
    TileGrid cells;
    bool boss_occupied = false;

    bool operator==(const SubGrid&) const = default;
};

class World {
public:
    World() = default;

    TileId at(Cell c) const;
    TileId at(int x, int y) const { return at(Cell{x, y}); }
    void set(Cell c, TileId id);

    const SubGrid& grid(int grid_index) const;
    const std::array<SubGrid, kGridCount>& grids() const { return grids_; }

    bool boss_occupied(int grid_index) const { return grid(grid_index).boss_occupied; }
    void set_boss_occupied(int grid_index, bool occupied);
    int occupied_count() const;

    // Replaces the target sub-grid wholesale. Throws InvalidIndex or
    // GridOccupiedByBoss; the world is untouched on error.
    void place(int grid_index, const TileGrid& grid);

    bool operator==(const World&) const = default;

private:
    std::array<SubGrid, kGridCount> grids_{};
};

World place_subgrid(const World& world, int grid_index, const TileGrid& grid);

} // namespace godgame
