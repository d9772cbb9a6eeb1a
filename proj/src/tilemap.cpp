#include "godgame/tilemap.hpp"

#include <fstream>
#include <set>

namespace godgame {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "Grass", "Flowers", "Bushes",    "Path",        "Sand",      "Rock",         "Fence",      "Post",
    "Tree",  "Water",   "HouseDoor", "HouseWindow", "HouseRoof", "TreasureBall", "Decorative",
};

void require_field(const nlohmann::json& tile, const char* field, size_t index) {
    if (!tile.contains(field)) {
        throw GameError(ErrorCode::ParseError,
                        "tile entry " + std::to_string(index) + " lacks field '" + field + "'");
    }
}

void semantics(bool ok, const TileDef& t, const std::string& what) {
    if (!ok) throw GameError(ErrorCode::SemanticsViolation, "tile '" + t.name + "': " + what);
}

} // namespace

TileId::TileId(long long value) {
    if (value < 0 || value >= kTileCount) {
        throw GameError(ErrorCode::InvalidGrid, "tile id " + std::to_string(value) + " outside [0, 15]");
    }
    value_ = static_cast<uint8_t>(value);
}

std::optional<TileId> TileId::checked(long long value) noexcept {
    if (value < 0 || value >= kTileCount) return std::nullopt;
    TileId id;
    id.value_ = static_cast<uint8_t>(value);
    return id;
}

std::string_view category_name(TileCategory c) {
    return kCategoryNames[static_cast<size_t>(c)];
}

std::optional<TileCategory> parse_category(std::string_view name) {
    for (size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (kCategoryNames[i] == name) return static_cast<TileCategory>(i);
    }
    return std::nullopt;
}

std::optional<TileId> TileSet::find(std::string_view name) const {
    for (const auto& t : tiles_) {
        if (t.name == name) return t.id;
    }
    return std::nullopt;
}

std::optional<TileId> TileSet::first_of(TileCategory category) const {
    for (const auto& t : tiles_) {
        if (t.category == category) return t.id;
    }
    return std::nullopt;
}

nlohmann::json TileSet::to_json() const {
    nlohmann::json tiles = nlohmann::json::array();
    for (const auto& t : tiles_) {
        tiles.push_back({
            {"id", t.id.value()},
            {"name", t.name},
            {"category", std::string(category_name(t.category))},
            {"walkable", t.walkable},
            {"speed_multiplier", t.speed_multiplier},
            {"choppable", t.choppable},
            {"heals", t.heals},
            {"spawns_villager", t.spawns_villager},
            {"grants_treasure", t.grants_treasure},
        });
    }
    return {{"tiles", tiles}};
}

TileSet load_tileset(const nlohmann::json& document) {
    if (!document.is_object() || !document.contains("tiles") || !document["tiles"].is_array()) {
        throw GameError(ErrorCode::ParseError, "tileset document needs a 'tiles' array");
    }
    const auto& entries = document["tiles"];
    if (entries.size() != static_cast<size_t>(kTileCount)) {
        throw GameError(ErrorCode::MissingTile,
                        "tileset declares " + std::to_string(entries.size()) + " tiles, expected 16");
    }

    TileSet set;
    std::array<bool, kTileCount> seen{};
    std::set<std::string> names;
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        for (const char* f : {"id", "name", "category", "walkable", "speed_multiplier", "choppable", "heals",
                              "spawns_villager", "grants_treasure"}) {
            require_field(e, f, i);
        }
        TileDef t;
        try {
            const long long raw = e["id"].get<long long>();
            auto id = TileId::checked(raw);
            if (!id) {
                throw GameError(ErrorCode::MissingTile, "tile id " + std::to_string(raw) + " outside [0, 15]");
            }
            t.id = *id;
            t.name = e["name"].get<std::string>();
            auto cat = parse_category(e["category"].get<std::string>());
            if (!cat) throw GameError(ErrorCode::ParseError, "unknown tile category for '" + t.name + "'");
            t.category = *cat;
            t.walkable = e["walkable"].get<bool>();
            t.speed_multiplier = e["speed_multiplier"].get<double>();
            t.choppable = e["choppable"].get<bool>();
            t.heals = e["heals"].get<bool>();
            t.spawns_villager = e["spawns_villager"].get<bool>();
            t.grants_treasure = e["grants_treasure"].get<bool>();
        } catch (const nlohmann::json::exception& ex) {
            throw GameError(ErrorCode::ParseError, "tile entry " + std::to_string(i) + ": " + ex.what());
        }

        const auto slot = static_cast<size_t>(t.id.value());
        if (seen[slot]) throw GameError(ErrorCode::DuplicateId, "tile id " + std::to_string(slot) + " declared twice");
        seen[slot] = true;
        if (t.name.empty() || !names.insert(t.name).second) {
            throw GameError(ErrorCode::DuplicateId, "tile name '" + t.name + "' is empty or repeated");
        }

        semantics(t.speed_multiplier > 0.0 && t.speed_multiplier <= 1.0, t, "speed_multiplier must be in (0, 1]");
        if (t.category == TileCategory::Rock) semantics(!t.walkable, t, "rock tiles cannot be walkable");
        if (t.category == TileCategory::Water) {
            semantics(t.walkable && t.speed_multiplier < 1.0, t, "water must be walkable and slow movement");
        }
        semantics(t.choppable == (t.category == TileCategory::Tree), t, "choppable iff Tree category");
        semantics(t.heals == (t.category == TileCategory::Flowers), t, "heals iff Flowers category");
        semantics(t.spawns_villager == is_house(t.category), t, "spawns_villager iff house category");
        semantics(t.grants_treasure == (t.category == TileCategory::TreasureBall), t,
                  "grants_treasure iff TreasureBall category");
        set.tiles_[slot] = std::move(t);
    }

    auto has = [&](auto pred) {
        for (const auto& t : set.tiles_) {
            if (pred(t.category)) return true;
        }
        return false;
    };
    auto is = [](TileCategory want) { return [want](TileCategory c) { return c == want; }; };
    const bool complete = has(is(TileCategory::Grass)) && has(is(TileCategory::Flowers)) &&
                          has(is(TileCategory::Bushes)) && has(is(TileCategory::Path)) &&
                          has(is(TileCategory::Sand)) && has(is(TileCategory::Rock)) &&
                          has([](TileCategory c) { return c == TileCategory::Fence || c == TileCategory::Post; }) &&
                          has(is(TileCategory::Tree)) && has(is(TileCategory::Water)) && has(is_house) &&
                          has(is(TileCategory::TreasureBall));
    if (!complete) {
        throw GameError(ErrorCode::SemanticsViolation, "tileset lacks one of the required tile categories");
    }
    return set;
}

TileSet load_tileset_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GameError(ErrorCode::IoError, "cannot open tileset " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw GameError(ErrorCode::ParseError, path.string() + ": " + ex.what());
    }
    return load_tileset(doc);
}

SubGridCoord world_to_subgrid(int x, int y) {
    if (!in_world(Cell{x, y})) {
        throw GameError(ErrorCode::OutOfBounds,
                        "cell (" + std::to_string(x) + "," + std::to_string(y) + ") outside the 40x40 world");
    }
    return {(y / kSubGridSize) * kGridsPerSide + x / kSubGridSize, x % kSubGridSize, y % kSubGridSize};
}

Cell subgrid_to_world(const SubGridCoord& c) {
    if (c.grid_index < 0 || c.grid_index >= kGridCount || c.local_x < 0 || c.local_x >= kSubGridSize ||
        c.local_y < 0 || c.local_y >= kSubGridSize) {
        throw GameError(ErrorCode::OutOfBounds, "sub-grid coordinate out of range");
    }
    const Cell o = grid_origin(c.grid_index);
    return {o.x + c.local_x, o.y + c.local_y};
}

Cell grid_origin(int grid_index) {
    if (grid_index < 0 || grid_index >= kGridCount) {
        throw GameError(ErrorCode::InvalidIndex, "grid index " + std::to_string(grid_index) + " outside [0, 15]");
    }
    return {(grid_index % kGridsPerSide) * kSubGridSize, (grid_index / kGridsPerSide) * kSubGridSize};
}

TileGrid TileGrid::filled(TileId id) {
    TileGrid g;
    g.cells_.fill(id);
    return g;
}

TileGrid TileGrid::from_rows(const std::vector<std::vector<long long>>& rows) {
    if (rows.size() != static_cast<size_t>(kSubGridSize)) {
        throw GameError(ErrorCode::InvalidGrid, "grid has " + std::to_string(rows.size()) + " rows, expected 10");
    }
    TileGrid g;
    for (int y = 0; y < kSubGridSize; ++y) {
        const auto& row = rows[static_cast<size_t>(y)];
        if (row.size() != static_cast<size_t>(kSubGridSize)) {
            throw GameError(ErrorCode::InvalidGrid,
                            "grid row " + std::to_string(y) + " has " + std::to_string(row.size()) + " cells");
        }
        for (int x = 0; x < kSubGridSize; ++x) g.set(x, y, TileId(row[static_cast<size_t>(x)]));
    }
    return g;
}

size_t TileGrid::index(int x, int y) {
    if (x < 0 || y < 0 || x >= kSubGridSize || y >= kSubGridSize) {
        throw GameError(ErrorCode::OutOfBounds, "grid cell out of range");
    }
    return static_cast<size_t>(y * kSubGridSize + x);
}

int TileGrid::count(TileId id) const {
    int n = 0;
    for (TileId c : cells_) n += (c == id);
    return n;
}

std::vector<std::vector<int>> TileGrid::rows() const {
    std::vector<std::vector<int>> out(kSubGridSize, std::vector<int>(kSubGridSize));
    for (int y = 0; y < kSubGridSize; ++y) {
        for (int x = 0; x < kSubGridSize; ++x) out[y][x] = at(x, y).value();
    }
    return out;
}

TileId World::at(Cell c) const {
    const auto sc = world_to_subgrid(c.x, c.y);
    return grids_[static_cast<size_t>(sc.grid_index)].cells.at(sc.local_x, sc.local_y);
}

void World::set(Cell c, TileId id) {
    const auto sc = world_to_subgrid(c.x, c.y);
    grids_[static_cast<size_t>(sc.grid_index)].cells.set(sc.local_x, sc.local_y, id);
}

const SubGrid& World::grid(int grid_index) const {
    if (grid_index < 0 || grid_index >= kGridCount) {
        throw GameError(ErrorCode::InvalidIndex, "grid index " + std::to_string(grid_index) + " outside [0, 15]");
    }
    return grids_[static_cast<size_t>(grid_index)];
}

void World::set_boss_occupied(int grid_index, bool occupied) {
    grid(grid_index);
    grids_[static_cast<size_t>(grid_index)].boss_occupied = occupied;
}

int World::occupied_count() const {
    int n = 0;
    for (const auto& g : grids_) n += g.boss_occupied;
    return n;
}

void World::place(int grid_index, const TileGrid& grid) {
    if (this->grid(grid_index).boss_occupied) {
        throw GameError(ErrorCode::GridOccupiedByBoss, "grid " + std::to_string(grid_index) + " is held by a boss");
    }
    grids_[static_cast<size_t>(grid_index)].cells = grid;
}

World place_subgrid(const World& world, int grid_index, const TileGrid& grid) {
    World next = world;
    next.place(grid_index, grid);
    return next;
}

} // namespace godgame
