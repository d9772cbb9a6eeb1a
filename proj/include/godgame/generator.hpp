#pragma once

#include "godgame/errors.hpp"
#include "godgame/tilemap.hpp"
#include "godgame/wordbank.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace godgame {

struct Prompt {
    std::vector<std::string> words;
    std::string rendered;

    bool operator==(const Prompt&) const = default;
};

std::string render_words(const std::vector<std::string>& words);

// Throws EmptySelection or WordNotOwned.
Prompt compose_prompt(const WordInventory& inventory, const std::vector<std::string>& selection);

enum class BackendKind : uint8_t { Remote, LocalRuleBased };

// "remote" / "local", as written to prompt logs.
std::string_view backend_name(BackendKind kind);
std::optional<BackendKind> parse_backend_name(std::string_view name);

class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    virtual BackendKind kind() const = 0;
    // Returns a validated grid or throws a GameError (Timeout, ServerError,
    // MalformedResponse). Backends that are not seeded ignore `seed`.
    virtual TileGrid generate(const Prompt& prompt, uint64_t seed) = 0;
};

// --- local rule-based stand-in -------------------------------------------

enum class LayoutHint : uint8_t { Cluster, River, Scatter, Border };

std::string_view hint_name(LayoutHint hint);
std::optional<LayoutHint> parse_hint(std::string_view name);

struct Affinity {
    // Normalised to sum to 1, stored in micro-cells per 100-cell grid.
    std::array<int64_t, kTileCount> weights{};
    LayoutHint hint = LayoutHint::Scatter;
    TileId dominant;
};

class AffinityTable {
public:
    // {"tiles": [16 names, optional], "words": {word: {"weights": [16 numbers >= 0], "hint": "..."}}}
    static AffinityTable from_json(const nlohmann::json& document);
    static AffinityTable from_file(const std::filesystem::path& path);

    const Affinity* find(std::string_view word) const;
    const std::map<std::string, Affinity, std::less<>>& entries() const { return entries_; }

    // Dominant tile of a word with non-zero affinity.
    std::optional<TileId> dominant_tile(std::string_view word) const;

    // Tile used on zero total affinity.
    TileId fallback_tile() const { return fallback_; }

private:
    std::map<std::string, Affinity, std::less<>> entries_;
    TileId fallback_;
};

// Tile composition of the grid for a prompt; independent of the seed.
std::array<int, kTileCount> local_tile_counts(const Prompt& prompt, const AffinityTable& affinity);

// Deterministic in (prompt.rendered, seed, affinity).
TileGrid generate_local(const Prompt& prompt, uint64_t seed, const AffinityTable& affinity);

class LocalGenerator final : public GeneratorBackend {
public:
    explicit LocalGenerator(std::shared_ptr<const AffinityTable> affinity) : affinity_(std::move(affinity)) {}

    BackendKind kind() const override { return BackendKind::LocalRuleBased; }
    TileGrid generate(const Prompt& prompt, uint64_t seed) override {
        return generate_local(prompt, seed, *affinity_);
    }
    const AffinityTable& affinity() const { return *affinity_; }

private:
    std::shared_ptr<const AffinityTable> affinity_;
};

// --- wire protocol ------------------------------------------------------
//
// POST /generate with body {"prompt": "<rendered>"}; a 200 response carries
// {"grid": [[r0c0,...,r0c9],...,[r9c0,...,r9c9]]}, row 0 at the top.

std::string encode_generate_request(std::string_view rendered);
// Server side; throws BadRequest.
std::string decode_generate_request(std::string_view body);
std::string encode_grid_response(const TileGrid& grid);
// Throws MalformedResponse on any shape, type or range violation.
TileGrid decode_grid_response(std::string_view body);

struct RemoteEndpoint {
    std::string url; // e.g. http://127.0.0.1:8000 ; /generate is appended
    int timeout_ms = 2000;
};

class RemoteGenerator final : public GeneratorBackend {
public:
    explicit RemoteGenerator(RemoteEndpoint endpoint);

    BackendKind kind() const override { return BackendKind::Remote; }
    TileGrid generate(const Prompt& prompt, uint64_t seed) override;

    const RemoteEndpoint& endpoint() const { return endpoint_; }

private:
    RemoteEndpoint endpoint_;
    std::string base_;
    std::string path_;
};

// --- backend selection --------------------------------------------------

enum class GeneratorMode : uint8_t { Local, Remote, RemoteWithFallback };

std::string_view mode_name(GeneratorMode mode);
std::optional<GeneratorMode> parse_mode(std::string_view name);

struct GenerationResult {
    TileGrid grid;
    BackendKind backend = BackendKind::LocalRuleBased;
};

// Routes a request to the configured backend; with RemoteWithFallback a
// remote Timeout or ServerError is retried locally.
class Generator {
public:
    Generator(std::shared_ptr<GeneratorBackend> local, std::shared_ptr<GeneratorBackend> remote,
              GeneratorMode mode);

    GenerationResult generate(const Prompt& prompt, uint64_t seed);
    GeneratorMode mode() const { return mode_; }

private:
    std::shared_ptr<GeneratorBackend> local_;
    std::shared_ptr<GeneratorBackend> remote_;
    GeneratorMode mode_;
};

struct TerraformReceipt {
    int grid_index = 0;
    Prompt prompt;
    TileGrid grid;
    BackendKind backend = BackendKind::LocalRuleBased;
    int64_t tick = 0;
    std::vector<std::string> words_spent;

    bool operator==(const TerraformReceipt&) const = default;
};

nlohmann::json receipt_to_json(const TerraformReceipt& receipt);
TerraformReceipt receipt_from_json(const nlohmann::json& j);

} // namespace godgame
