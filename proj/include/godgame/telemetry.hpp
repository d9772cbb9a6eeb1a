#pragma once

#include "godgame/generator.hpp"
#include "godgame/tilemap.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace godgame {

// One prompt-log line: <tick> TAB <grid> TAB <remote|local> TAB "<prompt>" LF,
// with '"' and '\' inside the prompt escaped by a backslash.
struct PromptLogEntry {
    int64_t tick = 0;
    int grid_index = 0;
    std::string prompt;
    BackendKind backend = BackendKind::LocalRuleBased;
    int word_count = 0;

    bool operator==(const PromptLogEntry&) const = default;
};

PromptLogEntry log_entry_from_receipt(const TerraformReceipt& receipt);
int count_words(std::string_view rendered);

// Without the trailing LF.
std::string format_log_line(const PromptLogEntry& entry);
// Throws LineError(MalformedLine).
PromptLogEntry parse_log_line(std::string_view line, size_t line_number = 1);

// Writes the whole line with a single write call. Throws IoError.
void append_log(const std::filesystem::path& path, const PromptLogEntry& entry);

struct ParsedLog {
    std::vector<PromptLogEntry> entries;
    std::vector<std::string> problems; // "line N: ..." for skipped lines
};

// Lenient mode skips malformed lines and reports them; strict mode throws
// the first LineError. Throws IoError when the file cannot be read.
ParsedLog parse_log_text(std::string_view text, bool strict = false);
ParsedLog parse_log(const std::filesystem::path& path, bool strict = false);

inline constexpr int kLengthBuckets = 5; // 1, 2, 3, 4, 5+

struct LengthHistogram {
    std::array<int64_t, kLengthBuckets> counts{};
    std::array<double, kLengthBuckets> percent{};
    int64_t total = 0;
};

std::string_view length_bucket_label(int bucket);
// Throws EmptyLog.
LengthHistogram prompt_length_histogram(const std::vector<PromptLogEntry>& entries);

// Reporting groups: fences and posts merge, the three house tiles merge,
// decorative variants stay separate.
enum class TileGroup : uint8_t {
    Grass,
    Flowers,
    Bushes,
    Path,
    Sand,
    Rocks,
    FencesPosts,
    Trees,
    Water,
    Houses,
    TreasureBalls,
    Decorative,
};
inline constexpr int kTileGroupCount = 12;

std::string_view tile_group_name(TileGroup g);
TileGroup tile_group_of(TileCategory c);

struct TileFrequency {
    std::array<int64_t, kTileGroupCount> counts{};
    std::array<double, kTileGroupCount> percent{};
    int64_t total = 0;

    TileGroup modal() const;
};

// Throws EmptyInput.
TileFrequency tile_frequency(const std::vector<TileGrid>& grids, const TileSet& tiles);
TileFrequency tile_frequency(const std::vector<TerraformReceipt>& receipts, const TileSet& tiles);

// Receipts as JSON lines, one receipt object per line.
void append_receipt(const std::filesystem::path& path, const TerraformReceipt& receipt);
std::vector<TerraformReceipt> load_receipts(const std::filesystem::path& path);

// Plain-text tables.
std::string format_length_table(const LengthHistogram& h);
std::string format_tile_table(const TileFrequency& f);

} // namespace godgame
