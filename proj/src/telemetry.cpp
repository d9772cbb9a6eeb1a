#include "godgame/telemetry.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace godgame {

namespace {

void write_all_appending(const std::filesystem::path& path, const std::string& line) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) throw GameError(ErrorCode::IoError, "cannot open " + path.string() + ": " + std::strerror(errno));
    // O_APPEND makes each write land at the end as one unit.
    const ssize_t n = ::write(fd, line.data(), line.size());
    const int err = errno;
    ::close(fd);
    if (n != static_cast<ssize_t>(line.size())) {
        throw GameError(ErrorCode::IoError, "short write to " + path.string() + ": " + std::strerror(err));
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GameError(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <typename T>
bool parse_decimal(std::string_view s, T& out) {
    if (s.empty() || s.front() == '+' || s.front() == '-') return false;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string percent_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%6.2f", v);
    return buf;
}

} // namespace

int count_words(std::string_view rendered) {
    int n = 0;
    bool in_word = false;
    for (char c : rendered) {
        const bool space = c == ' ';
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

PromptLogEntry log_entry_from_receipt(const TerraformReceipt& r) {
    return {r.tick, r.grid_index, r.prompt.rendered, r.backend, count_words(r.prompt.rendered)};
}

std::string format_log_line(const PromptLogEntry& e) {
    return std::to_string(e.tick) + '\t' + std::to_string(e.grid_index) + '\t' + std::string(backend_name(e.backend)) +
           "\t\"" + escape(e.prompt) + '"';
}

PromptLogEntry parse_log_line(std::string_view line, size_t n) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::array<std::string_view, 3> head;
    size_t pos = 0;
    for (auto& field : head) {
        const size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) throw LineError(ErrorCode::MalformedLine, n, "expected 4 tab-separated fields");
        field = line.substr(pos, tab - pos);
        pos = tab + 1;
    }
    const std::string_view quoted = line.substr(pos);

    PromptLogEntry e;
    if (!parse_decimal(head[0], e.tick)) throw LineError(ErrorCode::MalformedLine, n, "bad tick");
    if (!parse_decimal(head[1], e.grid_index) || e.grid_index >= kGridCount) {
        throw LineError(ErrorCode::MalformedLine, n, "grid index outside [0, 15]");
    }
    const auto backend = parse_backend_name(head[2]);
    if (!backend) throw LineError(ErrorCode::MalformedLine, n, "backend must be remote or local");
    e.backend = *backend;

    if (quoted.size() < 2 || quoted.front() != '"' || quoted.back() != '"') {
        throw LineError(ErrorCode::MalformedLine, n, "prompt must be double-quoted");
    }
    const std::string_view body = quoted.substr(1, quoted.size() - 2);
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '"') throw LineError(ErrorCode::MalformedLine, n, "unescaped quote in prompt");
        if (c == '\\') {
            if (i + 1 >= body.size() || (body[i + 1] != '"' && body[i + 1] != '\\')) {
                throw LineError(ErrorCode::MalformedLine, n, "bad escape in prompt");
            }
            c = body[++i];
        }
        e.prompt.push_back(c);
    }
    e.word_count = count_words(e.prompt);
    return e;
}

void append_log(const std::filesystem::path& path, const PromptLogEntry& entry) {
    write_all_appending(path, format_log_line(entry) + '\n');
}

ParsedLog parse_log_text(std::string_view text, bool strict) {
    ParsedLog out;
    size_t n = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        const size_t nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++n;
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        try {
            out.entries.push_back(parse_log_line(line, n));
        } catch (const LineError& e) {
            if (strict) throw;
            out.problems.emplace_back(e.what());
        }
    }
    return out;
}

ParsedLog parse_log(const std::filesystem::path& path, bool strict) { return parse_log_text(read_file(path), strict); }

std::string_view length_bucket_label(int bucket) {
    static constexpr std::string_view kLabels[kLengthBuckets] = {"1", "2", "3", "4", "5+"};
    return kLabels[std::clamp(bucket, 0, kLengthBuckets - 1)];
}

LengthHistogram prompt_length_histogram(const std::vector<PromptLogEntry>& entries) {
    if (entries.empty()) throw GameError(ErrorCode::EmptyLog, "no log entries");
    LengthHistogram h;
    for (const auto& e : entries) ++h.counts[static_cast<size_t>(std::clamp(e.word_count, 1, kLengthBuckets) - 1)];
    h.total = static_cast<int64_t>(entries.size());
    for (size_t i = 0; i < kLengthBuckets; ++i) h.percent[i] = 100.0 * static_cast<double>(h.counts[i]) / h.total;
    return h;
}

std::string_view tile_group_name(TileGroup g) {
    switch (g) {
    case TileGroup::Grass: return "Grass";
    case TileGroup::Flowers: return "Flowers";
    case TileGroup::Bushes: return "Bushes";
    case TileGroup::Path: return "Path";
    case TileGroup::Sand: return "Sand";
    case TileGroup::Rocks: return "Rocks/Mountains";
    case TileGroup::FencesPosts: return "Fences/Posts";
    case TileGroup::Trees: return "Trees";
    case TileGroup::Water: return "Water";
    case TileGroup::Houses: return "Houses";
    case TileGroup::TreasureBalls: return "Treasure Balls";
    case TileGroup::Decorative: return "Decorative";
    }
    return "?";
}

TileGroup tile_group_of(TileCategory c) {
    switch (c) {
    case TileCategory::Grass: return TileGroup::Grass;
    case TileCategory::Flowers: return TileGroup::Flowers;
    case TileCategory::Bushes: return TileGroup::Bushes;
    case TileCategory::Path: return TileGroup::Path;
    case TileCategory::Sand: return TileGroup::Sand;
    case TileCategory::Rock: return TileGroup::Rocks;
    case TileCategory::Fence:
    case TileCategory::Post: return TileGroup::FencesPosts;
    case TileCategory::Tree: return TileGroup::Trees;
    case TileCategory::Water: return TileGroup::Water;
    case TileCategory::HouseDoor:
    case TileCategory::HouseWindow:
    case TileCategory::HouseRoof: return TileGroup::Houses;
    case TileCategory::TreasureBall: return TileGroup::TreasureBalls;
    case TileCategory::Decorative: return TileGroup::Decorative;
    }
    return TileGroup::Decorative;
}

TileGroup TileFrequency::modal() const {
    return static_cast<TileGroup>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

TileFrequency tile_frequency(const std::vector<TileGrid>& grids, const TileSet& tiles) {
    if (grids.empty()) throw GameError(ErrorCode::EmptyInput, "no generated grids");
    TileFrequency f;
    for (const auto& g : grids) {
        for (TileId id : g.cells()) ++f.counts[static_cast<size_t>(tile_group_of(tiles.category(id)))];
    }
    f.total = static_cast<int64_t>(grids.size()) * kSubGridSize * kSubGridSize;
    for (size_t i = 0; i < kTileGroupCount; ++i) f.percent[i] = 100.0 * static_cast<double>(f.counts[i]) / f.total;
    return f;
}

TileFrequency tile_frequency(const std::vector<TerraformReceipt>& receipts, const TileSet& tiles) {
    std::vector<TileGrid> grids;
    grids.reserve(receipts.size());
    for (const auto& r : receipts) grids.push_back(r.grid);
    return tile_frequency(grids, tiles);
}

void append_receipt(const std::filesystem::path& path, const TerraformReceipt& receipt) {
    write_all_appending(path, receipt_to_json(receipt).dump() + '\n');
}

std::vector<TerraformReceipt> load_receipts(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    std::vector<TerraformReceipt> out;
    std::istringstream in(text);
    std::string line;
    size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            out.push_back(receipt_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw LineError(ErrorCode::MalformedLine, n, e.what());
        } catch (const GameError& e) {
            throw LineError(ErrorCode::MalformedLine, n, e.what());
        }
    }
    return out;
}

std::string format_length_table(const LengthHistogram& h) {
    std::string out = "Prompt length   Count   Percent\n";
    for (int i = 0; i < kLengthBuckets; ++i) {
        std::string label(length_bucket_label(i));
        label += i == 0 ? " word" : " words";
        label.resize(14, ' ');
        const auto idx = static_cast<size_t>(i);
        std::string count = std::to_string(h.counts[idx]);
        count.insert(0, count.size() < 7 ? 7 - count.size() : 0, ' ');
        out += label + "  " + count + "   " + percent_cell(h.percent[idx]) + "\n";
    }
    out += "Total           " + std::to_string(h.total) + "\n";
    return out;
}

std::string format_tile_table(const TileFrequency& f) {
    std::string out = "Tile type         Count   Percent\n";
    for (int i = 0; i < kTileGroupCount; ++i) {
        std::string label(tile_group_name(static_cast<TileGroup>(i)));
        label.resize(16, ' ');
        const auto idx = static_cast<size_t>(i);
        std::string count = std::to_string(f.counts[idx]);
        count.insert(0, count.size() < 7 ? 7 - count.size() : 0, ' ');
        out += label + "  " + count + "   " + percent_cell(f.percent[idx]) + "\n";
    }
    out += "Total cells       " + std::to_string(f.total) + "\n";
    return out;
}

} // namespace godgame
