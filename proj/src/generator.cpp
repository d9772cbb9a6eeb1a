#include "godgame/generator.hpp"

#include "godgame/rng.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace godgame {

namespace {

constexpr int64_t kMicroPerCell = 1'000'000;
constexpr int64_t kMicroPerGrid = 100 * kMicroPerCell;
constexpr int kCells = kSubGridSize * kSubGridSize;

struct LocalCell {
    int x;
    int y;
};

class Layout {
public:
    Layout(Rng& rng) : rng_(rng) { owner_.fill(-1); }

    bool free(int x, int y) const { return owner_[idx(x, y)] < 0; }
    int free_count() const {
        return static_cast<int>(std::count(owner_.begin(), owner_.end(), -1));
    }

    std::vector<LocalCell> free_cells() const {
        std::vector<LocalCell> out;
        for (int y = 0; y < kSubGridSize; ++y) {
            for (int x = 0; x < kSubGridSize; ++x) {
                if (free(x, y)) out.push_back({x, y});
            }
        }
        return out;
    }

    void claim(LocalCell c, int tile) { owner_[idx(c.x, c.y)] = tile; }

    // Grows one or more 4-connected blobs; a new seed is drawn only when the
    // current blob has no free neighbour left.
    void cluster(int tile, int count) {
        std::array<bool, kCells> mine{};
        for (int placed = 0; placed < count; ++placed) {
            std::vector<LocalCell> frontier;
            for (int y = 0; y < kSubGridSize; ++y) {
                for (int x = 0; x < kSubGridSize; ++x) {
                    if (!free(x, y)) continue;
                    const bool touches = (x > 0 && mine[idx(x - 1, y)]) || (x < 9 && mine[idx(x + 1, y)]) ||
                                         (y > 0 && mine[idx(x, y - 1)]) || (y < 9 && mine[idx(x, y + 1)]);
                    if (touches) frontier.push_back({x, y});
                }
            }
            if (frontier.empty()) frontier = free_cells();
            if (frontier.empty()) return;
            const LocalCell c = frontier[rng_.uniform_below(frontier.size())];
            claim(c, tile);
            mine[idx(c.x, c.y)] = true;
        }
    }

    // Band around a meandering edge-to-edge centreline.
    void river(int tile, int count) {
        const bool horizontal = rng_.coin();
        std::array<int, kSubGridSize> centre{};
        int offset = rng_.uniform_int(2, 7);
        for (int i = 0; i < kSubGridSize; ++i) {
            centre[i] = offset;
            offset = std::clamp(offset + rng_.uniform_int(-1, 1), 0, kSubGridSize - 1);
        }
        ordered(tile, count, [&](int x, int y) {
            return horizontal ? std::abs(y - centre[x]) : std::abs(x - centre[y]);
        });
    }

    void border(int tile, int count) {
        ordered(tile, count, [](int x, int y) {
            return std::min({x, y, kSubGridSize - 1 - x, kSubGridSize - 1 - y});
        });
    }

    void scatter(int tile, int count) {
        ordered(tile, count, [](int, int) { return 0; });
    }

    TileGrid finish(TileId fallback) const {
        TileGrid g = TileGrid::filled(fallback);
        for (int y = 0; y < kSubGridSize; ++y) {
            for (int x = 0; x < kSubGridSize; ++x) {
                const int t = owner_[idx(x, y)];
                if (t >= 0) g.set(x, y, TileId(t));
            }
        }
        return g;
    }

private:
    static size_t idx(int x, int y) { return static_cast<size_t>(y * kSubGridSize + x); }

    template <typename Rank>
    void ordered(int tile, int count, Rank rank) {
        struct Candidate {
            int rank;
            uint64_t key;
            LocalCell cell;
        };
        std::vector<Candidate> cands;
        for (const LocalCell c : free_cells()) cands.push_back({rank(c.x, c.y), rng_.next_u64(), c});
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.rank != b.rank) return a.rank < b.rank;
            if (a.key != b.key) return a.key < b.key;
            return idx(a.cell.x, a.cell.y) < idx(b.cell.x, b.cell.y);
        });
        for (int i = 0; i < count && i < static_cast<int>(cands.size()); ++i) claim(cands[i].cell, tile);
    }

    Rng& rng_;
    std::array<int, kCells> owner_{};
};

std::vector<std::vector<long long>> parse_rows(const nlohmann::json& grid) {
    if (!grid.is_array()) throw GameError(ErrorCode::MalformedResponse, "'grid' is not an array");
    std::vector<std::vector<long long>> rows;
    for (const auto& row : grid) {
        if (!row.is_array()) throw GameError(ErrorCode::MalformedResponse, "grid row is not an array");
        std::vector<long long> r;
        for (const auto& v : row) {
            if (!v.is_number_integer()) throw GameError(ErrorCode::MalformedResponse, "grid cell is not an integer");
            const bool in_range = v.is_number_unsigned() ? v.get<unsigned long long>() < kTileCount
                                                         : v.get<long long>() >= 0 && v.get<long long>() < kTileCount;
            if (!in_range) throw GameError(ErrorCode::MalformedResponse, "grid cell outside [0, 15]");
            r.push_back(v.get<long long>());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace

std::string render_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

Prompt compose_prompt(const WordInventory& inventory, const std::vector<std::string>& selection) {
    if (selection.empty()) throw GameError(ErrorCode::EmptySelection, "a prompt needs at least one word");
    for (const auto& w : selection) {
        if (w.empty() || w.find_first_of(" \t\r\n") != std::string::npos) {
            throw GameError(ErrorCode::WordNotOwned, "'" + w + "' is not a single word");
        }
    }
    if (!inventory.covers(selection)) {
        for (const auto& w : selection) {
            const auto need = static_cast<uint32_t>(std::count(selection.begin(), selection.end(), w));
            if (inventory.count(w) < need) throw GameError(ErrorCode::WordNotOwned, "word '" + w + "' is not owned");
        }
    }
    return Prompt{selection, render_words(selection)};
}

std::string_view backend_name(BackendKind kind) {
    return kind == BackendKind::Remote ? "remote" : "local";
}

std::optional<BackendKind> parse_backend_name(std::string_view name) {
    if (name == "remote") return BackendKind::Remote;
    if (name == "local") return BackendKind::LocalRuleBased;
    return std::nullopt;
}

std::string_view hint_name(LayoutHint hint) {
    switch (hint) {
        case LayoutHint::Cluster: return "cluster";
        case LayoutHint::River: return "river";
        case LayoutHint::Scatter: return "scatter";
        case LayoutHint::Border: return "border";
    }
    return "scatter";
}

std::optional<LayoutHint> parse_hint(std::string_view name) {
    for (auto h : {LayoutHint::Cluster, LayoutHint::River, LayoutHint::Scatter, LayoutHint::Border}) {
        if (hint_name(h) == name) return h;
    }
    return std::nullopt;
}

AffinityTable AffinityTable::from_json(const nlohmann::json& document) {
    if (!document.is_object() || !document.contains("words") || !document["words"].is_object()) {
        throw GameError(ErrorCode::ParseError, "affinity document needs a 'words' object");
    }
    AffinityTable table;
    if (document.contains("tiles")) {
        const auto& names = document["tiles"];
        if (!names.is_array() || names.size() != static_cast<size_t>(kTileCount)) {
            throw GameError(ErrorCode::ParseError, "affinity 'tiles' must list 16 tile names");
        }
        for (size_t i = 0; i < names.size(); ++i) {
            if (names[i] == "grass") {
                table.fallback_ = TileId(static_cast<long long>(i));
                break;
            }
        }
    }
    for (const auto& [word, entry] : document["words"].items()) {
        if (!entry.is_object() || !entry.contains("weights") || !entry["weights"].is_array() ||
            entry["weights"].size() != static_cast<size_t>(kTileCount)) {
            throw GameError(ErrorCode::ParseError, "affinity for '" + word + "' needs 16 weights");
        }
        std::array<double, kTileCount> raw{};
        double sum = 0.0;
        for (size_t i = 0; i < raw.size(); ++i) {
            const auto& v = entry["weights"][i];
            if (!v.is_number() || v.get<double>() < 0.0 || !std::isfinite(v.get<double>())) {
                throw GameError(ErrorCode::ParseError, "affinity weights for '" + word + "' must be numbers >= 0");
            }
            raw[i] = v.get<double>();
            sum += raw[i];
        }
        const auto hint = parse_hint(entry.value("hint", std::string("scatter")));
        if (!hint) throw GameError(ErrorCode::ParseError, "unknown layout hint for '" + word + "'");
        if (sum <= 0.0) continue; // contributes nothing
        Affinity a;
        a.hint = *hint;
        int best = 0;
        for (size_t i = 0; i < raw.size(); ++i) {
            a.weights[i] = std::llround(raw[i] / sum * static_cast<double>(kMicroPerGrid));
            if (a.weights[i] > a.weights[static_cast<size_t>(best)]) best = static_cast<int>(i);
        }
        a.dominant = TileId(best);
        table.entries_.emplace(word, a);
    }
    return table;
}

AffinityTable AffinityTable::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw GameError(ErrorCode::IoError, "cannot open affinity table " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& ex) {
        throw GameError(ErrorCode::ParseError, path.string() + ": " + ex.what());
    }
}

const Affinity* AffinityTable::find(std::string_view word) const {
    auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<TileId> AffinityTable::dominant_tile(std::string_view word) const {
    const Affinity* a = find(word);
    if (!a) return std::nullopt;
    return a->dominant;
}

std::array<int, kTileCount> local_tile_counts(const Prompt& prompt, const AffinityTable& affinity) {
    std::array<int64_t, kTileCount> mass{};
    bool any = false;
    for (const auto& w : prompt.words) {
        if (const Affinity* a = affinity.find(w)) {
            any = true;
            for (size_t t = 0; t < mass.size(); ++t) mass[t] += a->weights[t];
        }
    }
    std::array<int, kTileCount> counts{};
    if (!any) {
        counts[static_cast<size_t>(affinity.fallback_tile().value())] = kCells;
        return counts;
    }
    // Hand out cells one at a time to the tile with the largest remaining
    // mass (ties to the lower id). Each tile's next cell is worth its mass
    // minus one cell per cell already taken; only positive values qualify.
    int assigned = 0;
    for (; assigned < kCells; ++assigned) {
        int best = -1;
        int64_t best_value = 0;
        for (int t = 0; t < kTileCount; ++t) {
            const int64_t value = mass[static_cast<size_t>(t)] - counts[static_cast<size_t>(t)] * kMicroPerCell;
            if (value > 0 && (best < 0 || value > best_value)) {
                best = t;
                best_value = value;
            }
        }
        if (best < 0) break;
        ++counts[static_cast<size_t>(best)];
    }
    counts[static_cast<size_t>(affinity.fallback_tile().value())] += kCells - assigned;
    return counts;
}

TileGrid generate_local(const Prompt& prompt, uint64_t seed, const AffinityTable& affinity) {
    const auto counts = local_tile_counts(prompt, affinity);

    // A tile takes the layout hint of the word it dominates most strongly;
    // tiles that dominate no word are filler.
    enum Group { kCluster, kRiver, kBorder, kScatter, kFill };
    std::array<int, kTileCount> group;
    group.fill(kFill);
    std::array<int64_t, kTileCount> strongest{};
    for (const auto& w : prompt.words) {
        const Affinity* a = affinity.find(w);
        if (!a) continue;
        const auto t = static_cast<size_t>(a->dominant.value());
        if (a->weights[t] <= strongest[t]) continue;
        strongest[t] = a->weights[t];
        switch (a->hint) {
            case LayoutHint::Cluster: group[t] = kCluster; break;
            case LayoutHint::River: group[t] = kRiver; break;
            case LayoutHint::Border: group[t] = kBorder; break;
            case LayoutHint::Scatter: group[t] = kScatter; break;
        }
    }

    std::vector<int> order;
    for (int t = 0; t < kTileCount; ++t) {
        if (counts[static_cast<size_t>(t)] > 0) order.push_back(t);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ua = static_cast<size_t>(a), ub = static_cast<size_t>(b);
        if (group[ua] != group[ub]) return group[ua] < group[ub];
        if (counts[ua] != counts[ub]) return counts[ua] > counts[ub];
        return a < b;
    });

    uint64_t mix = seed ^ fnv1a64(prompt.rendered);
    Rng rng(splitmix64(mix));
    Layout layout(rng);
    for (int t : order) {
        const int n = counts[static_cast<size_t>(t)];
        switch (group[static_cast<size_t>(t)]) {
            case kCluster: layout.cluster(t, n); break;
            case kRiver: layout.river(t, n); break;
            case kBorder: layout.border(t, n); break;
            default: layout.scatter(t, n); break;
        }
    }
    return layout.finish(affinity.fallback_tile());
}

std::string encode_generate_request(std::string_view rendered) {
    return "{\"prompt\": " + nlohmann::json(std::string(rendered)).dump() + "}";
}

std::string decode_generate_request(std::string_view body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& ex) {
        throw GameError(ErrorCode::BadRequest, std::string("request is not JSON: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("prompt") || !j["prompt"].is_string()) {
        throw GameError(ErrorCode::BadRequest, "request needs a string 'prompt'");
    }
    return j["prompt"].get<std::string>();
}

std::string encode_grid_response(const TileGrid& grid) {
    std::string out = "{\"grid\": [";
    for (int y = 0; y < kSubGridSize; ++y) {
        if (y) out += ',';
        out += '[';
        for (int x = 0; x < kSubGridSize; ++x) {
            if (x) out += ',';
            out += std::to_string(grid.at(x, y).value());
        }
        out += ']';
    }
    out += "]}";
    return out;
}

TileGrid decode_grid_response(std::string_view body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& ex) {
        throw GameError(ErrorCode::MalformedResponse, std::string("response is not JSON: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("grid")) throw GameError(ErrorCode::MalformedResponse, "response lacks 'grid'");
    try {
        return TileGrid::from_rows(parse_rows(j["grid"]));
    } catch (const GameError& e) {
        if (e.code() == ErrorCode::MalformedResponse) throw;
        throw GameError(ErrorCode::MalformedResponse, e.what());
    }
}

RemoteGenerator::RemoteGenerator(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    const std::string scheme = "http://";
    if (endpoint_.url.rfind(scheme, 0) != 0) {
        throw GameError(ErrorCode::ConfigError, "generator url must start with http://: '" + endpoint_.url + "'");
    }
    if (endpoint_.timeout_ms <= 0) throw GameError(ErrorCode::ConfigError, "generator timeout must be positive");
    const size_t slash = endpoint_.url.find('/', scheme.size());
    base_ = endpoint_.url.substr(0, slash);
    path_ = slash == std::string::npos ? std::string() : endpoint_.url.substr(slash);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    path_ += "/generate";
}

TileGrid RemoteGenerator::generate(const Prompt& prompt, uint64_t) {
    httplib::Client client(base_);
    const auto ms = std::chrono::milliseconds(endpoint_.timeout_ms);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(ms));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(ms));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(ms));

    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(path_, encode_generate_request(prompt.rendered), "application/json");
    const auto waited = std::chrono::steady_clock::now() - started;

    if (!res) {
        const auto err = res.error();
        const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                               ((err == httplib::Error::Read || err == httplib::Error::Write) && waited >= ms * 9 / 10);
        if (timed_out) {
            throw GameError(ErrorCode::Timeout, "generator did not answer within " +
                                                    std::to_string(endpoint_.timeout_ms) + " ms");
        }
        throw GameError(ErrorCode::ServerError, "generator unreachable: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300) {
        throw GameError(ErrorCode::ServerError, "generator answered HTTP " + std::to_string(res->status));
    }
    return decode_grid_response(res->body);
}

std::string_view mode_name(GeneratorMode mode) {
    switch (mode) {
        case GeneratorMode::Local: return "local";
        case GeneratorMode::Remote: return "remote";
        case GeneratorMode::RemoteWithFallback: return "remote_with_fallback";
    }
    return "local";
}

std::optional<GeneratorMode> parse_mode(std::string_view name) {
    for (auto m : {GeneratorMode::Local, GeneratorMode::Remote, GeneratorMode::RemoteWithFallback}) {
        if (mode_name(m) == name) return m;
    }
    return std::nullopt;
}

Generator::Generator(std::shared_ptr<GeneratorBackend> local, std::shared_ptr<GeneratorBackend> remote,
                     GeneratorMode mode)
    : local_(std::move(local)), remote_(std::move(remote)), mode_(mode) {
    if (mode_ != GeneratorMode::Local && !remote_) {
        throw GameError(ErrorCode::ConfigError, "remote generation selected without an endpoint");
    }
    if (mode_ != GeneratorMode::Remote && !local_) {
        throw GameError(ErrorCode::ConfigError, "local generation selected without an affinity table");
    }
}

GenerationResult Generator::generate(const Prompt& prompt, uint64_t seed) {
    if (mode_ == GeneratorMode::Local) return {local_->generate(prompt, seed), local_->kind()};
    try {
        return {remote_->generate(prompt, seed), remote_->kind()};
    } catch (const GameError& e) {
        const bool recoverable = e.code() == ErrorCode::Timeout || e.code() == ErrorCode::ServerError;
        if (mode_ != GeneratorMode::RemoteWithFallback || !recoverable) throw;
    }
    return {local_->generate(prompt, seed), local_->kind()};
}

nlohmann::json receipt_to_json(const TerraformReceipt& r) {
    return {
        {"grid_index", r.grid_index},
        {"prompt", r.prompt.rendered},
        {"words", r.prompt.words},
        {"grid", r.grid.rows()},
        {"backend", std::string(backend_name(r.backend))},
        {"tick", r.tick},
        {"words_spent", r.words_spent},
    };
}

TerraformReceipt receipt_from_json(const nlohmann::json& j) {
    try {
        TerraformReceipt r;
        r.grid_index = j.at("grid_index").get<int>();
        r.prompt.words = j.at("words").get<std::vector<std::string>>();
        r.prompt.rendered = j.at("prompt").get<std::string>();
        r.grid = TileGrid::from_rows(j.at("grid").get<std::vector<std::vector<long long>>>());
        const auto backend = parse_backend_name(j.at("backend").get<std::string>());
        if (!backend) throw GameError(ErrorCode::ParseError, "unknown backend in receipt");
        r.backend = *backend;
        r.tick = j.at("tick").get<int64_t>();
        r.words_spent = j.at("words_spent").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& ex) {
        throw GameError(ErrorCode::ParseError, std::string("malformed receipt: ") + ex.what());
    }
}

} // namespace godgame
