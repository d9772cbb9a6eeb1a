#include "support.hpp"

#include "godgame/runner.hpp"
#include "godgame/telemetry.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace godgame;
using namespace godgame::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("godgame_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

PromptLogEntry entry(int64_t tick, int grid, std::string prompt, BackendKind b) {
    const int n = count_words(prompt);
    return {tick, grid, std::move(prompt), b, n};
}

} // namespace

TEST_CASE("log line format") {
    const auto e = entry(120, 3, "a river in a forest", BackendKind::Remote);
    CHECK(e.word_count == 5);
    CHECK(format_log_line(e) == "120\t3\tremote\t\"a river in a forest\"");
    CHECK(parse_log_line(format_log_line(e)) == e);

    const auto odd = entry(7, 15, "say \"hi\" \\ bye", BackendKind::LocalRuleBased);
    CHECK(format_log_line(odd) == "7\t15\tlocal\t\"say \\\"hi\\\" \\\\ bye\"");
    CHECK(parse_log_line(format_log_line(odd)) == odd);
}

TEST_CASE("malformed log lines") {
    for (const char* bad : {"120\t3", "x\t3\tremote\t\"a\"", "1\t16\tremote\t\"a\"", "1\t3\tcloud\t\"a\"",
                            "1\t3\tremote\ta", "1\t3\tremote\t\"a\\\"", "1\t3\tremote\t\"a\"b\""}) {
        try {
            parse_log_line(bad, 4);
            FAIL(bad);
        } catch (const LineError& e) {
            CHECK(e.code() == ErrorCode::MalformedLine);
            CHECK(e.line() == 4);
        }
    }
    const ParsedLog lenient = parse_log_text("1\t0\tlocal\t\"forest\"\n120\t3\n2\t1\tremote\t\"lake\"\n");
    CHECK(lenient.entries.size() == 2);
    REQUIRE(lenient.problems.size() == 1);
    CHECK(lenient.problems[0].rfind("line 2", 0) == 0);
    CHECK_THROWS_AS(parse_log_text("1\t0\tlocal\t\"forest\"\n120\t3\n", true), LineError);
    CHECK(parse_log_text("").entries.empty());
}

TEST_CASE("log round trip over 1k random receipts") {
    TempDir dir;
    const auto path = dir.path / "prompts.log";
    const auto& words = shared_resources().pool->queue();
    Rng rng(5);
    std::vector<PromptLogEntry> written;
    for (int i = 0; i < 1000; ++i) {
        TerraformReceipt r;
        r.tick = static_cast<int64_t>(rng.uniform_below(100000));
        r.grid_index = static_cast<int>(rng.uniform_below(16));
        for (uint64_t k = 0; k <= rng.uniform_below(7); ++k) r.prompt.words.push_back(words[rng.uniform_below(1000)]);
        r.prompt.rendered = render_words(r.prompt.words);
        r.backend = rng.coin() ? BackendKind::Remote : BackendKind::LocalRuleBased;
        const auto e = log_entry_from_receipt(r);
        CHECK(e.word_count == static_cast<int>(r.prompt.words.size()));
        append_log(path, e);
        written.push_back(e);
    }
    const ParsedLog back = parse_log(path, true);
    CHECK(back.entries == written);
    const std::string text = read_file(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1000);
}

TEST_CASE("concurrent appends stay line-atomic") {
    TempDir dir;
    const auto path = dir.path / "prompts.log";
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 200; ++i) {
                append_log(path, entry(i, t, "a river in a forest with many many words " + std::to_string(t), BackendKind::Remote));
            }
        });
    }
    for (auto& th : threads) th.join();
    const ParsedLog back = parse_log(path, true);
    CHECK(back.entries.size() == 1600);
}

TEST_CASE("unreadable log is an IoError") {
    try {
        parse_log("/nonexistent/dir/prompts.log");
        FAIL("expected IoError");
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("prompt length histogram") {
    std::vector<PromptLogEntry> es = {entry(0, 0, "a", BackendKind::Remote), entry(0, 0, "b", BackendKind::Remote),
                                      entry(0, 0, "a b", BackendKind::Remote)};
    const auto h = prompt_length_histogram(es);
    CHECK(h.percent[0] == doctest::Approx(66.6667).epsilon(1e-4));
    CHECK(h.percent[1] == doctest::Approx(33.3333).epsilon(1e-4));
    CHECK(h.percent[2] == 0);
    CHECK(h.percent[4] == 0);

    es.push_back(entry(0, 0, "one two three four five six seven", BackendKind::Remote));
    CHECK(prompt_length_histogram(es).counts[4] == 1);
    CHECK(length_bucket_label(4) == "5+");

    Rng rng(3);
    std::vector<PromptLogEntry> many;
    for (int i = 0; i < 777; ++i) {
        std::string p = "w";
        for (uint64_t k = 0; k < rng.uniform_below(9); ++k) p += " w";
        many.push_back(entry(0, 0, p, BackendKind::Remote));
    }
    const auto hm = prompt_length_histogram(many);
    int64_t sum = 0;
    double pct = 0;
    for (int b = 0; b < kLengthBuckets; ++b) {
        sum += hm.counts[static_cast<size_t>(b)];
        pct += hm.percent[static_cast<size_t>(b)];
    }
    CHECK(sum == 777);
    CHECK(hm.total == 777);
    CHECK(pct == doctest::Approx(100.0));

    try {
        prompt_length_histogram({});
        FAIL("expected EmptyLog");
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::EmptyLog);
    }
}

TEST_CASE("tile frequency") {
    const TileSet& t = default_tiles();
    const auto water = tile_frequency(std::vector<TileGrid>{TileGrid::filled(tile_of(TileCategory::Water))}, t);
    CHECK(water.percent[static_cast<size_t>(TileGroup::Water)] == doctest::Approx(100.0));
    CHECK(water.modal() == TileGroup::Water);

    std::vector<TileGrid> forests;
    const Prompt forest{{"forest"}, "forest"};
    for (uint64_t seed = 0; seed < 1000; ++seed) forests.push_back(generate_local(forest, seed, *shared_resources().affinity));
    const auto f = tile_frequency(forests, t);
    CHECK(f.modal() == TileGroup::Trees);
    int64_t sum = 0;
    for (auto c : f.counts) sum += c;
    CHECK(sum == 100 * 1000);
    CHECK(f.total == 100 * 1000);

    // Fences and posts share a group, as do the three house tiles.
    CHECK(tile_group_of(TileCategory::Fence) == tile_group_of(TileCategory::Post));
    CHECK(tile_group_of(TileCategory::HouseDoor) == tile_group_of(TileCategory::HouseRoof));
    CHECK(tile_group_of(TileCategory::HouseWindow) == TileGroup::Houses);

    try {
        tile_frequency(std::vector<TerraformReceipt>{}, t);
        FAIL("expected EmptyInput");
    } catch (const GameError& e) {
        CHECK(e.code() == ErrorCode::EmptyInput);
    }
}

TEST_CASE("a headless run logs exactly one line per receipt") {
    TempDir dir;
    GameState s = new_game(default_config(), shared_resources(), 7);
    Generator gen = make_generator(s.config, shared_resources());
    BaselineBot bot(shared_resources().affinity, s.tileset());
    RunOptions o;
    o.prompt_log = dir.path / "prompts.log";
    o.receipts_log = dir.path / "receipts.jsonl";
    const RunReport r = run_bot(s, gen, bot, o);
    const ParsedLog log = parse_log(*o.prompt_log, true);
    const auto receipts = load_receipts(*o.receipts_log);
    REQUIRE(log.entries.size() == r.receipts.size());
    CHECK(receipts == r.receipts);
    for (size_t i = 0; i < receipts.size(); ++i) CHECK(log.entries[i] == log_entry_from_receipt(receipts[i]));
    CHECK_FALSE(format_length_table(prompt_length_histogram(log.entries)).empty());
    CHECK_FALSE(format_tile_table(tile_frequency(receipts, s.tileset())).empty());
}
