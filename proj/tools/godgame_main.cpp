#include "godgame/config.hpp"
#include "godgame/runner.hpp"
#include "godgame/server.hpp"
#include "godgame/snapshot.hpp"
#include "godgame/telemetry.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace godgame;
using nlohmann::json;

namespace {

struct CommonOptions {
    uint64_t seed = 0;
    std::string config;
    std::string out;
    std::string generator_url;
    int generator_timeout_ms = -1;
    bool fallback = true;
    std::string tileset;
    std::string wordfreq;
    std::string data_dir;
};

GameConfig build_config(const CommonOptions& o) {
    GameConfig c = o.config.empty() ? default_config() : load_config_file(o.config);
    if (!o.data_dir.empty()) {
        const std::filesystem::path d = o.data_dir;
        c.tileset_path = d / "tileset.json";
        c.wordfreq_path = d / "wordfreq.tsv";
        c.affinity_path = d / "affinity.json";
    }
    if (!o.tileset.empty()) c.tileset_path = o.tileset;
    if (!o.wordfreq.empty()) c.wordfreq_path = o.wordfreq;
    if (!o.generator_url.empty()) {
        c.generator.url = o.generator_url;
        c.generator.mode = o.fallback ? GeneratorMode::RemoteWithFallback : GeneratorMode::Remote;
    }
    if (o.generator_timeout_ms >= 0) c.generator.timeout_ms = o.generator_timeout_ms;
    validate_config(c);
    return c;
}

void emit(const CommonOptions& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) throw GameError(ErrorCode::IoError, "cannot write " + o.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

// --- run -------------------------------------------------------------------

struct RunArgs {
    std::string policy = "bot";
    std::string script;
    std::string log;
    std::string receipts;
    std::string commands;
    double max_seconds = 0;
    bool with_receipts = false;
};

int cmd_run(const CommonOptions& o, const RunArgs& a) {
    const GameConfig config = build_config(o);
    const GameResources res = load_resources(config);
    GameState state = new_game(config, res, o.seed);
    Generator generator = make_generator(config, res);

    RunOptions ro;
    if (a.max_seconds > 0) ro.max_ticks = std::llround(a.max_seconds / config.clock.tick_seconds);
    if (!a.log.empty()) ro.prompt_log = a.log;
    if (!a.receipts.empty()) ro.receipts_log = a.receipts;
    if (!a.commands.empty()) ro.command_log = a.commands;

    RunReport report;
    if (a.policy == "bot") {
        BaselineBot bot(res.affinity, *res.tileset);
        report = run_bot(state, generator, bot, ro);
    } else {
        if (a.script.empty()) throw GameError(ErrorCode::BadRequest, "--policy script needs --script");
        report = run_script(state, generator, load_script(a.script), ro);
    }
    json j = run_report_to_json(report, a.with_receipts);
    j["seed"] = o.seed;
    j["policy"] = a.policy;
    emit(o, j.dump(2));
    return 0;
}

// --- audit-generator -------------------------------------------------------

struct AuditArgs {
    std::vector<std::string> prompts;
    std::string prompts_file;
    int seeds = 10;
};

Prompt prompt_from_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    if (words.empty()) throw GameError(ErrorCode::EmptySelection, "empty prompt");
    return Prompt{words, render_words(words)};
}

double mean_pairwise_difference(const std::vector<TileGrid>& grids) {
    if (grids.size() < 2) return 0.0;
    int64_t diff = 0;
    int64_t pairs = 0;
    for (size_t i = 0; i < grids.size(); ++i) {
        for (size_t j = i + 1; j < grids.size(); ++j) {
            for (size_t k = 0; k < grids[i].cells().size(); ++k) diff += grids[i].cells()[k] != grids[j].cells()[k];
            ++pairs;
        }
    }
    return static_cast<double>(diff) / static_cast<double>(pairs);
}

int cmd_audit(const CommonOptions& o, AuditArgs a) {
    if (a.seeds < 1) throw GameError(ErrorCode::BadRequest, "--seeds must be >= 1");
    if (!a.prompts_file.empty()) {
        std::ifstream in(a.prompts_file);
        if (!in) throw GameError(ErrorCode::IoError, "cannot read " + a.prompts_file);
        for (std::string line; std::getline(in, line);) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) a.prompts.push_back(line);
        }
    }
    if (a.prompts.empty()) throw GameError(ErrorCode::BadRequest, "no prompts given");

    const GameConfig config = build_config(o);
    const GameResources res = load_resources(config);
    Generator generator = make_generator(config, res);
    const Vocabulary& vocab = res.pool->vocabulary();

    json report = {{"backend", std::string(mode_name(config.generator.mode))}, {"seeds", a.seeds}};
    json results = json::array();
    bool all_ok = true;
    for (const auto& text : a.prompts) {
        const Prompt prompt = prompt_from_text(text);
        json unknown = json::array();
        for (const auto& w : prompt.words) {
            if (!vocab.contains(w)) unknown.push_back(w);
        }
        std::vector<TileGrid> grids;
        json backends = json::object();
        for (int i = 0; i < a.seeds; ++i) {
            const auto r = generator.generate(prompt, o.seed + static_cast<uint64_t>(i));
            grids.push_back(r.grid);
            const std::string b(backend_name(r.backend));
            backends[b] = backends.value(b, 0) + 1;
        }
        // Every grid passed the decoder or the local builder; recheck anyway.
        bool valid = true;
        for (const auto& g : grids) {
            std::vector<std::vector<long long>> rows;
            for (const auto& r : g.rows()) rows.emplace_back(r.begin(), r.end());
            try {
                (void)TileGrid::from_rows(rows);
            } catch (const GameError&) {
                valid = false;
            }
        }
        const bool deterministic = generator.generate(prompt, o.seed).grid == grids.front();
        const TileFrequency freq = tile_frequency(grids, *res.tileset);
        json hist = json::object();
        for (int g = 0; g < kTileGroupCount; ++g) {
            const auto gi = static_cast<size_t>(g);
            hist[std::string(tile_group_name(static_cast<TileGroup>(g)))] = {{"count", freq.counts[gi]},
                                                                            {"percent", freq.percent[gi]}};
        }
        all_ok = all_ok && valid;
        results.push_back({{"prompt", prompt.rendered},
                           {"unknown_words", unknown},
                           {"valid", valid},
                           {"deterministic", deterministic},
                           {"diversity", mean_pairwise_difference(grids)},
                           {"modal_group", std::string(tile_group_name(freq.modal()))},
                           {"backends", backends},
                           {"histogram", hist}});
    }
    report["prompts"] = results;
    emit(o, report.dump(2));
    return all_ok ? 0 : 1;
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
    std::string logfile;
    std::string receipts;
    bool strict = false;
    bool json_output = false;
};

int cmd_analyze(const CommonOptions& o, const AnalyzeArgs& a) {
    const ParsedLog log = parse_log(a.logfile, a.strict);
    for (const auto& p : log.problems) std::cerr << "warning: " << p << '\n';
    const LengthHistogram lengths = prompt_length_histogram(log.entries);

    const GameConfig config = build_config(o);
    const TileSet tiles = load_tileset_file(config.tileset_path);
    TileFrequency freq;
    std::string source;
    if (!a.receipts.empty()) {
        freq = tile_frequency(load_receipts(a.receipts), tiles);
        source = "receipts";
    } else {
        // Without receipts the grids are regenerated locally, one per logged prompt.
        const auto affinity = AffinityTable::from_file(config.affinity_path);
        std::vector<TileGrid> grids;
        for (const auto& e : log.entries) {
            const Prompt p = prompt_from_text(e.prompt);
            grids.push_back(generate_local(p, derive_seed(o.seed, std::to_string(e.tick) + ":" + std::to_string(e.grid_index)),
                                           affinity));
        }
        freq = tile_frequency(grids, tiles);
        source = "regenerated locally";
    }

    if (a.json_output) {
        json lj = json::object();
        json tj = json::object();
        for (int b = 0; b < kLengthBuckets; ++b) {
            const auto bi = static_cast<size_t>(b);
            lj[std::string(length_bucket_label(b))] = {{"count", lengths.counts[bi]}, {"percent", lengths.percent[bi]}};
        }
        for (int g = 0; g < kTileGroupCount; ++g) {
            const auto gi = static_cast<size_t>(g);
            tj[std::string(tile_group_name(static_cast<TileGroup>(g)))] = {{"count", freq.counts[gi]},
                                                                          {"percent", freq.percent[gi]}};
        }
        emit(o, json{{"entries", lengths.total},
                     {"skipped_lines", log.problems.size()},
                     {"prompt_lengths", lj},
                     {"tile_frequency", tj},
                     {"tile_source", source}}
                    .dump(2));
        return 0;
    }
    std::ostringstream out;
    out << "Prompt lengths (" << lengths.total << " prompts)\n" << format_length_table(lengths) << '\n';
    out << "Tile frequency (" << freq.total << " tiles, " << source << ")\n" << format_tile_table(freq);
    emit(o, out.str());
    return 0;
}

// --- serve ------------------------------------------------------------------

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string state_dir;
    bool realtime = false;
    double speed = 1.0;
};

GameServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const CommonOptions& o, const ServeArgs& a) {
    ServerOptions so;
    so.base_config = build_config(o);
    if (!a.state_dir.empty()) so.state_dir = a.state_dir;
    so.realtime = a.realtime;
    if (a.speed <= 0) throw GameError(ErrorCode::BadRequest, "--speed must be > 0");
    so.speed = a.speed;
    GameServer server(so);
    if (const size_t n = server.recover()) std::cerr << "recovered " << n << " session(s)\n";
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << a.host << ':' << a.port << '\n';
    if (!server.listen(a.host, a.port)) {
        g_server = nullptr;
        throw GameError(ErrorCode::IoError, "cannot listen on " + a.host + ":" + std::to_string(a.port));
    }
    g_server = nullptr;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Text-prompted terraforming god game: headless runs, audits, analysis and the HTTP server"};
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "Game seed");
        sub->add_option("--config", common.config, "JSON config overrides file")->check(CLI::ExistingFile);
        sub->add_option("--out", common.out, "Write the report here instead of stdout");
        sub->add_option("--generator-url", common.generator_url, "Remote generator base URL");
        sub->add_option("--generator-timeout-ms", common.generator_timeout_ms, "Remote generator timeout")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--fallback", common.fallback, "Fall back to the local generator on remote failure")
            ->default_val(true);
        sub->add_option("--tileset", common.tileset, "Tileset JSON")->check(CLI::ExistingFile);
        sub->add_option("--wordfreq", common.wordfreq, "Word frequency TSV")->check(CLI::ExistingFile);
        sub->add_option("--data-dir", common.data_dir, "Directory with tileset.json, wordfreq.tsv, affinity.json")
            ->check(CLI::ExistingDirectory);
    };

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Play one headless game and print a run report");
    add_common(run_cmd);
    run_cmd->add_option("--policy", run.policy, "bot or script")->check(CLI::IsMember({"bot", "script"}));
    run_cmd->add_option("--script", run.script, "Command script")->check(CLI::ExistingFile);
    run_cmd->add_option("--log", run.log, "Append prompt log lines here");
    run_cmd->add_option("--receipts", run.receipts, "Append receipts as JSON lines here");
    run_cmd->add_option("--commands", run.commands, "Write the applied commands as a replayable script");
    run_cmd->add_option("--max-seconds", run.max_seconds, "Simulated time limit (default 2000)");
    run_cmd->add_flag("--with-receipts", run.with_receipts, "Include full receipts in the report");

    AuditArgs audit;
    auto* audit_cmd = app.add_subcommand("audit-generator", "Histogram, diversity and determinism audit of the generator");
    add_common(audit_cmd);
    audit_cmd->add_option("--prompt", audit.prompts, "Prompt text (repeatable)");
    audit_cmd->add_option("--prompts", audit.prompts_file, "File with one prompt per line")->check(CLI::ExistingFile);
    audit_cmd->add_option("--seeds", audit.seeds, "Seeds per prompt, starting at --seed");

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Prompt-length and tile-frequency tables from a prompt log");
    add_common(analyze_cmd);
    analyze_cmd->add_option("logfile", analyze.logfile, "Prompt log")->required()->check(CLI::ExistingFile);
    analyze_cmd->add_option("--receipts", analyze.receipts, "Receipts JSON lines for the tile table")
        ->check(CLI::ExistingFile);
    analyze_cmd->add_flag("--strict", analyze.strict, "Fail on the first malformed line");
    analyze_cmd->add_flag("--json", analyze.json_output, "Emit JSON instead of text tables");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Run the session HTTP server");
    add_common(serve_cmd);
    serve_cmd->add_option("--host", serve.host, "Bind address");
    serve_cmd->add_option("--port", serve.port, "Port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--state-dir", serve.state_dir, "Persist sessions here and recover them on start");
    serve_cmd->add_flag("--realtime", serve.realtime, "Advance sessions on the wall clock");
    serve_cmd->add_option("--speed", serve.speed, "Real-time speed multiplier");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(common, run);
        if (audit_cmd->parsed()) return cmd_audit(common, audit);
        if (analyze_cmd->parsed()) return cmd_analyze(common, analyze);
        if (serve_cmd->parsed()) return cmd_serve(common, serve);
    } catch (const GameError& e) {
        std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
