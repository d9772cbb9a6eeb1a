#pragma once

#include "godgame/config.hpp"
#include "godgame/generator.hpp"
#include "godgame/script.hpp"
#include "godgame/simulation.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace godgame {

// Deterministic stand-in for a human player. It reads only the state, so a
// recorded command log replays to the same game.
class BaselineBot {
public:
    struct Options {
        int decide_every_ticks = 10;
        int attack_population = 6;       // fighters and archers engage from here on
        int low_tree_threshold = 12;     // plant more forest below this many trees
        double house_share = 0.25;       // minimum house weight for a "house word"
    };

    BaselineBot(std::shared_ptr<const AffinityTable> affinity, const TileSet& tiles);
    BaselineBot(std::shared_ptr<const AffinityTable> affinity, const TileSet& tiles, Options options);

    // Commands to apply at the current tick, in order.
    std::vector<Command> decide(const GameState& state);

    bool is_house_word(std::string_view word) const;
    bool is_tree_word(std::string_view word) const;
    bool is_treasure_word(std::string_view word) const;

private:
    std::optional<Command> choose_terraform(const GameState& state) const;

    std::shared_ptr<const AffinityTable> affinity_;
    std::array<bool, kTileCount> house_tile_{};
    std::array<bool, kTileCount> tree_tile_{};
    std::array<bool, kTileCount> treasure_tile_{};
    Options options_;
};

struct RunOptions {
    int64_t max_ticks = 0;                           // 0: until 2000 s of game time
    std::optional<std::filesystem::path> prompt_log; // appended, one line per receipt
    std::optional<std::filesystem::path> receipts_log;
    std::optional<std::filesystem::path> command_log; // applied commands, replayable
};

struct RunReport {
    Outcome outcome = Outcome::Ongoing;
    int64_t ticks = 0;
    double elapsed_s = 0;
    int64_t words_gained = 0;
    int64_t words_spent = 0;
    std::vector<TerraformReceipt> receipts;
    std::vector<Command> applied;   // every accepted command with its tick
    std::vector<std::string> rejected;
    GameStats stats;
    int64_t villagers_alive = 0;
    std::string digest;
};

nlohmann::json run_report_to_json(const RunReport& report, bool include_receipts = false);

RunReport run_script(GameState& state, Generator& generator, const std::vector<Command>& commands,
                     const RunOptions& options = {});
RunReport run_bot(GameState& state, Generator& generator, BaselineBot& bot, const RunOptions& options = {});

} // namespace godgame
