#pragma once

#include "godgame/generator.hpp"
#include "godgame/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace godgame {

// One line of a command script:
//   <tick> terraform <grid> <word,word,...>
//   <tick> task <villager_id> move|chop|collect <x> <y>
//   <tick> task <villager_id> attack <monster_id>
//   <tick> task <villager_id> idle
// Blank lines and lines starting with '#' are ignored.
struct Command {
    enum class Kind : uint8_t { Terraform, Task };

    int64_t tick = 0;
    Kind kind = Kind::Task;
    int grid_index = 0;
    std::vector<std::string> words;
    int villager_id = 0;
    Task task;

    static Command terraform(int64_t tick, int grid_index, std::vector<std::string> words) {
        Command c;
        c.tick = tick;
        c.kind = Kind::Terraform;
        c.grid_index = grid_index;
        c.words = std::move(words);
        return c;
    }
    static Command assign(int64_t tick, int villager_id, Task task) {
        Command c;
        c.tick = tick;
        c.kind = Kind::Task;
        c.villager_id = villager_id;
        c.task = task;
        return c;
    }

    bool operator==(const Command&) const = default;
};

// nullopt for blank and comment lines; throws LineError(ParseError).
std::optional<Command> parse_command(std::string_view line, size_t line_number = 1);
std::string format_command(const Command& command);

// Ticks must be non-decreasing. Throws LineError(ParseError).
std::vector<Command> parse_script(std::string_view text);
std::vector<Command> load_script(const std::filesystem::path& path);
std::string format_script(const std::vector<Command>& commands);

// Applies one command to the state now, regardless of its tick field.
// Returns the receipt for terraform commands. Throws the engine's errors.
std::optional<TerraformReceipt> apply_command(GameState& state, Generator& generator, const Command& command);

struct ReplayResult {
    int64_t applied = 0;
    std::vector<std::string> rejected; // "<line>: <error>"
};

// Applies every command at the start of its tick and steps in between,
// stopping once the script is exhausted and `until_tick` is reached, or the
// game ends. Rejected commands are reported, not fatal.
ReplayResult replay(GameState& state, Generator& generator, const std::vector<Command>& commands,
                    int64_t until_tick);

} // namespace godgame
