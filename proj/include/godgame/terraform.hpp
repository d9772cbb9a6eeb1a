#pragma once

#include "godgame/generator.hpp"
#include "godgame/simulation.hpp"

#include <cstdint>
#include <vector>

namespace godgame {

// A validated request, ready to be generated without holding the state.
struct PreparedTerraform {
    int grid_index = 0;
    Prompt prompt;
    uint64_t seed = 0; // next value of the generation stream

    bool operator==(const PreparedTerraform&) const = default;
};

// Validates index, boss occupation and ownership; peeks the generation seed.
// Does not modify the state. Throws GameOver, InvalidIndex,
// GridOccupiedByBoss, EmptySelection, WordNotOwned.
PreparedTerraform prepare_terraform(const GameState& state, int grid_index, const std::vector<std::string>& selection);

// Re-validates against the current state, then spends the words, places the
// grid and records the receipt. Strongly exception-safe: on any error the
// state is untouched.
TerraformReceipt commit_terraform(GameState& state, const PreparedTerraform& prepared, const GenerationResult& result);

// prepare + generate + commit. A generation failure leaves the state as it
// was, so no words are lost.
TerraformReceipt terraform(GameState& state, Generator& generator, int grid_index,
                           const std::vector<std::string>& selection);

} // namespace godgame
