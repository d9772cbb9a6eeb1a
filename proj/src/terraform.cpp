#include "godgame/terraform.hpp"

namespace godgame {

namespace {

void check_target(const GameState& state, int grid_index) {
    if (state.outcome != Outcome::Ongoing) throw GameError(ErrorCode::GameOver, "the game has ended");
    if (grid_index < 0 || grid_index >= kGridCount) {
        throw GameError(ErrorCode::InvalidIndex, "grid index " + std::to_string(grid_index) + " outside [0, 15]");
    }
    if (state.world.boss_occupied(grid_index)) {
        throw GameError(ErrorCode::GridOccupiedByBoss, "grid " + std::to_string(grid_index) + " is held by a boss");
    }
}

} // namespace

PreparedTerraform prepare_terraform(const GameState& state, int grid_index, const std::vector<std::string>& selection) {
    check_target(state, grid_index);
    PreparedTerraform p;
    p.grid_index = grid_index;
    p.prompt = compose_prompt(state.inventory, selection);
    Rng peek = state.rng.generation;
    p.seed = peek.next_u64();
    return p;
}

TerraformReceipt commit_terraform(GameState& state, const PreparedTerraform& prepared, const GenerationResult& result) {
    check_target(state, prepared.grid_index);
    if (!state.inventory.covers(prepared.prompt.words)) {
        throw GameError(ErrorCode::WordNotOwned, "selection is no longer owned");
    }

    TerraformReceipt receipt;
    receipt.grid_index = prepared.grid_index;
    receipt.prompt = prepared.prompt;
    receipt.grid = result.grid;
    receipt.backend = result.backend;
    receipt.tick = state.tick;
    if (state.config.words_consumable) receipt.words_spent = prepared.prompt.words;

    // Everything below is checked above, so nothing past this point throws
    // except allocation.
    WordInventory inventory = state.inventory;
    inventory.spend(receipt.words_spent);
    apply_placement(state, prepared.grid_index, result.grid);
    state.inventory = std::move(inventory);
    state.rng.generation.next_u64();
    state.stats.words_spent += static_cast<int64_t>(receipt.words_spent.size());
    state.receipts.push_back(receipt);
    state.events.push_back({state.tick, "terraform", prepared.grid_index, prepared.prompt.rendered});
    return receipt;
}

TerraformReceipt terraform(GameState& state, Generator& generator, int grid_index,
                           const std::vector<std::string>& selection) {
    const PreparedTerraform p = prepare_terraform(state, grid_index, selection);
    const GenerationResult result = generator.generate(p.prompt, p.seed);
    return commit_terraform(state, p, result);
}

} // namespace godgame
