#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>

#include "puzzle_forge/agents.hpp"
#include "puzzle_forge/curriculum.hpp"
#include "puzzle_forge/reward.hpp"

namespace pf::simulate {

struct SimulationConfig {
    curriculum::CurriculumConfig curriculum;
    agents::AgentSpec agent;
    reward::RewardConfig reward;  // applied to every game
    std::uint64_t seed = 0;
    std::uint64_t budget = 20000;          // total graded episodes
    std::uint64_t snapshot_every = 1000;   // 0 disables snapshots
    // Curriculum decisions use a second, freshly generated instance per
    // episode drawn from a seed stream disjoint from the training one.
    bool holdout = false;
};

struct SimulationResult {
    bool completed = false;  // every game mastered before the budget ran out
    std::uint64_t episodes = 0;
    std::map<GameId, std::uint64_t> episodes_per_game;
    std::map<GameId, int> levels;
    curriculum::CurriculumState state;
};

// Runs sample -> generate -> agent -> grade -> record -> maybe_advance until
// every game is mastered or the budget is spent. Mastered games leave the
// mixture. Writes one JSON line per advance event and snapshot to `log`.
SimulationResult run(const SimulationConfig& config, std::ostream* log = nullptr);

}  // namespace pf::simulate
