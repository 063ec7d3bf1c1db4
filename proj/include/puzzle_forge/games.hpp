#pragma once

#include <optional>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/cryptarithm.hpp"
#include "puzzle_forge/csp.hpp"
#include "puzzle_forge/graph_connectivity.hpp"
#include "puzzle_forge/knights_knaves.hpp"
#include "puzzle_forge/magic_square.hpp"
#include "puzzle_forge/nonogram.hpp"
#include "puzzle_forge/sudoku.hpp"
#include "puzzle_forge/zebra.hpp"

namespace pf {

// family(game).generate with the level range checked.
PuzzleInstance generate(GameId game, int level, std::uint64_t seed);

// The instance's constraints as a generic finite-domain model. Cryptarithm
// models carry auxiliary carry variables besides the letters.
std::optional<csp::Model> generic_model(const PuzzleInstance& instance);

}  // namespace pf
