#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/csp.hpp"

namespace pf::sudoku {

// 0 marks a blank cell.
using Grid = std::array<std::array<int, 9>, 9>;

struct Params {
    int level = 1;
    int min_clues = 40;
    int max_clues = 45;

    // Clue bands: 1 -> [40,45], 2 -> [34,39], 3 -> [28,33], 4 -> [25,27], 5 -> [22,24].
    static Params for_level(int level);
};

inline constexpr int kMaxRestarts = 20;

PuzzleInstance generate(const Params& params, std::uint64_t seed);

// Wraps a hand-written clue grid. Throws ValidationError unless the grid
// has exactly one completion.
PuzzleInstance from_clues(const Grid& clues, int level, std::uint64_t seed);

// Rule check: total, agrees with the givens, 27 all-different groups.
Verdict check_final(const PuzzleInstance& instance, const Assignment& answer);
// Identity check against the stored solution.
bool matches_solution(const PuzzleInstance& instance, const Assignment& answer);

// Completions of `clues`, capped at `limit`. Bitmask solver used by the generator.
std::uint64_t count_completions(const Grid& clues, std::uint64_t limit);

// Same puzzle as a generic finite-domain model: 81 cells, 27 all_different.
csp::Model to_model(const Grid& clues);

Grid clue_grid(const PuzzleInstance& instance);
Grid solution_grid(const PuzzleInstance& instance);
std::string cell_name(int row, int col);  // zero-based in, "R1C1" out

class Family final : public PuzzleFamily {
public:
    GameId id() const override { return GameId::sudoku; }
    PuzzleInstance generate(int level, std::uint64_t seed) const override;
    Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const override;
    std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                          std::string_view variable) const override;
};

}  // namespace pf::sudoku
