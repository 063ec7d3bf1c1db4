#pragma once

#include <cstdint>
#include <vector>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/csp.hpp"

namespace pf::magic_square {

// Row-major n x n grid; 0 marks a blank cell.
using Square = std::vector<std::vector<int>>;

struct Params {
    int level = 1;
    int n = 3;
    int removal_pct = 33;

    // n per level: 3, 4, 4, 5, 5. Removed share: 33%, 40%, 55%, 55%, 65%.
    static Params for_level(int level);
    int blanks() const;  // cells to remove, rounded half up
};

inline constexpr int kMaxRestarts = 20;

// n(n^2 + 1) / 2
std::int64_t magic_constant(int n);

// Classical constructions: Siamese for odd n, the complement-diagonals
// method for n divisible by 4. Throws ValidationError for singly-even n.
Square classical(int n);
bool is_magic(const Square& square);

PuzzleInstance generate(const Params& params, std::uint64_t seed);

// Wraps a hand-written blanked square. Throws ValidationError unless the
// completion is unique.
PuzzleInstance from_clues(const Square& clues, int level, std::uint64_t seed);

// Cells with values in 1..n^2 (givens fixed), all_different over every
// cell, and one linear_sum_eq per row, column and diagonal.
csp::Model to_model(const Square& clues);

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer);

Square clue_square(const PuzzleInstance& instance);

class Family final : public PuzzleFamily {
public:
    GameId id() const override { return GameId::magic_square; }
    PuzzleInstance generate(int level, std::uint64_t seed) const override;
    Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const override;
    std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                          std::string_view variable) const override;
};

}  // namespace pf::magic_square
