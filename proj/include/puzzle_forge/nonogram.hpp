#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/csp.hpp"

namespace pf::nonogram {

// Run-length clue of one line. An empty line is written [0].
using Clue = std::vector<int>;
using Bitmap = std::vector<std::vector<int>>;  // 0/1 cells, row-major

struct Params {
    int level = 1;
    int n = 5;
    // Fill density, in percent, is drawn uniformly from this range per image.
    int density_min_pct = 45;
    int density_max_pct = 60;

    // Grid size per level: 5, 7, 10, 12, 15.
    static Params for_level(int level);
};

inline constexpr int kMaxResamples = 5000;

PuzzleInstance generate(const Params& params, std::uint64_t seed);

// Builds an instance from an image. Throws ValidationError unless the
// image's clues have exactly one solution.
PuzzleInstance from_bitmap(const Bitmap& image, int level, std::uint64_t seed);

Clue run_lengths(std::span<const int> line);

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer);

// Line-solver plus branching; solutions capped at `limit`.
std::uint64_t count_solutions(const std::vector<Clue>& rows, const std::vector<Clue>& cols, std::uint64_t limit);

// Generic model: one table constraint per line listing its placements.
csp::Model to_model(const std::vector<Clue>& rows, const std::vector<Clue>& cols);

std::vector<Clue> row_clues(const PuzzleInstance& instance);
std::vector<Clue> col_clues(const PuzzleInstance& instance);
std::string cell_name(int row, int col);

class Family final : public PuzzleFamily {
public:
    GameId id() const override { return GameId::nonogram; }
    PuzzleInstance generate(int level, std::uint64_t seed) const override;
    Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const override;
    std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                          std::string_view variable) const override;
};

}  // namespace pf::nonogram
