#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/csp.hpp"

namespace pf::cryptarithm {

// addends[0] + addends[1] (+ addends[2]) = result, words in uppercase letters.
struct Puzzle {
    std::vector<std::string> addends;
    std::string result;

    bool operator==(const Puzzle&) const = default;
};

using Mapping = std::map<char, int>;

struct Params {
    int level = 1;
    int addends = 2;
    int min_letters = 5;
    int max_letters = 6;
    int min_word_length = 3;
    int max_word_length = 7;

    // Levels 1-3 use two addends, 4-5 three. Distinct letters: 5-6, 7, 8, 9, 10.
    static Params for_level(int level);
};

inline constexpr int kMaxResamples = 200000;

PuzzleInstance generate(const Params& params, std::uint64_t seed);

// Wraps a hand-written puzzle. Throws ValidationError unless it has exactly one mapping.
PuzzleInstance from_puzzle(const Puzzle& puzzle, int level, std::uint64_t seed);

struct Solutions {
    std::uint64_t count = 0;  // capped at the requested limit
    std::optional<Mapping> first;
};

// Right-to-left column search over injective letter -> digit maps with no
// leading zeros; a column is checked as soon as its letters are bound.
Solutions solve(const Puzzle& puzzle, std::uint64_t limit);

// Letters as digits plus one carry variable per column boundary.
csp::Model to_model(const Puzzle& puzzle);

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer);

Puzzle puzzle_of(const PuzzleInstance& instance);
std::string letters_of(const Puzzle& puzzle);  // distinct letters, sorted
std::string render(const Puzzle& puzzle);      // "SEND + MORE = MONEY"

class Family final : public PuzzleFamily {
public:
    GameId id() const override { return GameId::cryptarithm; }
    PuzzleInstance generate(int level, std::uint64_t seed) const override;
    Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const override;
    std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                          std::string_view variable) const override;
};

}  // namespace pf::cryptarithm
