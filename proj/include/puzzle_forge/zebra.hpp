#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/csp.hpp"

namespace pf::zebra {

enum class ClueKind { position_fixed, same_entity, left_of, adjacent, not_at };

// position_fixed / not_at use (attr1, value1, position); the binary kinds use
// both attribute/value pairs. Positions are 1-based.
struct Clue {
    ClueKind kind = ClueKind::position_fixed;
    std::string attr1, value1;
    std::string attr2, value2;
    int position = 0;

    bool operator==(const Clue&) const = default;
};

struct Attribute {
    std::string name;
    std::vector<std::string> values;  // exactly `positions` entries

    bool operator==(const Attribute&) const = default;
};

struct Layout {
    int positions = 0;
    std::vector<Attribute> attributes;
};

struct Params {
    int level = 1;
    int positions = 3;
    int attributes = 2;

    // (positions, attributes): (3,2), (3,3), (4,3), (4,4), (5,5).
    static Params for_level(int level);
};

inline constexpr int kClueBudget = 80;
inline constexpr int kMaxRestarts = 50;

// Themed value pools, in attribute order: nationality, color, drink, pet, hobby.
const std::vector<Attribute>& value_pools();

std::string_view to_string(ClueKind kind);
std::string render(const Clue& clue);

// "attr:value" -> 1-based position.
using Placement = std::map<std::string, int>;
std::string variable(const std::string& attr, const std::string& value);

bool holds(const Clue& clue, const Placement& placement);

csp::Model to_model(const Layout& layout, const std::vector<Clue>& clues);

PuzzleInstance generate(const Params& params, std::uint64_t seed);

// Wraps a hand-written puzzle. Throws ValidationError unless the clues
// admit exactly one placement.
PuzzleInstance from_clues(const Layout& layout, const std::vector<Clue>& clues, int level, std::uint64_t seed);

Layout layout_of(const PuzzleInstance& instance);
std::vector<Clue> clues_of(const PuzzleInstance& instance);

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer);

class Family final : public PuzzleFamily {
public:
    GameId id() const override { return GameId::zebra; }
    PuzzleInstance generate(int level, std::uint64_t seed) const override;
    Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const override;
    std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                          std::string_view variable) const override;
};

}  // namespace pf::zebra
