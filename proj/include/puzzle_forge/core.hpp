#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pf {

using json = nlohmann::json;

enum class GameId {
    sudoku,
    nonogram,
    cryptarithm,
    magic_square,
    zebra,
    graph_connectivity,
    knights_knaves,
};

inline constexpr std::array<GameId, 7> kAllGames = {
    GameId::sudoku,      GameId::nonogram,           GameId::cryptarithm,    GameId::magic_square,
    GameId::zebra,       GameId::graph_connectivity, GameId::knights_knaves,
};

std::string_view to_string(GameId game);
std::optional<GameId> parse_game(std::string_view token);

// Variable id -> value. Ordered so that iteration and serialization are canonical.
using Assignment = std::map<std::string, std::string>;

// Thrown when an instance or request violates a documented invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a generator runs out of its restart/resample budget.
class GenerationExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Boolean outcome plus a human-readable reason when it is false.
struct Verdict {
    bool ok = false;
    std::string diagnostic;

    static Verdict pass() { return {true, {}}; }
    static Verdict fail(std::string why) { return {false, std::move(why)}; }
    explicit operator bool() const { return ok; }
};

struct PuzzleInstance {
    GameId game = GameId::sudoku;
    int level = 1;
    std::uint64_t seed = 0;
    std::string prompt;
    json clues = json::object();
    Assignment solution;
    json metadata = json::object();

    bool operator==(const PuzzleInstance&) const = default;
};

// Highest difficulty level configured for a game.
int max_level(GameId game);

// Canonical form: sorted keys, no insignificant whitespace, UTF-8.
std::string instance_to_json(const PuzzleInstance& instance);
json instance_to_json_value(const PuzzleInstance& instance);
PuzzleInstance instance_from_json(std::string_view text);
PuzzleInstance instance_from_json_value(const json& value);

struct Consistency {
    bool consistent = false;
    // Variable ids of `partial` that do not exist in the solution.
    std::vector<std::string> unknown_variables;
};

// Subset-of-solution test: every entry of `partial` appears in `solution`
// with the same value.
Consistency partial_consistent(const Assignment& partial, const Assignment& solution);

// Grid games name cells "R<row>C<col>", one-based.
std::string grid_cell_name(int row, int col);  // zero-based arguments
// Zero-based (row, col) of a cell name on an n x n grid.
std::optional<std::pair<int, int>> parse_grid_cell(std::string_view name, int n);

// Text appended to every prompt: the STEP / answer grammar graders expect.
extern const std::string_view kPromptFooter;

// Common contract of every puzzle family.
class PuzzleFamily {
public:
    virtual ~PuzzleFamily() = default;

    virtual GameId id() const = 0;
    virtual int levels() const { return 5; }

    virtual PuzzleInstance generate(int level, std::uint64_t seed) const = 0;
    virtual Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const = 0;

    // Values a variable may take, in canonical spelling. Empty if `variable`
    // is outside the instance's namespace.
    virtual std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                                  std::string_view variable) const = 0;

    // Maps an accepted alternative spelling onto the canonical value; the
    // default accepts canonical spellings only.
    virtual std::optional<std::string> canonical_value(const PuzzleInstance& instance,
                                                       std::string_view variable,
                                                       std::string_view value) const;

    // Answer parsed into canonical spelling; entries outside the namespace
    // are kept verbatim so that check_final can reject them with a reason.
    Assignment canonicalize(const PuzzleInstance& instance, const Assignment& answer) const;
};

const PuzzleFamily& family(GameId game);

}  // namespace pf
