#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/csp.hpp"

namespace pf::knights_knaves {

enum class Op { knight, knave, not_, and_, or_, implies };

// Atoms (knight, knave) carry `who`; connectives carry their operands in `args`.
struct Formula {
    Op op = Op::knight;
    std::string who;
    std::vector<Formula> args;

    bool operator==(const Formula&) const = default;

    static Formula is_knight(std::string who) { return {Op::knight, std::move(who), {}}; }
    static Formula is_knave(std::string who) { return {Op::knave, std::move(who), {}}; }
    static Formula negation(Formula f) { return {Op::not_, {}, {std::move(f)}}; }
    static Formula conj(Formula a, Formula b) { return {Op::and_, {}, {std::move(a), std::move(b)}}; }
    static Formula disj(Formula a, Formula b) { return {Op::or_, {}, {std::move(a), std::move(b)}}; }
    static Formula implication(Formula a, Formula b) { return {Op::implies, {}, {std::move(a), std::move(b)}}; }
};

struct Statement {
    std::string speaker;
    Formula body;

    bool operator==(const Statement&) const = default;
};

struct Params {
    int level = 1;
    int characters = 2;
    int max_depth = 1;

    // Characters per level: 2..6. Nesting depth: 1, 1, 2, 2, 3.
    // Depth-1 levels use atoms and conjunction only.
    static Params for_level(int level);
};

inline constexpr int kStatementBudget = 200;
inline constexpr int kMaxRestarts = 50;

// Atoms have depth 0; each connective adds one.
int depth(const Formula& f);

// Throws ValidationError if a referenced character is unassigned or holds
// something other than "knight"/"knave".
bool evaluate(const Formula& f, const Assignment& assignment);

std::string render(const Formula& f);
std::string render(const Statement& s);

json to_json(const Formula& f);
Formula formula_from_json(const json& j);

// Character names: "A", "B", ...
std::vector<std::string> character_names(int n);

// Number of the 2^n assignments in which every statement's truth matches its
// speaker's type, capped at `limit`.
std::uint64_t count_consistent(const std::vector<std::string>& characters, const std::vector<Statement>& statements,
                               std::uint64_t limit);

// One table constraint per statement over the speaker and referenced characters.
csp::Model to_model(const std::vector<std::string>& characters, const std::vector<Statement>& statements);

PuzzleInstance generate(const Params& params, std::uint64_t seed);

// Wraps hand-written statements. Throws ValidationError unless exactly one
// assignment is consistent.
PuzzleInstance from_statements(const std::vector<std::string>& characters, const std::vector<Statement>& statements,
                               int level, std::uint64_t seed);

std::vector<std::string> characters_of(const PuzzleInstance& instance);
std::vector<Statement> statements_of(const PuzzleInstance& instance);

// Rule check: total, well-typed, every statement consistent with its speaker.
Verdict check_final(const PuzzleInstance& instance, const Assignment& answer);
bool matches_solution(const PuzzleInstance& instance, const Assignment& answer);

class Family final : public PuzzleFamily {
public:
    GameId id() const override { return GameId::knights_knaves; }
    PuzzleInstance generate(int level, std::uint64_t seed) const override;
    Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const override;
    std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                          std::string_view variable) const override;
};

}  // namespace pf::knights_knaves
