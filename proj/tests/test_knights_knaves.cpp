#include <doctest.h>

#include "oracles/oracles.hpp"
#include "puzzle_forge/games.hpp"

using namespace pf;
namespace kk = pf::knights_knaves;
using kk::Formula;

TEST_CASE("two-character fixture resolves uniquely") {
    const std::vector<std::string> names{"A", "B"};
    const std::vector<kk::Statement> s{{"A", Formula::is_knave("B")},
                                       {"B", Formula::conj(Formula::is_knave("A"), Formula::is_knave("B"))}};
    CHECK(kk::count_consistent(names, s, 10) == 1);
    const auto inst = kk::from_statements(names, s, 1, 0);
    CHECK(inst.solution == Assignment{{"A", "knight"}, {"B", "knave"}});
    CHECK(oracle::kk_count(inst.clues) == 1);
    CHECK(csp::count_solutions(kk::to_model(names, s), 10) == 1);
    CHECK(kk::render(s[1]) == "B says: A is a knave and B is a knave.");
}

TEST_CASE("self-reference alone is ambiguous, the liar paradox inconsistent") {
    const std::vector<std::string> names{"A"};
    CHECK(kk::count_consistent(names, {{"A", Formula::is_knight("A")}}, 10) == 2);
    CHECK(kk::count_consistent(names, {{"A", Formula::is_knave("A")}}, 10) == 0);
    CHECK_THROWS_AS(kk::from_statements(names, {{"A", Formula::is_knight("A")}}, 1, 0), ValidationError);
}

TEST_CASE("evaluate") {
    CHECK(kk::evaluate(Formula::is_knight("A"), {{"A", "knight"}}));
    CHECK(kk::evaluate(Formula::negation(Formula::is_knave("A")), {{"A", "knight"}}));
    CHECK(kk::evaluate(Formula::implication(Formula::is_knight("B"), Formula::is_knave("C")),
                       {{"B", "knave"}, {"C", "knight"}}));
    CHECK(kk::evaluate(Formula::disj(Formula::is_knave("A"), Formula::is_knight("A")), {{"A", "knave"}}));
    CHECK_THROWS_AS(kk::evaluate(Formula::is_knight("Z"), {{"A", "knight"}}), ValidationError);
    CHECK_THROWS_AS(kk::evaluate(Formula::is_knight("A"), {{"A", "human"}}), ValidationError);
}

TEST_CASE("rendering and depth") {
    const auto f = Formula::implication(Formula::is_knight("A"),
                                        Formula::disj(Formula::is_knave("B"), Formula::negation(Formula::is_knight("C"))));
    CHECK(kk::depth(f) == 3);
    CHECK(kk::render(f) ==
          "if A is a knight then (either B is a knave or (it is not the case that C is a knight))");
    CHECK(kk::formula_from_json(kk::to_json(f)) == f);
}

TEST_CASE("generated puzzles: depth limits, operators, uniqueness") {
    for (int level = 1; level <= 5; ++level) {
        const auto p = kk::Params::for_level(level);
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const auto inst = kk::generate(p, seed);
            const auto names = kk::characters_of(inst);
            const auto statements = kk::statements_of(inst);
            CHECK(static_cast<int>(names.size()) == p.characters);
            for (const auto& s : statements) {
                CHECK(kk::depth(s.body) <= p.max_depth);
                CHECK(kk::evaluate(s.body, inst.solution) == (inst.solution.at(s.speaker) == "knight"));
                CHECK_FALSE((s.speaker == s.body.who && s.body.op == kk::Op::knave));
                if (p.max_depth < 2) {
                    const auto text = kk::to_json(s.body).dump();
                    CHECK(text.find("\"implies\"") == std::string::npos);
                    CHECK(text.find("\"or\"") == std::string::npos);
                    CHECK(text.find("\"not\"") == std::string::npos);
                }
            }
            CHECK(kk::count_consistent(names, statements, 2) == 1);
            CHECK(oracle::kk_count(inst.clues) == 1);
            CHECK(csp::count_solutions(kk::to_model(names, statements), 2) == 1);
            CHECK(kk::check_final(inst, inst.solution));
        }
    }
}

TEST_CASE("knights and knaves rejections") {
    const auto inst = kk::Family{}.generate(4, 9);
    for (const auto& [name, type] : inst.solution) {
        auto flipped = inst.solution;
        flipped[name] = type == "knight" ? "knave" : "knight";
        CHECK_FALSE(kk::check_final(inst, flipped));
        CHECK(kk::check_final(inst, flipped).ok == kk::matches_solution(inst, flipped));
    }
    auto human = inst.solution;
    human["A"] = "human";
    const auto v = kk::check_final(inst, human);
    CHECK_FALSE(v.ok);
    CHECK(v.diagnostic.find("human") != std::string::npos);
    auto missing = inst.solution;
    missing.erase("B");
    CHECK_FALSE(kk::check_final(inst, missing));
}
