#include <doctest.h>

#include <functional>
#include <sstream>

#include "oracles/oracles.hpp"
#include "puzzle_forge/csp.hpp"
#include "puzzle_forge/rng.hpp"

using namespace pf;
using namespace pf::csp;

namespace {

Model pair_model(std::vector<std::string> dx, std::vector<std::string> dy) {
    Model m;
    m.add_variable("x", std::move(dx));
    m.add_variable("y", std::move(dy));
    return m;
}

Model mini_sudoku(const std::array<std::array<int, 4>, 4>& clues) {
    Model m;
    auto name = [](int r, int c) { return "R" + std::to_string(r + 1) + "C" + std::to_string(c + 1); };
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            m.add_variable(name(r, c), clues[r][c] ? std::vector<std::string>{std::to_string(clues[r][c])}
                                                   : std::vector<std::string>{"1", "2", "3", "4"});
    for (int i = 0; i < 4; ++i) {
        AllDifferent row, col, box;
        for (int j = 0; j < 4; ++j) {
            row.vars.push_back(name(i, j));
            col.vars.push_back(name(j, i));
            box.vars.push_back(name((i / 2) * 2 + j / 2, (i % 2) * 2 + j % 2));
        }
        m.add(row);
        m.add(col);
        m.add(box);
    }
    return m;
}

// Every total assignment of the model's variables.
std::uint64_t brute_force(const Model& m) {
    std::uint64_t count = 0;
    Assignment a;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == m.variables().size()) {
            count += satisfies(m, a);
            return;
        }
        for (const auto& v : m.variables()[i].domain) {
            a[m.variables()[i].id] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return count;
}

// Random small model: up to 6 variables, domains of up to 4 small integers,
// a mix of every constraint kind.
Model random_model(Rng& rng) {
    Model m;
    const int n = static_cast<int>(rng.next_between(2, 6));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> domain;
        const int size = static_cast<int>(rng.next_between(1, 4));
        for (int k = 0; k < size; ++k) domain.push_back(std::to_string(rng.next_between(0, 4)));
        ids.push_back("v" + std::to_string(i));
        m.add_variable(ids.back(), domain);
    }
    auto pick_scope = [&](int arity) {
        std::vector<std::string> all = ids;
        rng.shuffle(std::span<std::string>(all));
        all.resize(static_cast<std::size_t>(arity));
        return all;
    };
    const int constraints = static_cast<int>(rng.next_between(1, 4));
    for (int k = 0; k < constraints; ++k) {
        switch (rng.next_range(4)) {
            case 0: m.add(AllDifferent{pick_scope(static_cast<int>(rng.next_between(2, n)))}); break;
            case 1: {
                auto scope = pick_scope(static_cast<int>(rng.next_between(1, std::min(n, 3))));
                std::vector<std::int64_t> coef;
                for (std::size_t i = 0; i < scope.size(); ++i) coef.push_back(rng.next_between(-2, 3));
                m.add(LinearSumEq{scope, coef, rng.next_between(0, 8)});
                break;
            }
            case 2: {
                auto scope = pick_scope(2);
                Table t{scope, {}};
                for (int r = 0; r < 5; ++r)
                    t.tuples.push_back({std::to_string(rng.next_between(0, 4)), std::to_string(rng.next_between(0, 4))});
                m.add(t);
                break;
            }
            default: {
                const auto& names = registered_predicates();
                m.add(Predicate{names[rng.next_range(names.size())], pick_scope(2)});
                break;
            }
        }
    }
    return m;
}

}  // namespace

TEST_CASE("propagate: all_different forces the remaining value") {
    auto m = pair_model({"1", "2"}, {"1", "2"});
    m.add(AllDifferent{{"x", "y"}});
    const auto p = propagate(m, {{"x", "1"}});
    REQUIRE_FALSE(p.contradiction);
    CHECK(p.domains.at("y") == std::vector<std::string>{"2"});
    CHECK(propagate(m, {{"x", "1"}, {"y", "1"}}).contradiction);
}

TEST_CASE("propagate: supported linear sum keeps both domains") {
    auto m = pair_model({"1", "2"}, {"1", "2"});
    m.add(LinearSumEq{{"x", "y"}, {1, 1}, 3});
    const auto p = propagate(m);
    REQUIRE_FALSE(p.contradiction);
    CHECK(p.domains.at("x") == std::vector<std::string>{"1", "2"});
    CHECK(p.domains.at("y") == std::vector<std::string>{"1", "2"});
}

TEST_CASE("propagate rejects undeclared variables") {
    auto m = pair_model({"1"}, {"1"});
    CHECK_THROWS_AS(propagate(m, {{"z", "1"}}), std::invalid_argument);
}

TEST_CASE("model validation") {
    Model m;
    CHECK_THROWS_AS(m.add_variable("x", {}), std::invalid_argument);
    m.add_variable("x", {"1", "2"});
    CHECK_THROWS_AS(m.add_variable("x", {"1"}), std::invalid_argument);
    CHECK_THROWS_AS(m.add(AllDifferent{{"x", "nope"}}), std::invalid_argument);
    CHECK_THROWS_AS(m.add(Predicate{"between", {"x", "x"}}), std::invalid_argument);
    CHECK_THROWS_AS(m.add(LinearSumEq{{"x"}, {1, 2}, 3}), std::invalid_argument);
    CHECK_THROWS_AS(m.add(AllDifferent{{}}), std::invalid_argument);
    CHECK_THROWS_AS(count_solutions(m, 0), std::invalid_argument);
}

TEST_CASE("empty 4x4 mini-sudoku has 288 solutions") {
    const std::array<std::array<int, 4>, 4> empty{};
    CHECK(oracle::mini_sudoku_count(empty) == 288);
    CHECK(count_solutions(mini_sudoku(empty), 1000) == 288);
    CHECK(count_solutions(mini_sudoku(empty), 2) == 2);
}

TEST_CASE("4x4 mini-sudoku fixtures agree with exhaustive enumeration") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        std::array<std::array<int, 4>, 4> clues{};
        const int givens = static_cast<int>(rng.next_between(2, 8));
        for (int k = 0; k < givens; ++k) clues[rng.next_range(4)][rng.next_range(4)] = static_cast<int>(rng.next_between(1, 4));
        CHECK(count_solutions(mini_sudoku(clues), 1000) == oracle::mini_sudoku_count(clues));
    }
}

TEST_CASE("contradictory and fully assigned models") {
    auto bad = pair_model({"1"}, {"1"});
    bad.add(AllDifferent{{"x", "y"}});
    CHECK(count_solutions(bad, 10) == 0);
    CHECK_FALSE(solve_one(bad).has_value());

    auto fixed = pair_model({"1"}, {"2"});
    fixed.add(AllDifferent{{"x", "y"}});
    CHECK(count_solutions(fixed, 10) == 1);
    const auto sol = solve_one(fixed);
    REQUIRE(sol);
    CHECK(satisfies(fixed, *sol));
}

TEST_CASE("solve_one returns the first solution in lexicographic order") {
    auto m = pair_model({"1", "2", "3"}, {"1", "2", "3"});
    m.add(Predicate{"less_than", {"x", "y"}});
    const auto sol = solve_one(m);
    REQUIRE(sol);
    CHECK(*sol == Assignment{{"x", "1"}, {"y", "2"}});
    CHECK(count_solutions(m, 100) == 3);
}

TEST_CASE("registered predicates") {
    auto m = pair_model({"1", "2", "3"}, {"1", "2", "3"});
    m.add(Predicate{"adjacent", {"x", "y"}});
    CHECK(count_solutions(m, 100) == 4);
    auto e = pair_model({"a", "b"}, {"b", "c"});
    e.add(Predicate{"equal", {"x", "y"}});
    CHECK(count_solutions(e, 100) == 1);
    auto ne = pair_model({"a", "b"}, {"b", "c"});
    ne.add(Predicate{"not_equal", {"x", "y"}});
    CHECK(count_solutions(ne, 100) == 3);
}

TEST_CASE("counts match brute force and propagation is sound on random small models") {
    Rng rng(77);
    for (int trial = 0; trial < 400; ++trial) {
        const auto m = random_model(rng);
        const auto truth = brute_force(m);
        CHECK(count_solutions(m, 100000) == truth);

        // No value that appears in some solution may be pruned.
        const auto p = propagate(m);
        if (truth > 0) REQUIRE_FALSE(p.contradiction);
        Assignment a;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == m.variables().size()) {
                if (!satisfies(m, a)) return;
                for (const auto& [var, value] : a) {
                    const auto& d = p.domains.at(var);
                    CHECK(std::find(d.begin(), d.end(), value) != d.end());
                }
                return;
            }
            for (const auto& v : m.variables()[i].domain) {
                a[m.variables()[i].id] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
}

TEST_CASE("search traces are reproducible") {
    const std::array<std::array<int, 4>, 4> clues{{{1, 0, 0, 0}, {0, 0, 3, 0}, {0, 4, 0, 0}, {0, 0, 0, 2}}};
    std::ostringstream a, b;
    const auto m = mini_sudoku(clues);
    const auto ca = count_solutions(m, 50, {&a});
    const auto cb = count_solutions(m, 50, {&b});
    CHECK(ca == cb);
    CHECK(a.str() == b.str());
    CHECK_FALSE(a.str().empty());
}
