#include <doctest.h>

#include "oracles/oracles.hpp"
#include "puzzle_forge/games.hpp"

using namespace pf;
using zebra::Clue;
using zebra::ClueKind;

TEST_CASE("two positions, one attribute, one clue") {
    const zebra::Layout layout{2, {{"nationality", {"brit", "swede"}}}};
    const std::vector<Clue> clues{{ClueKind::position_fixed, "nationality", "brit", "", "", 1}};
    const auto inst = zebra::from_clues(layout, clues, 1, 0);
    CHECK(inst.solution == Assignment{{"nationality:brit", "1"}, {"nationality:swede", "2"}});
    CHECK(oracle::zebra_count(inst.clues) == 1);
    CHECK(zebra::render(clues[0]) == "The person with nationality brit is in position 1.");
    CHECK_THROWS_AS(zebra::from_clues(layout, {}, 1, 0), ValidationError);
}

TEST_CASE("generated zebra puzzles: truth, uniqueness, minimality") {
    for (int level = 1; level <= 5; ++level) {
        const auto p = zebra::Params::for_level(level);
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            const auto inst = zebra::generate(p, seed);
            const auto layout = zebra::layout_of(inst);
            const auto clues = zebra::clues_of(inst);
            CHECK(layout.positions == p.positions);
            CHECK(static_cast<int>(layout.attributes.size()) == p.attributes);
            zebra::Placement placement;
            for (const auto& [var, pos] : inst.solution) placement[var] = std::stoi(pos);
            for (const auto& c : clues) CHECK(zebra::holds(c, placement));
            CHECK(csp::count_solutions(zebra::to_model(layout, clues), 2) == 1);
            if (p.positions <= 4) CHECK(oracle::zebra_count(inst.clues) == 1);
            for (std::size_t i = 0; i < clues.size(); ++i) {
                auto fewer = clues;
                fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
                CHECK(csp::count_solutions(zebra::to_model(layout, fewer), 2) == 2);
            }
            for (const auto& c : inst.clues.at("clues"))
                CHECK(inst.prompt.find(c.at("text").get<std::string>()) != std::string::npos);
            CHECK(zebra::check_final(inst, inst.solution));
        }
    }
    CHECK(instance_to_json(zebra::Family{}.generate(5, 1)) == instance_to_json(zebra::Family{}.generate(5, 1)));
}

TEST_CASE("zebra rejections") {
    const zebra::Layout layout{3, {{"color", {"blue", "green", "red"}}}};
    const std::vector<Clue> clues{{ClueKind::left_of, "color", "red", "color", "blue", 0},
                                  {ClueKind::left_of, "color", "blue", "color", "green", 0}};
    const auto inst = zebra::from_clues(layout, clues, 1, 0);
    CHECK(inst.solution.at("color:red") == "1");
    CHECK(inst.solution.at("color:blue") == "2");

    auto swapped = inst.solution;
    std::swap(swapped["color:red"], swapped["color:blue"]);
    const auto v = zebra::check_final(inst, swapped);
    CHECK_FALSE(v.ok);
    CHECK(v.diagnostic.find("left") != std::string::npos);

    auto shared = inst.solution;
    shared["color:green"] = "1";
    CHECK_FALSE(zebra::check_final(inst, shared));
    auto off = inst.solution;
    off["color:green"] = "4";
    CHECK_FALSE(zebra::check_final(inst, off));
    auto unknown = inst.solution;
    unknown["pet:dog"] = "1";
    CHECK_FALSE(zebra::check_final(inst, unknown));
}

TEST_CASE("clue kinds evaluate as documented") {
    const zebra::Placement at{{"a:x", 1}, {"b:y", 2}, {"a:z", 3}};
    CHECK(zebra::holds({ClueKind::adjacent, "a", "x", "b", "y", 0}, at));
    CHECK_FALSE(zebra::holds({ClueKind::adjacent, "a", "x", "a", "z", 0}, at));
    CHECK(zebra::holds({ClueKind::not_at, "a", "x", "", "", 2}, at));
    CHECK_FALSE(zebra::holds({ClueKind::same_entity, "a", "x", "b", "y", 0}, at));
    CHECK(zebra::holds({ClueKind::left_of, "a", "x", "a", "z", 0}, at));
}
