#include <doctest.h>

#include <set>

#include "puzzle_forge/agents.hpp"
#include "puzzle_forge/games.hpp"
#include "puzzle_forge/reward.hpp"

using namespace pf;
using namespace pf::reward;

namespace {

PuzzleInstance kk_instance() { return knights_knaves::Family{}.generate(2, 4); }

}  // namespace

TEST_CASE("parse_transcript") {
    const RewardConfig c;
    const auto t = parse_transcript("STEP R1C1=5\n<answer>R1C1=5; R1C2=3</answer>", c);
    REQUIRE(t.steps.size() == 1);
    CHECK(t.steps[0].variable == "R1C1");
    CHECK(t.steps[0].value == "5");
    CHECK_FALSE(t.steps[0].malformed);
    REQUIRE(t.final_block);
    CHECK(*t.final_block == "R1C1=5; R1C2=3");

    const auto none = parse_transcript("just thinking out loud", c);
    CHECK(none.steps.empty());
    CHECK_FALSE(none.final_block);

    const auto garbage = parse_transcript("STEP garbage\r\nSTEP a=b=c\nSTEP x = 1\n  STEP indented=1\nSTEPx=1\n", c);
    REQUIRE(garbage.steps.size() == 3);
    for (const auto& s : garbage.steps) CHECK(s.malformed);
    CHECK(garbage.steps[0].raw == "STEP garbage");
    CHECK(garbage.raw.find("indented") != std::string::npos);

    const auto unclosed = parse_transcript("<answer>A=knight", c);
    CHECK_FALSE(unclosed.final_block);
}

TEST_CASE("custom markers") {
    RewardConfig c;
    c.step_marker = "> ";
    c.final_open = "[[";
    c.final_close = "]]";
    const auto t = parse_transcript("> A=knight\nSTEP B=knave\n[[A=knight]]", c);
    CHECK(t.steps.size() == 1);
    CHECK(*t.final_block == "A=knight");
}

TEST_CASE("parse_answer") {
    CHECK(parse_answer("A=knight; B=knave") == Assignment{{"A", "knight"}, {"B", "knave"}});
    CHECK(parse_answer(" A = knight ;;") == Assignment{{"A", "knight"}});
    CHECK(parse_answer("") == Assignment{});
    CHECK_FALSE(parse_answer("A"));
    CHECK_FALSE(parse_answer("A=knight; A=knave"));
    CHECK_FALSE(parse_answer("=knight"));
}

TEST_CASE("score_step") {
    const auto inst = kk_instance();
    const auto& [var, value] = *inst.solution.begin();
    const std::string wrong = value == "knight" ? "knave" : "knight";
    RewardConfig c;
    c.fmt_weight = 0.5;
    c.int_weight = 0.25;
    auto step = [&](std::string text) { return parse_transcript(text, c).steps.at(0); };
    CHECK(score_step(step("STEP " + var + "=" + value), inst, c) == StepScore{0.5, 0.25});
    CHECK(score_step(step("STEP " + var + "=" + wrong), inst, c) == StepScore{0.5, 0.0});
    CHECK(score_step(step("STEP nonsense"), inst, c) == StepScore{0.0, 0.0});
    CHECK(score_step(step("STEP Z=knight"), inst, c) == StepScore{0.0, 0.0});
    CHECK(score_step(step("STEP " + var + "=human"), inst, c) == StepScore{0.0, 0.0});
}

TEST_CASE("score_final") {
    const auto inst = kk_instance();
    const RewardConfig c;
    const std::string right = "<answer>" + agents::render_answer(inst.solution) + "</answer>";
    CHECK(score_final(parse_transcript(right, c), inst, c) == 1);
    std::string why;
    CHECK(score_final(parse_transcript("no answer here", c), inst, c, &why) == 0);
    CHECK_FALSE(why.empty());
    auto wrong = inst.solution;
    wrong.begin()->second = wrong.begin()->second == "knight" ? "knave" : "knight";
    CHECK(score_final(parse_transcript("<answer>" + agents::render_answer(wrong) + "</answer>", c), inst, c) == 0);
    CHECK(score_final(parse_transcript("<answer>not pairs</answer>", c), inst, c) == 0);
}

TEST_CASE("cumulative reward fixtures") {
    CHECK(cumulative_reward({{1, 1}, {1, 1}, {1, 1}}, 1) == 7.0);
    CHECK(cumulative_reward({}, 0) == 0.0);
    CHECK(cumulative_reward({{1, 0}, {0, 0}}, 1) == 2.0);
}

TEST_CASE("discounted return fixtures") {
    CHECK(discounted_return({2, 2}, 0.5) == 3.0);
    CHECK(discounted_return({1.75}, 0.3) == 1.75);
    CHECK(discounted_return({1, 1, 1}, 1.0) == 3.0);
    CHECK(discounted_return({}, 0.9) == 0.0);
}

TEST_CASE("grade end to end and bounds") {
    const auto inst = kk_instance();
    RewardConfig c;
    c.gamma = 0.5;
    const auto oracle = agents::transcript({agents::Kind::oracle}, inst, 0);
    const auto b = grade(inst, oracle, c);
    const double steps = static_cast<double>(inst.solution.size());
    CHECK(b.r_final == 1);
    CHECK(b.cumulative == 2 * steps + 1);
    CHECK(b.gamma == 0.5);
    c.gamma = 1.0;
    CHECK(grade(inst, oracle, c).discounted_return == 2 * steps);

    // Upper bound T * (w_fmt + w_int) + 1 for any transcript.
    for (auto kind : {agents::Kind::random, agents::Kind::silent, agents::Kind::noisy}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto g = grade(inst, agents::transcript({kind, 0.3, 0.3}, inst, seed), c);
            CHECK(g.cumulative >= 0.0);
            CHECK(g.cumulative <= static_cast<double>(g.per_step.size()) * 2 + 1);
        }
    }

    c.normalize_steps = true;
    const auto n = grade(inst, oracle, c);
    CHECK(n.cumulative == doctest::Approx(3.0));
    CHECK(grade(inst, "", c).cumulative == 0.0);
}

TEST_CASE("monotonicity under added and corrupted steps") {
    const auto inst = sudoku::Family{}.generate(2, 8);
    const RewardConfig c;
    std::string text;
    double previous = 0.0;
    for (const auto& [var, value] : inst.solution) {
        const std::string wrong = value == "1" ? "2" : "1";
        const double corrupted = grade(inst, text + "STEP " + var + "=" + wrong + "\n", c).cumulative;
        text += "STEP " + var + "=" + value + "\n";
        const double now = grade(inst, text, c).cumulative;
        CHECK(now >= previous);
        CHECK(corrupted <= now);
        previous = now;
    }
}

TEST_CASE("grading record layout") {
    const auto inst = kk_instance();
    const auto rec = record_json(inst, grade(inst, "STEP A=knight\n", RewardConfig{}));
    for (const char* key : {"game", "seed", "level", "per_step", "r_final", "cumulative", "discounted_return", "gamma"})
        CHECK(rec.contains(key));
    CHECK(rec.at("per_step").size() == 1);
}

TEST_CASE("grading consults only the instance's own game config") {
    RewardConfigs configs;
    std::multiset<GameId> consulted;
    configs.set_observer([&](GameId g) { consulted.insert(g); });
    configs.at(GameId::zebra).fmt_weight = 0.0;
    for (auto g : kAllGames) {
        consulted.clear();
        const auto inst = generate(g, 1, 2);
        const auto b = configs.grade(inst, agents::transcript({agents::Kind::oracle}, inst, 0));
        CHECK(consulted.size() == 1);
        CHECK(consulted.count(g) == 1);
        CHECK(b.per_step.front().fmt == (g == GameId::zebra ? 0.0 : 1.0));
    }
}

TEST_CASE("config validation") {
    RewardConfig c;
    c.gamma = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.gamma = 1.0;
    c.fmt_weight = 1.5;
    CHECK_THROWS_AS(c.validate(), ValidationError);
}
