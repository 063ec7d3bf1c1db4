#include <doctest.h>

#include <cmath>
#include <map>

#include "puzzle_forge/curriculum.hpp"
#include "puzzle_forge/rng.hpp"

using namespace pf;
using namespace pf::curriculum;

namespace {

CurriculumConfig single(GameId g, int window = 10) {
    CurriculumConfig c;
    c.window = window;
    c.games = {g};
    return c;
}

reward::RewardBreakdown breakdown(std::vector<reward::StepScore> steps, int final) {
    reward::RewardBreakdown b;
    b.per_step = std::move(steps);
    b.r_final = final;
    return b;
}

void fill(CurriculumState& s, GameId g, double a_int, bool final, int n) {
    for (int i = 0; i < n; ++i) s.record_episode(g, EpisodeResult{a_int, final});
}

}  // namespace

TEST_CASE("summarize") {
    CHECK(summarize(breakdown({{1, 1}, {1, 0}}, 1)) == EpisodeResult{0.5, true});
    CHECK(summarize(breakdown({}, 0)) == EpisodeResult{0.0, false});
}

TEST_CASE("ring buffer evicts the oldest entry") {
    CurriculumState s(single(GameId::sudoku));
    s.record_episode(GameId::sudoku, EpisodeResult{0.1, false});
    fill(s, GameId::sudoku, 1.0, true, 10);
    CHECK(s.window(GameId::sudoku).size() == 10);
    CHECK(s.window(GameId::sudoku).front().step_accuracy == 1.0);
}

TEST_CASE("advancement predicate") {
    const auto g = GameId::zebra;
    SUBCASE("both means clear") {
        CurriculumState s(single(g, 20));
        // 17/20 = 0.85 step accuracy and 15/20 = 0.75 finals.
        for (int i = 0; i < 20; ++i) s.record_episode(g, EpisodeResult{i < 17 ? 1.0 : 0.0, i < 15});
        const auto a = s.maybe_advance(g);
        CHECK(a.advanced);
        CHECK(a.level == 2);
        CHECK(s.window(g).empty());
    }
    SUBCASE("final below threshold") {
        CurriculumState s(single(g, 20));
        for (int i = 0; i < 20; ++i) s.record_episode(g, EpisodeResult{i < 17 ? 1.0 : 0.0, i < 13});
        CHECK_FALSE(s.maybe_advance(g).advanced);
        CHECK(s.level(g) == 1);
    }
    SUBCASE("partial window is a flagged no-op") {
        CurriculumState s(single(g, 20));
        fill(s, g, 1.0, true, 19);
        const auto a = s.maybe_advance(g);
        CHECK_FALSE(a.advanced);
        CHECK_FALSE(a.window_full);
    }
    SUBCASE("stays at the top level") {
        CurriculumState s(single(g, 10));
        for (int level = 1; level < 5; ++level) {
            fill(s, g, 1.0, true, 10);
            CHECK(s.maybe_advance(g).advanced);
        }
        fill(s, g, 1.0, true, 10);
        const auto a = s.maybe_advance(g);
        CHECK_FALSE(a.advanced);
        CHECK(a.level == 5);
        CHECK(s.mastered(g));
    }
}

TEST_CASE("levels never decrease") {
    CurriculumState s(single(GameId::nonogram));
    int previous = 1;
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        s.record_episode(GameId::nonogram, EpisodeResult{rng.bernoulli(9, 10) ? 1.0 : 0.0, rng.bernoulli(8, 10)});
        s.maybe_advance(GameId::nonogram);
        CHECK(s.level(GameId::nonogram) >= previous);
        previous = s.level(GameId::nonogram);
    }
}

TEST_CASE("sample_task is uniform over games") {
    CurriculumState s;
    Rng rng(2);
    std::map<GameId, int> hits;
    for (int i = 0; i < 70000; ++i) ++hits[s.sample_task(rng).first];
    for (auto g : kAllGames) CHECK(std::abs(hits[g] - 10000) <= 278);

    CurriculumState one(single(GameId::knights_knaves));
    for (int i = 0; i < 50; ++i) CHECK(one.sample_task(rng).first == GameId::knights_knaves);
    fill(one, GameId::knights_knaves, 1.0, true, 10);
    one.maybe_advance(GameId::knights_knaves);
    fill(one, GameId::knights_knaves, 1.0, true, 10);
    one.maybe_advance(GameId::knights_knaves);
    CHECK(one.sample_task(rng) == std::pair{GameId::knights_knaves, 3});
}

TEST_CASE("checkpoint round trip") {
    CurriculumState s;
    fill(s, GameId::sudoku, 1.0, true, 200);
    s.maybe_advance(GameId::sudoku);
    fill(s, GameId::sudoku, 0.5, false, 3);
    const auto restored = CurriculumState::from_checkpoint(s.checkpoint());
    CHECK(restored.checkpoint() == s.checkpoint());
    CHECK(restored.level(GameId::sudoku) == 2);
    CHECK(restored.window(GameId::sudoku).size() == 3);
    CHECK_THROWS_AS(CurriculumState::from_checkpoint(json::object()), ValidationError);
}

TEST_CASE("config validation and events") {
    CurriculumConfig c;
    c.window = 5;
    CHECK_THROWS_AS(CurriculumState{c}, ValidationError);
    c.window = 10;
    c.tau_int = 0.0;
    CHECK_THROWS_AS(CurriculumState{c}, ValidationError);
    c.tau_int = 0.8;
    c.games = {GameId::sudoku, GameId::sudoku};
    CHECK_THROWS_AS(CurriculumState{c}, ValidationError);
    c.games = {};
    CHECK_THROWS_AS(CurriculumState{c}, ValidationError);
    c.games = {GameId::sudoku};
    c.max_level = 6;
    CHECK_THROWS_AS(CurriculumState{c}, ValidationError);
    CHECK(advance_event(GameId::sudoku, 1, 2, 199).dump() ==
          R"({"episode":199,"event":"advance","from":1,"game":"sudoku","to":2})");
}
