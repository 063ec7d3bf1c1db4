#include "puzzle_forge/simulate.hpp"

#include <ostream>

#include "puzzle_forge/games.hpp"
#include "puzzle_forge/rng.hpp"

namespace pf::simulate {

namespace {

// Distinct seed streams for tasks, instances, agents and held-out instances.
constexpr std::uint64_t kTaskSalt = 0x7461736b7461736bULL;
constexpr std::uint64_t kAgentSalt = 0x6167656e74616765ULL;
constexpr std::uint64_t kHoldoutSalt = 0x686f6c646f75742eULL;

json snapshot(const curriculum::CurriculumState& state, std::uint64_t episode) {
    json games = json::object();
    for (auto g : state.config().games) {
        const auto m = state.means(g);
        games[std::string(to_string(g))] =
            json{{"level", state.level(g)}, {"a_int", m.a_int}, {"a_final", m.a_final}, {"window", m.size}};
    }
    return json{{"event", "snapshot"}, {"episode", episode}, {"games", std::move(games)}};
}

}  // namespace

SimulationResult run(const SimulationConfig& config, std::ostream* log) {
    config.agent.validate();
    config.reward.validate();
    SimulationResult result{false, 0, {}, {}, curriculum::CurriculumState(config.curriculum)};
    auto& state = result.state;
    Rng tasks(mix64(config.seed ^ kTaskSalt));
    auto emit = [&](const json& line) {
        if (log) *log << line.dump() << '\n';
    };
    auto play = [&](GameId game, int level, std::uint64_t instance_seed, std::uint64_t agent_seed) {
        const auto instance = generate(game, level, instance_seed);
        auto rc = config.reward;
        rc.game = game;
        return reward::grade(instance, agents::transcript(config.agent, instance, agent_seed), rc);
    };

    for (std::uint64_t episode = 0; episode < config.budget && !state.all_mastered(); ++episode) {
        const auto [game, level] = state.sample_open_task(tasks);
        const auto breakdown = play(game, level, derive_seed(config.seed, episode),
                                    derive_seed(config.seed ^ kAgentSalt, episode));
        if (config.holdout) {
            state.record_episode(game, play(game, level, derive_seed(config.seed ^ kHoldoutSalt, episode),
                                            derive_seed(config.seed ^ kHoldoutSalt ^ kAgentSalt, episode)));
        } else {
            state.record_episode(game, breakdown);
        }
        ++result.episodes;
        ++result.episodes_per_game[game];
        const auto advance = state.maybe_advance(game);
        if (advance.advanced) emit(curriculum::advance_event(game, level, advance.level, episode));
        if (config.snapshot_every && result.episodes % config.snapshot_every == 0) emit(snapshot(state, episode));
    }
    result.completed = state.all_mastered();
    for (auto g : config.curriculum.games) result.levels[g] = state.level(g);
    emit(json{{"event", "end"},
              {"episodes", result.episodes},
              {"completed", result.completed},
              {"agent", agents::to_string(config.agent.kind)}});
    return result;
}

}  // namespace pf::simulate
