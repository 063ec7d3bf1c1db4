#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/reward.hpp"

namespace pf {
class Rng;
}

namespace pf::curriculum {

struct CurriculumConfig {
    double tau_int = 0.8;
    double tau_final = 0.7;
    int window = 200;
    int max_level = 5;
    std::vector<GameId> games{kAllGames.begin(), kAllGames.end()};

    // Throws ValidationError: thresholds outside (0,1], window < 10,
    // max_level outside [1, the game's level count], empty or repeated games.
    void validate() const;
};

struct EpisodeResult {
    double step_accuracy = 0.0;  // share of steps with r_int > 0; 0 without steps
    bool final_correct = false;

    bool operator==(const EpisodeResult&) const = default;
};

EpisodeResult summarize(const reward::RewardBreakdown& breakdown);

struct Advance {
    int level = 1;
    bool advanced = false;
    bool window_full = false;  // false means the call was a no-op on a partial window
};

struct WindowMeans {
    double a_int = 0.0;
    double a_final = 0.0;
    std::size_t size = 0;
};

class CurriculumState {
public:
    explicit CurriculumState(CurriculumConfig config = {});

    const CurriculumConfig& config() const { return config_; }

    void record_episode(GameId game, const EpisodeResult& result);
    void record_episode(GameId game, const reward::RewardBreakdown& breakdown) { record_episode(game, summarize(breakdown)); }

    // Advances one level when the window is full, both means clear their
    // thresholds and the level is below max. Clears the window on advance.
    Advance maybe_advance(GameId game);

    // Level max with a full window that clears both thresholds.
    bool mastered(GameId game) const;
    bool all_mastered() const;

    // A configured game drawn uniformly, with its current level.
    std::pair<GameId, int> sample_task(Rng& rng) const;
    // Same, restricted to games not yet mastered (all games once every one is).
    std::pair<GameId, int> sample_open_task(Rng& rng) const;

    int level(GameId game) const;
    WindowMeans means(GameId game) const;
    const std::deque<EpisodeResult>& window(GameId game) const;

    json checkpoint() const;
    static CurriculumState from_checkpoint(const json& checkpoint);

private:
    struct Progress {
        int level = 1;
        std::deque<EpisodeResult> window;
    };

    const Progress& progress(GameId game) const;
    Progress& progress(GameId game);
    bool passing(const Progress& p) const;

    CurriculumConfig config_;
    std::map<GameId, Progress> games_;
};

// {"event":"advance","game","from","to","episode"}
json advance_event(GameId game, int from, int to, std::uint64_t episode);

}  // namespace pf::curriculum
