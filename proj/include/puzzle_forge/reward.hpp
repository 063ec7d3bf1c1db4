#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "puzzle_forge/core.hpp"

namespace pf::reward {

struct RewardConfig {
    GameId game = GameId::sudoku;
    double gamma = 1.0;       // (0, 1]
    double fmt_weight = 1.0;  // [0, 1]
    double int_weight = 1.0;  // [0, 1]
    std::string step_marker = "STEP ";
    std::string final_open = "<answer>";
    std::string final_close = "</answer>";
    // Divide per-step rewards by the step count.
    bool normalize_steps = false;

    // Throws ValidationError when a field is out of range.
    void validate() const;
};

struct Step {
    std::string raw;  // the line without its trailing newline
    std::string variable;
    std::string value;
    bool malformed = false;
};

struct Transcript {
    std::vector<Step> steps;
    std::optional<std::string> final_block;
    std::string raw;
};

struct StepScore {
    double fmt = 0.0;
    double intermediate = 0.0;

    bool operator==(const StepScore&) const = default;
};

struct RewardBreakdown {
    std::vector<StepScore> per_step;
    int r_final = 0;
    double cumulative = 0.0;
    double discounted_return = 0.0;
    double gamma = 1.0;
    std::string final_diagnostic;  // why r_final is 0, when it is
};

Transcript parse_transcript(std::string_view raw, const RewardConfig& config);

// Semicolon-separated var=value pairs. nullopt on a malformed pair or a
// repeated variable; empty segments are skipped.
std::optional<Assignment> parse_answer(std::string_view block);

StepScore score_step(const Step& step, const PuzzleInstance& instance, const RewardConfig& config);

// Sets *diagnostic to the rejection reason when the result is 0.
int score_final(const Transcript& transcript, const PuzzleInstance& instance, const RewardConfig& config,
                std::string* diagnostic = nullptr);

double cumulative_reward(const std::vector<StepScore>& steps, int r_final);
double discounted_return(const std::vector<double>& per_step_totals, double gamma);

RewardBreakdown grade(const PuzzleInstance& instance, std::string_view raw, const RewardConfig& config);

// Grading record: game, seed, level, per_step, r_final, cumulative,
// discounted_return, gamma.
json record_json(const PuzzleInstance& instance, const RewardBreakdown& breakdown);

// One RewardConfig per game. grade() consults only the config of the
// instance's own game; the observer sees every lookup.
class RewardConfigs {
public:
    RewardConfigs();
    explicit RewardConfigs(const RewardConfig& shared);  // same settings for every game

    RewardConfig& at(GameId game);
    const RewardConfig& for_game(GameId game) const;
    void set_observer(std::function<void(GameId)> observer) { observer_ = std::move(observer); }

    RewardBreakdown grade(const PuzzleInstance& instance, std::string_view raw) const;

private:
    std::map<GameId, RewardConfig> configs_;
    std::function<void(GameId)> observer_;
};

}  // namespace pf::reward
