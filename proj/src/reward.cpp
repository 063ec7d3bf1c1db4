#include "puzzle_forge/reward.hpp"

#include <cctype>
#include <set>

namespace pf::reward {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool has_space(std::string_view s) {
    for (char ch : s)
        if (std::isspace(static_cast<unsigned char>(ch))) return true;
    return false;
}

}  // namespace

void RewardConfig::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in (0,1]");
    if (!(fmt_weight >= 0.0 && fmt_weight <= 1.0)) throw ValidationError("fmt_weight must lie in [0,1]");
    if (!(int_weight >= 0.0 && int_weight <= 1.0)) throw ValidationError("int_weight must lie in [0,1]");
    if (step_marker.empty() || final_open.empty() || final_close.empty())
        throw ValidationError("markers must be non-empty");
}

Transcript parse_transcript(std::string_view raw, const RewardConfig& config) {
    Transcript t;
    t.raw = std::string(raw);
    std::size_t start = 0;
    while (start <= raw.size()) {
        auto end = raw.find('\n', start);
        if (end == std::string_view::npos) end = raw.size();
        std::string_view line = raw.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.starts_with(config.step_marker)) {
            Step step;
            step.raw = std::string(line);
            const auto token = trim(line.substr(config.step_marker.size()));
            const auto eq = token.find('=');
            if (token.empty() || has_space(token) || eq == std::string_view::npos || eq == 0 ||
                eq + 1 == token.size() || token.find('=', eq + 1) != std::string_view::npos) {
                step.malformed = true;
            } else {
                step.variable = std::string(token.substr(0, eq));
                step.value = std::string(token.substr(eq + 1));
            }
            t.steps.push_back(std::move(step));
        }
        start = end + 1;
    }
    const auto open = raw.find(config.final_open);
    if (open != std::string_view::npos) {
        const auto body = open + config.final_open.size();
        const auto close = raw.find(config.final_close, body);
        if (close != std::string_view::npos) t.final_block = std::string(raw.substr(body, close - body));
    }
    return t;
}

std::optional<Assignment> parse_answer(std::string_view block) {
    Assignment out;
    std::size_t start = 0;
    while (start <= block.size()) {
        auto end = block.find(';', start);
        if (end == std::string_view::npos) end = block.size();
        const auto pair = trim(block.substr(start, end - start));
        start = end + 1;
        if (pair.empty()) continue;
        const auto eq = pair.find('=');
        if (eq == std::string_view::npos) return std::nullopt;
        const auto var = trim(pair.substr(0, eq));
        const auto value = trim(pair.substr(eq + 1));
        if (var.empty() || value.empty()) return std::nullopt;
        if (!out.emplace(std::string(var), std::string(value)).second) return std::nullopt;
    }
    return out;
}

StepScore score_step(const Step& step, const PuzzleInstance& instance, const RewardConfig& config) {
    if (step.malformed) return {};
    const auto canonical = family(instance.game).canonical_value(instance, step.variable, step.value);
    if (!canonical) return {};
    StepScore s{config.fmt_weight, 0.0};
    if (partial_consistent({{step.variable, *canonical}}, instance.solution).consistent) s.intermediate = config.int_weight;
    return s;
}

int score_final(const Transcript& transcript, const PuzzleInstance& instance, const RewardConfig& config,
                std::string* diagnostic) {
    (void)config;
    auto fail = [&](std::string why) {
        if (diagnostic) *diagnostic = std::move(why);
        return 0;
    };
    if (!transcript.final_block) return fail("no final answer block");
    const auto answer = parse_answer(*transcript.final_block);
    if (!answer) return fail("final answer block is not a list of var=value pairs");
    const auto& fam = family(instance.game);
    const auto verdict = fam.check_final(instance, fam.canonicalize(instance, *answer));
    if (!verdict) return fail(verdict.diagnostic);
    return 1;
}

double cumulative_reward(const std::vector<StepScore>& steps, int r_final) {
    double total = 0.0;
    for (const auto& s : steps) total += s.fmt + s.intermediate;
    return total + r_final;
}

double discounted_return(const std::vector<double>& per_step_totals, double gamma) {
    double total = 0.0, weight = 1.0;
    for (double r : per_step_totals) {
        total += weight * r;
        weight *= gamma;
    }
    return total;
}

RewardBreakdown grade(const PuzzleInstance& instance, std::string_view raw, const RewardConfig& config) {
    config.validate();
    const auto transcript = parse_transcript(raw, config);
    RewardBreakdown b;
    b.gamma = config.gamma;
    const double scale = config.normalize_steps && !transcript.steps.empty() ? 1.0 / transcript.steps.size() : 1.0;
    std::vector<double> totals;
    for (const auto& step : transcript.steps) {
        auto s = score_step(step, instance, config);
        s.fmt *= scale;
        s.intermediate *= scale;
        totals.push_back(s.fmt + s.intermediate);
        b.per_step.push_back(s);
    }
    b.r_final = score_final(transcript, instance, config, &b.final_diagnostic);
    b.cumulative = cumulative_reward(b.per_step, b.r_final);
    b.discounted_return = discounted_return(totals, config.gamma);
    return b;
}

json record_json(const PuzzleInstance& instance, const RewardBreakdown& breakdown) {
    json steps = json::array();
    for (const auto& s : breakdown.per_step) steps.push_back({s.fmt, s.intermediate});
    return json{{"game", to_string(instance.game)},
                {"seed", instance.seed},
                {"level", instance.level},
                {"per_step", std::move(steps)},
                {"r_final", breakdown.r_final},
                {"cumulative", breakdown.cumulative},
                {"discounted_return", breakdown.discounted_return},
                {"gamma", breakdown.gamma}};
}

RewardConfigs::RewardConfigs() : RewardConfigs(RewardConfig{}) {}

RewardConfigs::RewardConfigs(const RewardConfig& shared) {
    shared.validate();
    for (auto g : kAllGames) {
        auto c = shared;
        c.game = g;
        configs_.emplace(g, c);
    }
}

RewardConfig& RewardConfigs::at(GameId game) { return configs_.at(game); }

const RewardConfig& RewardConfigs::for_game(GameId game) const {
    if (observer_) observer_(game);
    return configs_.at(game);
}

RewardBreakdown RewardConfigs::grade(const PuzzleInstance& instance, std::string_view raw) const {
    return reward::grade(instance, raw, for_game(instance.game));
}

}  // namespace pf::reward
