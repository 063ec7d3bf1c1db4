#include "puzzle_forge/agents.hpp"

#include <cmath>

#include "puzzle_forge/rng.hpp"

namespace pf::agents {

namespace {

constexpr std::array<std::string_view, 4> kNames = {"oracle", "noisy", "random", "silent"};
constexpr std::uint64_t kScale = 1'000'000;

bool draw(Rng& rng, double probability) {
    return rng.bernoulli(static_cast<std::uint64_t>(std::llround(probability * kScale)), kScale);
}

std::vector<std::string> domain_of(const PuzzleInstance& instance, const std::string& variable) {
    return family(instance.game).value_domain(instance, variable);
}

// A domain value different from `correct`, or `correct` when none exists.
std::string wrong_value(const PuzzleInstance& instance, const std::string& variable, const std::string& correct,
                        Rng& rng) {
    auto domain = domain_of(instance, variable);
    std::erase(domain, correct);
    if (domain.empty()) return correct;
    return domain[rng.next_range(domain.size())];
}

std::string random_value(const PuzzleInstance& instance, const std::string& variable, Rng& rng) {
    const auto domain = domain_of(instance, variable);
    return domain[rng.next_range(domain.size())];
}

}  // namespace

void AgentSpec::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in [0,1]");
    if (!(delta >= 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in [0,1]");
}

std::string_view to_string(Kind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<Kind> parse_kind(std::string_view token) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == token) return static_cast<Kind>(i);
    return std::nullopt;
}

std::string render_answer(const Assignment& answer) {
    std::string out;
    for (const auto& [var, value] : answer) {
        if (!out.empty()) out += "; ";
        out += var + "=" + value;
    }
    return out;
}

std::string transcript(const AgentSpec& spec, const PuzzleInstance& instance, std::uint64_t seed) {
    spec.validate();
    if (spec.kind == Kind::silent) return {};
    Rng rng(seed);
    std::string out;
    Assignment final_answer;
    for (const auto& [var, correct] : instance.solution) {
        std::string step = correct;
        switch (spec.kind) {
            case Kind::noisy:
                if (draw(rng, spec.epsilon)) step = wrong_value(instance, var, correct, rng);
                final_answer[var] = correct;
                break;
            case Kind::random:
                step = random_value(instance, var, rng);
                final_answer[var] = random_value(instance, var, rng);
                break;
            default: final_answer[var] = correct; break;
        }
        out += "STEP " + var + "=" + step + "\n";
    }
    if (spec.kind == Kind::noisy && draw(rng, spec.delta)) {
        auto it = final_answer.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(rng.next_range(final_answer.size())));
        it->second = wrong_value(instance, it->first, it->second, rng);
    }
    out += "<answer>" + render_answer(final_answer) + "</answer>\n";
    return out;
}

}  // namespace pf::agents
