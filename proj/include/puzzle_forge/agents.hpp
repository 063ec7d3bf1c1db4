#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "puzzle_forge/core.hpp"

namespace pf::agents {

enum class Kind { oracle, noisy, random, silent };

// Scripted stand-ins for a policy. Transcripts are a pure function of
// (spec, instance, seed).
struct AgentSpec {
    Kind kind = Kind::oracle;
    double epsilon = 0.0;  // noisy: chance that a step carries a wrong value
    double delta = 0.0;    // noisy: chance that the final answer is corrupted

    // Throws ValidationError for probabilities outside [0,1].
    void validate() const;
};

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view token);

// Oracle: one STEP per solution entry in variable order, then the full answer.
// Noisy: oracle with per-step and final corruptions. Random: uniform domain
// values for every step and answer entry. Silent: empty text.
std::string transcript(const AgentSpec& spec, const PuzzleInstance& instance, std::uint64_t seed);

std::string render_answer(const Assignment& answer);

}  // namespace pf::agents
