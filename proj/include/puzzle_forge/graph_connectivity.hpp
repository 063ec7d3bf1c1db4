#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "puzzle_forge/core.hpp"
#include "puzzle_forge/csp.hpp"

namespace pf {
class Rng;
}

namespace pf::graph_connectivity {

using Edge = std::pair<int, int>;  // u < v

enum class Regime { sparse, critical, dense };

inline constexpr std::array<Regime, 3> kRegimes = {Regime::sparse, Regime::critical, Regime::dense};

std::string_view to_string(Regime regime);

struct Params {
    int level = 1;
    int n = 8;

    // Vertices per level: 8, 15, 30, 50, 80.
    static Params for_level(int level);
};

inline constexpr int kMaxDraws = 10000;

// Edge probability: 0.5, 1 or 2 times ln(n)/n.
double edge_probability(Regime regime, int n);

// floor(p * 2^32). A pair is an edge when the top 32 bits of a draw fall below it.
std::uint64_t edge_threshold(Regime regime, int n);

// G(n, p) with p given as a 32-bit threshold; edges in lexicographic order.
std::vector<Edge> sample_edges(int n, std::uint64_t threshold, Rng& rng);

class DisjointSet {
public:
    explicit DisjointSet(int n);
    int find(int x);
    // False when a and b were already joined.
    bool unite(int a, int b);
    int components() const { return components_; }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
    int components_;
};

bool is_connected(int n, const std::vector<Edge>& edges);

PuzzleInstance generate(const Params& params, std::uint64_t seed);

// Wraps a hand-written graph. Throws ValidationError on bad vertices,
// self-loops or duplicate edges.
PuzzleInstance from_edges(int n, std::vector<Edge> edges, int level, std::uint64_t seed);

// "yes" / "no" for the accepted spellings (yes/no, true/false,
// connected/disconnected, any case).
std::optional<std::string> normalize_label(std::string_view token);

// Single variable "connected" restricted to the computed label.
csp::Model to_model(const PuzzleInstance& instance);

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer);

std::vector<Edge> edges_of(const PuzzleInstance& instance);

class Family final : public PuzzleFamily {
public:
    GameId id() const override { return GameId::graph_connectivity; }
    PuzzleInstance generate(int level, std::uint64_t seed) const override;
    Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) const override;
    std::vector<std::string> value_domain(const PuzzleInstance& instance,
                                          std::string_view variable) const override;
    std::optional<std::string> canonical_value(const PuzzleInstance& instance, std::string_view variable,
                                               std::string_view value) const override;
};

}  // namespace pf::graph_connectivity
