#include "puzzle_forge/graph_connectivity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "puzzle_forge/rng.hpp"

namespace pf::graph_connectivity {

namespace {

const char* const kVariable = "connected";

std::string render_prompt(int n, const std::vector<Edge>& edges) {
    std::ostringstream out;
    out << "Graph connectivity. An undirected graph has " << n << " vertices numbered 0 to " << n - 1
        << ". Its edges are:\n";
    if (edges.empty()) out << "(no edges)\n";
    for (const auto& [u, v] : edges) out << u << " - " << v << '\n';
    out << "\nIs the graph connected? Answer with the variable " << kVariable << " set to yes or no.\n\n"
        << kPromptFooter;
    return out.str();
}

PuzzleInstance make_instance(int n, const std::vector<Edge>& edges, int level, std::uint64_t seed, json metadata) {
    PuzzleInstance inst;
    inst.game = GameId::graph_connectivity;
    inst.level = level;
    inst.seed = seed;
    inst.prompt = render_prompt(n, edges);
    json edge_list = json::array();
    for (const auto& [u, v] : edges) edge_list.push_back({u, v});
    inst.clues = json{{"n", n}, {"edges", std::move(edge_list)}};
    inst.solution[kVariable] = is_connected(n, edges) ? "yes" : "no";
    metadata["n"] = n;
    metadata["edge_count"] = edges.size();
    inst.metadata = std::move(metadata);
    return inst;
}

}  // namespace

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::sparse: return "sparse";
        case Regime::critical: return "critical";
        case Regime::dense: return "dense";
    }
    return {};
}

Params Params::for_level(int level) {
    static constexpr int sizes[] = {8, 15, 30, 50, 80};
    if (level < 1 || level > 5) throw ValidationError("graph_connectivity level must be in [1,5]");
    return {level, sizes[level - 1]};
}

double edge_probability(Regime regime, int n) {
    const double base = std::log(static_cast<double>(n)) / n;
    switch (regime) {
        case Regime::sparse: return 0.5 * base;
        case Regime::critical: return base;
        case Regime::dense: return 2.0 * base;
    }
    return base;
}

std::uint64_t edge_threshold(Regime regime, int n) {
    const double p = std::clamp(edge_probability(regime, n), 0.0, 1.0);
    return static_cast<std::uint64_t>(std::floor(std::ldexp(p, 32)));
}

std::vector<Edge> sample_edges(int n, std::uint64_t threshold, Rng& rng) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if ((rng.next_u64() >> 32) < threshold) edges.emplace_back(u, v);
    return edges;
}

DisjointSet::DisjointSet(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
}

int DisjointSet::find(int x) {
    auto i = static_cast<std::size_t>(x);
    while (parent_[i] != static_cast<int>(i)) {
        parent_[i] = parent_[static_cast<std::size_t>(parent_[i])];
        i = static_cast<std::size_t>(parent_[i]);
    }
    return static_cast<int>(i);
}

bool DisjointSet::unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    auto& rank_a = rank_[static_cast<std::size_t>(ra)];
    auto& rank_b = rank_[static_cast<std::size_t>(rb)];
    if (rank_a < rank_b) std::swap(ra, rb);
    parent_[static_cast<std::size_t>(rb)] = ra;
    if (rank_a == rank_b) ++rank_[static_cast<std::size_t>(ra)];
    --components_;
    return true;
}

bool is_connected(int n, const std::vector<Edge>& edges) {
    DisjointSet sets(n);
    for (const auto& [u, v] : edges) sets.unite(u, v);
    return sets.components() <= 1;
}

PuzzleInstance generate(const Params& params, std::uint64_t seed) {
    if (params.n < 2) throw ValidationError("graph_connectivity: n must be at least 2");
    Rng rng(seed);
    const bool want_connected = rng.bernoulli(1, 2);
    for (int draw = 1; draw <= kMaxDraws; ++draw) {
        const Regime regime = kRegimes[rng.next_range(kRegimes.size())];
        auto edges = sample_edges(params.n, edge_threshold(regime, params.n), rng);
        if (is_connected(params.n, edges) != want_connected) continue;
        json metadata{{"regime", to_string(regime)},
                      {"p", edge_probability(regime, params.n)},
                      {"p_threshold", edge_threshold(regime, params.n)},
                      {"draws", draw}};
        return make_instance(params.n, edges, params.level, seed, std::move(metadata));
    }
    throw GenerationExhausted("graph_connectivity: no " + std::string(want_connected ? "connected" : "disconnected") +
                              " graph within " + std::to_string(kMaxDraws) + " draws");
}

PuzzleInstance from_edges(int n, std::vector<Edge> edges, int level, std::uint64_t seed) {
    if (n < 2) throw ValidationError("graph_connectivity: n must be at least 2");
    for (auto& [u, v] : edges) {
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw ValidationError("graph_connectivity: vertex out of range");
        if (u == v) throw ValidationError("graph_connectivity: self-loop");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw ValidationError("graph_connectivity: duplicate edge");
    return make_instance(n, edges, level, seed, json::object());
}

std::optional<std::string> normalize_label(std::string_view token) {
    std::string lower;
    for (char ch : token) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "yes" || lower == "true" || lower == "connected") return "yes";
    if (lower == "no" || lower == "false" || lower == "disconnected") return "no";
    return std::nullopt;
}

std::vector<Edge> edges_of(const PuzzleInstance& instance) {
    std::vector<Edge> edges;
    for (const auto& e : instance.clues.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return edges;
}

csp::Model to_model(const PuzzleInstance& instance) {
    const int n = instance.clues.at("n").get<int>();
    csp::Model model;
    model.add_variable(kVariable, {"no", "yes"});
    model.add(csp::Table{{kVariable}, {{is_connected(n, edges_of(instance)) ? "yes" : "no"}}});
    return model;
}

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) {
    for (const auto& [var, value] : answer)
        if (var != kVariable) return Verdict::fail("unknown variable " + var);
    const auto it = answer.find(kVariable);
    if (it == answer.end()) return Verdict::fail("missing connected");
    const auto label = normalize_label(it->second);
    if (!label) return Verdict::fail("unrecognized label '" + it->second + "'");
    const bool truth = is_connected(instance.clues.at("n").get<int>(), edges_of(instance));
    if (*label != (truth ? "yes" : "no")) return Verdict::fail("wrong label " + *label);
    return Verdict::pass();
}

PuzzleInstance Family::generate(int level, std::uint64_t seed) const {
    return graph_connectivity::generate(Params::for_level(level), seed);
}

Verdict Family::check_final(const PuzzleInstance& instance, const Assignment& answer) const {
    return graph_connectivity::check_final(instance, answer);
}

std::vector<std::string> Family::value_domain(const PuzzleInstance&, std::string_view variable) const {
    if (variable != kVariable) return {};
    return {"no", "yes"};
}

std::optional<std::string> Family::canonical_value(const PuzzleInstance&, std::string_view variable,
                                                   std::string_view value) const {
    if (variable != kVariable) return std::nullopt;
    return normalize_label(value);
}

}  // namespace pf::graph_connectivity
