#include "puzzle_forge/curriculum.hpp"

#include <set>

#include "puzzle_forge/rng.hpp"

namespace pf::curriculum {

void CurriculumConfig::validate() const {
    if (!(tau_int > 0.0 && tau_int <= 1.0)) throw ValidationError("tau_int must lie in (0,1]");
    if (!(tau_final > 0.0 && tau_final <= 1.0)) throw ValidationError("tau_final must lie in (0,1]");
    if (window < 10) throw ValidationError("window must be at least 10");
    if (games.empty()) throw ValidationError("curriculum needs at least one game");
    std::set<GameId> seen;
    for (auto g : games) {
        if (!seen.insert(g).second) throw ValidationError("game listed twice: " + std::string(to_string(g)));
        if (max_level < 1 || max_level > pf::max_level(g))
            throw ValidationError("max_level outside [1," + std::to_string(pf::max_level(g)) + "] for " +
                                  std::string(to_string(g)));
    }
}

EpisodeResult summarize(const reward::RewardBreakdown& breakdown) {
    EpisodeResult r;
    r.final_correct = breakdown.r_final == 1;
    if (!breakdown.per_step.empty()) {
        std::size_t hits = 0;
        for (const auto& s : breakdown.per_step) hits += s.intermediate > 0.0;
        r.step_accuracy = static_cast<double>(hits) / breakdown.per_step.size();
    }
    return r;
}

CurriculumState::CurriculumState(CurriculumConfig config) : config_(std::move(config)) {
    config_.validate();
    for (auto g : config_.games) games_[g];
}

const CurriculumState::Progress& CurriculumState::progress(GameId game) const {
    const auto it = games_.find(game);
    if (it == games_.end()) throw ValidationError("game not in curriculum: " + std::string(to_string(game)));
    return it->second;
}

CurriculumState::Progress& CurriculumState::progress(GameId game) {
    return const_cast<Progress&>(std::as_const(*this).progress(game));
}

void CurriculumState::record_episode(GameId game, const EpisodeResult& result) {
    auto& p = progress(game);
    p.window.push_back(result);
    while (p.window.size() > static_cast<std::size_t>(config_.window)) p.window.pop_front();
}

WindowMeans CurriculumState::means(GameId game) const {
    const auto& w = progress(game).window;
    WindowMeans m;
    m.size = w.size();
    if (w.empty()) return m;
    std::size_t finals = 0;
    for (const auto& e : w) {
        m.a_int += e.step_accuracy;
        finals += e.final_correct;
    }
    m.a_int /= static_cast<double>(w.size());
    m.a_final = static_cast<double>(finals) / static_cast<double>(w.size());
    return m;
}

bool CurriculumState::passing(const Progress& p) const {
    if (p.window.size() < static_cast<std::size_t>(config_.window)) return false;
    double a_int = 0.0;
    std::size_t finals = 0;
    for (const auto& e : p.window) {
        a_int += e.step_accuracy;
        finals += e.final_correct;
    }
    const double n = static_cast<double>(p.window.size());
    return a_int / n >= config_.tau_int && static_cast<double>(finals) / n >= config_.tau_final;
}

Advance CurriculumState::maybe_advance(GameId game) {
    auto& p = progress(game);
    Advance a{p.level, false, p.window.size() >= static_cast<std::size_t>(config_.window)};
    if (!a.window_full || p.level >= config_.max_level || !passing(p)) return a;
    ++p.level;
    p.window.clear();
    a.level = p.level;
    a.advanced = true;
    return a;
}

bool CurriculumState::mastered(GameId game) const {
    const auto& p = progress(game);
    return p.level == config_.max_level && passing(p);
}

bool CurriculumState::all_mastered() const {
    for (const auto& [g, p] : games_)
        if (!mastered(g)) return false;
    return true;
}

std::pair<GameId, int> CurriculumState::sample_task(Rng& rng) const {
    const auto g = config_.games[rng.next_range(config_.games.size())];
    return {g, level(g)};
}

std::pair<GameId, int> CurriculumState::sample_open_task(Rng& rng) const {
    std::vector<GameId> open;
    for (auto g : config_.games)
        if (!mastered(g)) open.push_back(g);
    if (open.empty()) return sample_task(rng);
    const auto g = open[rng.next_range(open.size())];
    return {g, level(g)};
}

int CurriculumState::level(GameId game) const { return progress(game).level; }

const std::deque<EpisodeResult>& CurriculumState::window(GameId game) const { return progress(game).window; }

json CurriculumState::checkpoint() const {
    json games = json::object();
    for (const auto& [g, p] : games_) {
        json window = json::array();
        for (const auto& e : p.window) window.push_back({e.step_accuracy, e.final_correct});
        games[std::string(to_string(g))] = json{{"level", p.level}, {"window", std::move(window)}};
    }
    json order = json::array();
    for (auto g : config_.games) order.push_back(to_string(g));
    return json{{"config",
                 {{"tau_int", config_.tau_int},
                  {"tau_final", config_.tau_final},
                  {"window", config_.window},
                  {"max_level", config_.max_level},
                  {"games", std::move(order)}}},
                {"games", std::move(games)}};
}

CurriculumState CurriculumState::from_checkpoint(const json& checkpoint) {
    try {
        const auto& c = checkpoint.at("config");
        CurriculumConfig config;
        config.tau_int = c.at("tau_int").get<double>();
        config.tau_final = c.at("tau_final").get<double>();
        config.window = c.at("window").get<int>();
        config.max_level = c.at("max_level").get<int>();
        config.games.clear();
        for (const auto& name : c.at("games")) {
            const auto g = parse_game(name.get<std::string>());
            if (!g) throw ValidationError("checkpoint names unknown game " + name.dump());
            config.games.push_back(*g);
        }
        CurriculumState state(config);
        for (auto& [g, p] : state.games_) {
            const auto& saved = checkpoint.at("games").at(std::string(to_string(g)));
            p.level = saved.at("level").get<int>();
            if (p.level < 1 || p.level > config.max_level) throw ValidationError("checkpoint level out of range");
            for (const auto& e : saved.at("window")) p.window.push_back({e.at(0).get<double>(), e.at(1).get<bool>()});
            if (p.window.size() > static_cast<std::size_t>(config.window))
                throw ValidationError("checkpoint window exceeds configured size");
        }
        return state;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed curriculum checkpoint: ") + e.what());
    }
}

json advance_event(GameId game, int from, int to, std::uint64_t episode) {
    return json{{"event", "advance"}, {"game", to_string(game)}, {"from", from}, {"to", to}, {"episode", episode}};
}

}  // namespace pf::curriculum
