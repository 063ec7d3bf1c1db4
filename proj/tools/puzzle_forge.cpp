#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "puzzle_forge/agents.hpp"
#include "puzzle_forge/games.hpp"
#include "puzzle_forge/protocol.hpp"
#include "puzzle_forge/reward.hpp"
#include "puzzle_forge/rng.hpp"
#include "puzzle_forge/simulate.hpp"

namespace fs = std::filesystem;
using namespace pf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitGeneration = 2;
constexpr int kExitBudget = 3;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("puzzle-forge");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("PUZZLE_FORGE_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; only honour real ones.
        if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
        else spdlog::warn("ignoring PUZZLE_FORGE_LOG={}", env);
    }
}

GameId require_game(const std::string& name) {
    const auto game = parse_game(name);
    if (!game) throw ValidationError("unknown game " + name);
    return *game;
}

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::vector<json> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ValidationError(path + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return rows;
}

// Writes to a file, or to stdout for "-".
class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw ValidationError("cannot write " + path);
        }
    }
    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
    void close() {
        if (file_.is_open()) file_.close();
    }

private:
    std::string path_;
    std::ofstream file_;
};

struct GenOptions {
    std::string game;
    int level = 1;
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenOptions& o) {
    const auto game = require_game(o.game);
    if (o.level < 1 || o.level > max_level(game))
        throw ValidationError("level must lie in [1," + std::to_string(max_level(game)) + "]");
    const std::string index_path = o.out + ".index.json";
    {
        Output out(o.out);
        try {
            for (std::uint64_t i = 0; i < o.count; ++i) {
                out.stream() << instance_to_json(generate(game, o.level, derive_seed(o.seed, i))) << '\n';
            }
        } catch (const GenerationExhausted& e) {
            out.close();
            if (o.out != "-") std::filesystem::remove(o.out);
            spdlog::error("generation failed: {}", e.what());
            return kExitGeneration;
        }
    }
    if (o.out != "-") {
        json index{{"game", o.game},
                   {"seed", o.seed},
                   {"count", o.count},
                   {"levels", {{std::to_string(o.level), o.count}}},
                   {"file", fs::path(o.out).filename().string()}};
        std::ofstream(index_path, std::ios::binary | std::ios::trunc) << index.dump() << '\n';
    }
    spdlog::info("wrote {} {} instances at level {}", o.count, o.game, o.level);
    return kExitOk;
}

struct RewardOptions {
    double gamma = 1.0;
    double fmt_weight = 1.0;
    double int_weight = 1.0;
    bool normalize = false;

    reward::RewardConfig config() const {
        reward::RewardConfig c;
        c.gamma = gamma;
        c.fmt_weight = fmt_weight;
        c.int_weight = int_weight;
        c.normalize_steps = normalize;
        c.validate();
        return c;
    }
};

void add_reward_flags(CLI::App* cmd, RewardOptions& r) {
    cmd->add_option("--gamma", r.gamma, "Discount factor in (0,1]");
    cmd->add_option("--fmt-weight", r.fmt_weight, "Per-step format reward weight");
    cmd->add_option("--int-weight", r.int_weight, "Per-step intermediate reward weight");
    cmd->add_flag("--normalize", r.normalize, "Divide step rewards by the step count");
}

struct GradeOptions {
    std::string instances;
    std::string transcripts;
    std::string out = "-";
    RewardOptions reward;
};

int cmd_grade(const GradeOptions& o) {
    std::multimap<std::pair<GameId, std::uint64_t>, PuzzleInstance> instances;
    for (const auto& row : read_jsonl(o.instances)) {
        auto inst = instance_from_json_value(row);
        instances.emplace(std::pair{inst.game, inst.seed}, std::move(inst));
    }
    const reward::RewardConfigs configs(o.reward.config());
    Output out(o.out);
    std::uint64_t count = 0, graded = 0, errors = 0;
    double sum_cumulative = 0.0, sum_final = 0.0, sum_discounted = 0.0;
    for (const auto& row : read_jsonl(o.transcripts)) {
        ++count;
        json record;
        try {
            const auto game = require_game(row.at("game").get<std::string>());
            const auto seed = row.at("seed").get<std::uint64_t>();
            const auto text = row.at("transcript").get<std::string>();
            std::vector<const PuzzleInstance*> matches;
            auto [lo, hi] = instances.equal_range({game, seed});
            for (auto it = lo; it != hi; ++it)
                if (!row.contains("level") || row.at("level").get<int>() == it->second.level) matches.push_back(&it->second);
            if (matches.size() != 1) {
                record = {{"game", to_string(game)},
                          {"seed", seed},
                          {"error", matches.empty() ? "unmatched" : "ambiguous"}};
            } else {
                const auto b = configs.grade(*matches.front(), text);
                record = reward::record_json(*matches.front(), b);
                ++graded;
                sum_cumulative += b.cumulative;
                sum_final += b.r_final;
                sum_discounted += b.discounted_return;
            }
        } catch (const std::exception& e) {
            record = {{"error", "malformed"}, {"msg", e.what()}};
        }
        if (record.contains("error")) ++errors;
        out.stream() << record.dump() << '\n';
    }
    const double n = graded ? static_cast<double>(graded) : 1.0;
    out.stream() << json{{"summary",
                          {{"transcripts", count},
                           {"graded", graded},
                           {"errors", errors},
                           {"mean_cumulative", graded ? sum_cumulative / n : 0.0},
                           {"mean_r_final", graded ? sum_final / n : 0.0},
                           {"mean_discounted_return", graded ? sum_discounted / n : 0.0}}}}
                        .dump()
                 << '\n';
    return kExitOk;
}

struct AgentOptions {
    std::string agent = "oracle";
    double epsilon = 0.0;
    double delta = 0.0;

    agents::AgentSpec spec() const {
        const auto kind = agents::parse_kind(agent);
        if (!kind) throw ValidationError("unknown agent " + agent);
        agents::AgentSpec s{*kind, epsilon, delta};
        s.validate();
        return s;
    }
};

void add_agent_flags(CLI::App* cmd, AgentOptions& a) {
    cmd->add_option("--agent", a.agent, "oracle | noisy | random | silent");
    cmd->add_option("--epsilon", a.epsilon, "Noisy agent: per-step error rate");
    cmd->add_option("--delta", a.delta, "Noisy agent: final-answer error rate");
}

struct CurriculumOptions {
    double tau_int = 0.8;
    double tau_final = 0.7;
    int window = 200;
    int max_level = 5;
    std::vector<std::string> games;

    curriculum::CurriculumConfig config() const {
        curriculum::CurriculumConfig c;
        c.tau_int = tau_int;
        c.tau_final = tau_final;
        c.window = window;
        c.max_level = max_level;
        if (!games.empty()) {
            c.games.clear();
            for (const auto& g : games) c.games.push_back(require_game(g));
        }
        c.validate();
        return c;
    }
};

void add_curriculum_flags(CLI::App* cmd, CurriculumOptions& c) {
    cmd->add_option("--tau-int", c.tau_int, "Intermediate-accuracy threshold");
    cmd->add_option("--tau-final", c.tau_final, "Final-accuracy threshold");
    cmd->add_option("--window", c.window, "Episodes per accuracy window");
    cmd->add_option("--max-level", c.max_level, "Highest curriculum level");
    cmd->add_option("--game", c.games, "Restrict to these games (repeatable; default all)");
}

struct SimulateOptions {
    AgentOptions agent;
    CurriculumOptions curriculum;
    RewardOptions reward;
    std::uint64_t seed = 0;
    std::uint64_t budget = 20000;
    std::uint64_t snapshot_every = 1000;
    bool holdout = false;
    std::string out = "-";
    std::string checkpoint;
};

int cmd_simulate(const SimulateOptions& o) {
    simulate::SimulationConfig config;
    config.curriculum = o.curriculum.config();
    config.agent = o.agent.spec();
    config.reward = o.reward.config();
    config.seed = o.seed;
    config.budget = o.budget;
    config.snapshot_every = o.snapshot_every;
    config.holdout = o.holdout;
    Output out(o.out);
    const auto result = simulate::run(config, &out.stream());
    out.close();
    for (const auto& [game, level] : result.levels)
        spdlog::info("{}: level {} after {} episodes", to_string(game), level, result.episodes_per_game.count(game) ? result.episodes_per_game.at(game) : 0);
    if (!o.checkpoint.empty())
        std::ofstream(o.checkpoint, std::ios::binary | std::ios::trunc) << result.state.checkpoint().dump() << '\n';
    if (!result.completed && config.agent.kind == agents::Kind::oracle) {
        spdlog::error("oracle agent did not finish the curriculum within {} episodes", o.budget);
        return kExitBudget;
    }
    return kExitOk;
}

struct ServeOptions {
    std::string transport = "stdio";
    std::string host = "127.0.0.1";
    std::uint16_t port = 7777;
    std::uint64_t seed = 0;
    RewardOptions reward;
    CurriculumOptions curriculum;
};

int cmd_serve(const ServeOptions& o) {
    protocol::ServerConfig config;
    config.reward = o.reward.config();
    config.curriculum = o.curriculum.config();
    config.seed = o.seed;
    protocol::Server server(config);
    if (o.transport == "stdio") {
        server.serve_stream(std::cin, std::cout);
        return kExitOk;
    }
    if (o.transport != "tcp") throw ValidationError("transport must be stdio or tcp");
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.serve_tcp(o.host, o.port, g_stop, [&](std::uint16_t port) {
        spdlog::info("listening on {}:{}", o.host, port);
        std::fprintf(stderr, "PORT %u\n", static_cast<unsigned>(port));
        std::fflush(stderr);
    });
    return kExitOk;
}

struct RolloutOptions {
    std::string instances;
    std::string out = "-";
    std::uint64_t seed = 0;
    AgentOptions agent;
};

int cmd_rollout(const RolloutOptions& o) {
    const auto spec = o.agent.spec();
    Output out(o.out);
    std::uint64_t index = 0;
    for (const auto& row : read_jsonl(o.instances)) {
        const auto inst = instance_from_json_value(row);
        out.stream() << json{{"game", to_string(inst.game)},
                             {"seed", inst.seed},
                             {"level", inst.level},
                             {"agent", agents::to_string(spec.kind)},
                             {"transcript", agents::transcript(spec, inst, derive_seed(o.seed, index++))}}
                            .dump()
                     << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Seeded logic-puzzle generators, transcript grader and curriculum harness", "puzzle-forge"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate instances as canonical JSON lines");
    gen_cmd->add_option("--game", gen.game, "Game id")->required();
    gen_cmd->add_option("--level", gen.level, "Difficulty level")->required();
    gen_cmd->add_option("--count", gen.count, "Number of instances");
    gen_cmd->add_option("--seed", gen.seed, "Batch seed; instance i uses derive_seed(seed, i)");
    gen_cmd->add_option("--out", gen.out, "Output JSONL path ('-' for stdout)")->required();

    GradeOptions grade;
    auto* grade_cmd = app.add_subcommand("grade", "Grade transcripts against instances");
    grade_cmd->add_option("--instances", grade.instances, "Instance JSONL")->required();
    grade_cmd->add_option("--transcripts", grade.transcripts, "Transcript JSONL: {game, seed, [level], transcript}")
        ->required();
    grade_cmd->add_option("--out", grade.out, "Report path ('-' for stdout)");
    add_reward_flags(grade_cmd, grade.reward);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run the curriculum loop with a scripted agent");
    add_agent_flags(sim_cmd, sim.agent);
    add_curriculum_flags(sim_cmd, sim.curriculum);
    add_reward_flags(sim_cmd, sim.reward);
    sim_cmd->add_option("--seed", sim.seed, "Run seed");
    sim_cmd->add_option("--budget", sim.budget, "Maximum graded episodes");
    sim_cmd->add_option("--snapshot-every", sim.snapshot_every, "Episodes between accuracy snapshots (0: none)");
    sim_cmd->add_flag("--holdout", sim.holdout, "Measure accuracy on a disjoint held-out seed stream");
    sim_cmd->add_option("--out", sim.out, "Event log JSONL ('-' for stdout)");
    sim_cmd->add_option("--checkpoint", sim.checkpoint, "Write the final curriculum state here");

    ServeOptions serve;
    auto* serve_cmd = app.add_subcommand("serve", "Speak the episode protocol over stdio or TCP");
    serve_cmd->add_option("--transport", serve.transport, "stdio | tcp");
    serve_cmd->add_option("--host", serve.host, "TCP bind address");
    serve_cmd->add_option("--port", serve.port, "TCP port (0 picks a free one)");
    serve_cmd->add_option("--seed", serve.seed, "Base seed for resets without one");
    add_reward_flags(serve_cmd, serve.reward);
    add_curriculum_flags(serve_cmd, serve.curriculum);

    RolloutOptions rollout;
    auto* rollout_cmd = app.add_subcommand("rollout", "Write scripted-agent transcripts for instances");
    rollout_cmd->add_option("--instances", rollout.instances, "Instance JSONL")->required();
    rollout_cmd->add_option("--out", rollout.out, "Transcript JSONL ('-' for stdout)");
    rollout_cmd->add_option("--seed", rollout.seed, "Agent seed");
    add_agent_flags(rollout_cmd, rollout.agent);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_cmd) return cmd_gen(gen);
        if (*grade_cmd) return cmd_grade(grade);
        if (*sim_cmd) return cmd_simulate(sim);
        if (*serve_cmd) return cmd_serve(serve);
        if (*rollout_cmd) return cmd_rollout(rollout);
    } catch (const GenerationExhausted& e) {
        spdlog::error("{}", e.what());
        return kExitGeneration;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
