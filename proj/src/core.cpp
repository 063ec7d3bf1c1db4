#include "puzzle_forge/core.hpp"

namespace pf {

namespace {

constexpr std::array<std::string_view, 7> kGameNames = {
    "sudoku", "nonogram", "cryptarithm", "magic_square", "zebra", "graph_connectivity", "knights_knaves",
};

const json& require(const json& object, const char* key) {
    auto it = object.find(key);
    if (it == object.end()) throw ValidationError(std::string("instance JSON lacks key \"") + key + "\"");
    return *it;
}

void validate(const PuzzleInstance& instance) {
    const int top = max_level(instance.game);
    if (instance.level < 1 || instance.level > top) {
        throw ValidationError("level " + std::to_string(instance.level) + " outside [1," +
                              std::to_string(top) + "] for " + std::string(to_string(instance.game)));
    }
    if (!instance.clues.is_object()) throw ValidationError("clues must be a JSON object");
    if (!instance.metadata.is_object()) throw ValidationError("metadata must be a JSON object");
}

}  // namespace

const std::string_view kPromptFooter =
    "Answer format:\n"
    "- Write each deduction on its own line as: STEP <variable>=<value>\n"
    "- Finish with the complete solution between <answer> and </answer> as "
    "semicolon-separated <variable>=<value> pairs.\n";

std::string_view to_string(GameId game) { return kGameNames[static_cast<std::size_t>(game)]; }

std::optional<GameId> parse_game(std::string_view token) {
    for (std::size_t i = 0; i < kGameNames.size(); ++i) {
        if (kGameNames[i] == token) return static_cast<GameId>(i);
    }
    return std::nullopt;
}

int max_level(GameId game) { return family(game).levels(); }

json instance_to_json_value(const PuzzleInstance& instance) {
    validate(instance);
    json solution = json::object();
    for (const auto& [variable, value] : instance.solution) solution[variable] = value;
    return json{
        {"game", to_string(instance.game)},
        {"level", instance.level},
        {"seed", instance.seed},
        {"prompt", instance.prompt},
        {"clues", instance.clues},
        {"solution", std::move(solution)},
        {"metadata", instance.metadata},
    };
}

std::string instance_to_json(const PuzzleInstance& instance) {
    // nlohmann::json objects are std::map backed, so keys come out sorted.
    return instance_to_json_value(instance).dump(-1, ' ', false, json::error_handler_t::strict);
}

PuzzleInstance instance_from_json_value(const json& value) {
    if (!value.is_object()) throw ValidationError("instance JSON must be an object");
    PuzzleInstance instance;
    const auto game = parse_game(require(value, "game").get<std::string>());
    if (!game) throw ValidationError("unknown game " + require(value, "game").dump());
    instance.game = *game;
    instance.level = require(value, "level").get<int>();
    instance.seed = require(value, "seed").get<std::uint64_t>();
    instance.prompt = require(value, "prompt").get<std::string>();
    instance.clues = require(value, "clues");
    instance.metadata = require(value, "metadata");
    for (const auto& [variable, v] : require(value, "solution").items()) {
        instance.solution.emplace(variable, v.get<std::string>());
    }
    validate(instance);
    return instance;
}

PuzzleInstance instance_from_json(std::string_view text) {
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed instance JSON: ") + e.what());
    }
    try {
        return instance_from_json_value(value);
    } catch (const json::type_error& e) {
        throw ValidationError(std::string("instance JSON has a mistyped field: ") + e.what());
    }
}

Consistency partial_consistent(const Assignment& partial, const Assignment& solution) {
    Consistency result{true, {}};
    for (const auto& [variable, value] : partial) {
        auto it = solution.find(variable);
        if (it == solution.end()) {
            result.consistent = false;
            result.unknown_variables.push_back(variable);
        } else if (it->second != value) {
            result.consistent = false;
        }
    }
    return result;
}

std::string grid_cell_name(int row, int col) {
    return "R" + std::to_string(row + 1) + "C" + std::to_string(col + 1);
}

std::optional<std::pair<int, int>> parse_grid_cell(std::string_view name, int n) {
    auto number = [](std::string_view digits) -> int {
        if (digits.empty() || digits.size() > 3 || digits[0] == '0') return -1;
        int v = 0;
        for (char ch : digits) {
            if (ch < '0' || ch > '9') return -1;
            v = v * 10 + (ch - '0');
        }
        return v;
    };
    if (name.size() < 4 || name[0] != 'R') return std::nullopt;
    const auto c_pos = name.find('C');
    if (c_pos == std::string_view::npos) return std::nullopt;
    const int row = number(name.substr(1, c_pos - 1));
    const int col = number(name.substr(c_pos + 1));
    if (row < 1 || col < 1 || row > n || col > n) return std::nullopt;
    return std::pair{row - 1, col - 1};
}

std::optional<std::string> PuzzleFamily::canonical_value(const PuzzleInstance& instance,
                                                         std::string_view variable,
                                                         std::string_view value) const {
    for (auto& candidate : value_domain(instance, variable)) {
        if (candidate == value) return candidate;
    }
    return std::nullopt;
}

Assignment PuzzleFamily::canonicalize(const PuzzleInstance& instance, const Assignment& answer) const {
    Assignment out;
    for (const auto& [variable, value] : answer) {
        auto canonical = canonical_value(instance, variable, value);
        out.emplace(variable, canonical ? *canonical : value);
    }
    return out;
}

}  // namespace pf
