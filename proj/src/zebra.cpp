#include "puzzle_forge/zebra.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "puzzle_forge/rng.hpp"

namespace pf::zebra {

namespace {

constexpr std::array<std::string_view, 5> kKindNames = {"position_fixed", "same_entity", "left_of", "adjacent", "not_at"};

ClueKind parse_kind(const std::string& s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == s) return static_cast<ClueKind>(i);
    throw ValidationError("zebra: unknown clue kind " + s);
}

bool unary(ClueKind kind) { return kind == ClueKind::position_fixed || kind == ClueKind::not_at; }

std::vector<std::string> position_values(int positions) {
    std::vector<std::string> out;
    for (int p = 1; p <= positions; ++p) out.push_back(std::to_string(p));
    return out;
}

json clue_json(const Clue& c) {
    json args = unary(c.kind) ? json{{"attr", c.attr1}, {"value", c.value1}, {"position", c.position}}
                              : json{{"attr1", c.attr1}, {"value1", c.value1}, {"attr2", c.attr2}, {"value2", c.value2}};
    return json{{"kind", to_string(c.kind)}, {"args", std::move(args)}, {"text", render(c)}};
}

Clue clue_from_json(const json& j) {
    Clue c;
    c.kind = parse_kind(j.at("kind").get<std::string>());
    const auto& a = j.at("args");
    if (unary(c.kind)) {
        c.attr1 = a.at("attr").get<std::string>();
        c.value1 = a.at("value").get<std::string>();
        c.position = a.at("position").get<int>();
    } else {
        c.attr1 = a.at("attr1").get<std::string>();
        c.value1 = a.at("value1").get<std::string>();
        c.attr2 = a.at("attr2").get<std::string>();
        c.value2 = a.at("value2").get<std::string>();
    }
    return c;
}

std::string render_prompt(const Layout& layout, const std::vector<Clue>& clues) {
    std::ostringstream out;
    out << "Zebra puzzle. There are " << layout.positions << " positions in a row, numbered 1 to " << layout.positions
        << " from left to right, each occupied by one person. Every attribute value below belongs to exactly one "
           "person.\n\n";
    for (const auto& a : layout.attributes) {
        out << a.name << ':';
        for (std::size_t i = 0; i < a.values.size(); ++i) out << (i ? ", " : " ") << a.values[i];
        out << '\n';
    }
    out << "\nClues:\n";
    for (std::size_t i = 0; i < clues.size(); ++i) out << i + 1 << ". " << render(clues[i]) << '\n';
    out << "\nVariables are attribute:value pairs such as " << variable(layout.attributes[0].name, layout.attributes[0].values[0])
        << "; values are position numbers 1 to " << layout.positions << ".\n\n"
        << kPromptFooter;
    return out.str();
}

PuzzleInstance make_instance(const Layout& layout, const std::vector<Clue>& clues, const Placement& solution, int level,
                             std::uint64_t seed) {
    PuzzleInstance inst;
    inst.game = GameId::zebra;
    inst.level = level;
    inst.seed = seed;
    inst.prompt = render_prompt(layout, clues);
    json attributes = json::object();
    for (const auto& a : layout.attributes) attributes[a.name] = a.values;
    json clue_list = json::array();
    for (const auto& c : clues) clue_list.push_back(clue_json(c));
    inst.clues = json{{"positions", layout.positions}, {"attributes", std::move(attributes)}, {"clues", std::move(clue_list)}};
    for (const auto& [var, pos] : solution) inst.solution.emplace(var, std::to_string(pos));
    inst.metadata = json{{"positions", layout.positions},
                         {"attribute_count", layout.attributes.size()},
                         {"clue_count", clues.size()}};
    return inst;
}

std::uint64_t count(const Layout& layout, const std::vector<Clue>& clues) {
    return csp::count_solutions(to_model(layout, clues), 2);
}

Clue random_clue(const Layout& layout, const std::vector<std::vector<int>>& value_at, Rng& rng) {
    // value_at[a][p - 1]: index of the value of attribute a at position p.
    const int P = layout.positions;
    const auto A = layout.attributes.size();
    auto at = [&](std::size_t attr, int pos) -> const std::string& {
        return layout.attributes[attr].values[static_cast<std::size_t>(value_at[attr][static_cast<std::size_t>(pos - 1)])];
    };
    Clue c;
    c.kind = static_cast<ClueKind>(rng.next_range(5));
    if (c.kind == ClueKind::same_entity && A < 2) c.kind = ClueKind::position_fixed;
    const auto a1 = static_cast<std::size_t>(rng.next_range(A));
    c.attr1 = layout.attributes[a1].name;
    switch (c.kind) {
        case ClueKind::position_fixed: {
            c.position = static_cast<int>(rng.next_between(1, P));
            c.value1 = at(a1, c.position);
            break;
        }
        case ClueKind::not_at: {
            const int pos = static_cast<int>(rng.next_between(1, P));
            c.value1 = at(a1, pos);
            c.position = static_cast<int>(rng.next_between(1, P - 1));
            if (c.position >= pos) ++c.position;
            break;
        }
        case ClueKind::same_entity: {
            auto a2 = static_cast<std::size_t>(rng.next_range(A - 1));
            if (a2 >= a1) ++a2;
            const int pos = static_cast<int>(rng.next_between(1, P));
            c.value1 = at(a1, pos);
            c.attr2 = layout.attributes[a2].name;
            c.value2 = at(a2, pos);
            break;
        }
        case ClueKind::left_of:
        case ClueKind::adjacent: {
            int p = 0, q = 0;
            if (c.kind == ClueKind::left_of) {
                p = static_cast<int>(rng.next_between(1, P - 1));
                q = static_cast<int>(rng.next_between(p + 1, P));
            } else {
                p = static_cast<int>(rng.next_between(1, P));
                q = p == 1 ? 2 : p == P ? P - 1 : (rng.bernoulli(1, 2) ? p - 1 : p + 1);
            }
            const auto a2 = static_cast<std::size_t>(rng.next_range(A));
            c.value1 = at(a1, p);
            c.attr2 = layout.attributes[a2].name;
            c.value2 = at(a2, q);
            break;
        }
    }
    return c;
}

}  // namespace

const std::vector<Attribute>& value_pools() {
    static const std::vector<Attribute> pools = {
        {"nationality", {"brit", "swede", "dane", "norwegian", "german"}},
        {"color", {"red", "green", "white", "yellow", "blue"}},
        {"drink", {"tea", "coffee", "milk", "beer", "water"}},
        {"pet", {"dog", "bird", "cat", "horse", "fish"}},
        {"hobby", {"reading", "painting", "hiking", "chess", "cooking"}},
    };
    return pools;
}

Params Params::for_level(int level) {
    static constexpr int positions[] = {3, 3, 4, 4, 5};
    static constexpr int attributes[] = {2, 3, 3, 4, 5};
    if (level < 1 || level > 5) throw ValidationError("zebra level must be in [1,5]");
    return {level, positions[level - 1], attributes[level - 1]};
}

std::string_view to_string(ClueKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::string variable(const std::string& attr, const std::string& value) { return attr + ":" + value; }

std::string render(const Clue& c) {
    const std::string first = "The person with " + c.attr1 + " " + c.value1;
    const std::string second = "the person with " + c.attr2 + " " + c.value2;
    switch (c.kind) {
        case ClueKind::position_fixed: return first + " is in position " + std::to_string(c.position) + ".";
        case ClueKind::not_at: return first + " is not in position " + std::to_string(c.position) + ".";
        case ClueKind::same_entity: return first + " also has " + c.attr2 + " " + c.value2 + ".";
        case ClueKind::left_of: return first + " is somewhere to the left of " + second + ".";
        case ClueKind::adjacent: return first + " is next to " + second + ".";
    }
    return {};
}

bool holds(const Clue& c, const Placement& placement) {
    const int p = placement.at(variable(c.attr1, c.value1));
    switch (c.kind) {
        case ClueKind::position_fixed: return p == c.position;
        case ClueKind::not_at: return p != c.position;
        default: break;
    }
    const int q = placement.at(variable(c.attr2, c.value2));
    switch (c.kind) {
        case ClueKind::same_entity: return p == q;
        case ClueKind::left_of: return p < q;
        case ClueKind::adjacent: return p - q == 1 || q - p == 1;
        default: return false;
    }
}

csp::Model to_model(const Layout& layout, const std::vector<Clue>& clues) {
    csp::Model model;
    const auto positions = position_values(layout.positions);
    for (const auto& a : layout.attributes) {
        csp::AllDifferent distinct;
        for (const auto& v : a.values) {
            model.add_variable(variable(a.name, v), positions);
            distinct.vars.push_back(variable(a.name, v));
        }
        model.add(std::move(distinct));
    }
    for (const auto& c : clues) {
        const auto v1 = variable(c.attr1, c.value1);
        switch (c.kind) {
            case ClueKind::position_fixed:
                model.add(csp::Table{{v1}, {{std::to_string(c.position)}}});
                break;
            case ClueKind::not_at: {
                csp::Table t{{v1}, {}};
                for (const auto& p : positions)
                    if (p != std::to_string(c.position)) t.tuples.push_back({p});
                model.add(std::move(t));
                break;
            }
            case ClueKind::same_entity:
                model.add(csp::Predicate{"equal", {v1, variable(c.attr2, c.value2)}});
                break;
            case ClueKind::left_of:
                model.add(csp::Predicate{"less_than", {v1, variable(c.attr2, c.value2)}});
                break;
            case ClueKind::adjacent:
                model.add(csp::Predicate{"adjacent", {v1, variable(c.attr2, c.value2)}});
                break;
        }
    }
    return model;
}

PuzzleInstance generate(const Params& params, std::uint64_t seed) {
    const auto& pools = value_pools();
    if (params.positions < 2 || params.positions > 5) throw ValidationError("zebra: positions must be in [2,5]");
    if (params.attributes < 1 || params.attributes > static_cast<int>(pools.size()))
        throw ValidationError("zebra: attributes must be in [1,5]");
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
        Layout layout;
        layout.positions = params.positions;
        for (int a = 0; a < params.attributes; ++a) {
            const auto& pool = pools[static_cast<std::size_t>(a)];
            std::vector<int> pick(pool.values.size());
            std::iota(pick.begin(), pick.end(), 0);
            rng.shuffle(std::span<int>(pick));
            pick.resize(static_cast<std::size_t>(params.positions));
            std::sort(pick.begin(), pick.end());
            Attribute attr{pool.name, {}};
            for (int i : pick) attr.values.push_back(pool.values[static_cast<std::size_t>(i)]);
            layout.attributes.push_back(std::move(attr));
        }
        // value_at[a][p]: which value of attribute a sits at position p + 1.
        std::vector<std::vector<int>> value_at;
        Placement solution;
        for (const auto& attr : layout.attributes) {
            std::vector<int> perm(static_cast<std::size_t>(params.positions));
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(std::span<int>(perm));
            for (int p = 0; p < params.positions; ++p)
                solution[variable(attr.name, attr.values[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])])] = p + 1;
            value_at.push_back(std::move(perm));
        }

        std::vector<Clue> clues;
        bool unique = false;
        for (int draws = 0; draws < kClueBudget && !unique; ++draws) {
            Clue c = random_clue(layout, value_at, rng);
            if (std::find(clues.begin(), clues.end(), c) != clues.end()) continue;
            clues.push_back(std::move(c));
            unique = count(layout, clues) == 1;
        }
        if (!unique) continue;

        for (std::size_t i = 0; i < clues.size();) {
            auto without = clues;
            without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
            if (count(layout, without) == 1) {
                clues = std::move(without);
            } else {
                ++i;
            }
        }
        return make_instance(layout, clues, solution, params.level, seed);
    }
    throw GenerationExhausted("zebra: clue budget exhausted " + std::to_string(kMaxRestarts) + " times");
}

PuzzleInstance from_clues(const Layout& layout, const std::vector<Clue>& clues, int level, std::uint64_t seed) {
    const auto model = to_model(layout, clues);
    if (csp::count_solutions(model, 2) != 1) throw ValidationError("zebra: clues do not admit exactly one placement");
    Placement solution;
    const auto found = csp::solve_one(model);
    for (const auto& [var, pos] : *found) solution[var] = std::stoi(pos);
    return make_instance(layout, clues, solution, level, seed);
}

Layout layout_of(const PuzzleInstance& instance) {
    Layout layout;
    layout.positions = instance.clues.at("positions").get<int>();
    for (const auto& [name, values] : instance.clues.at("attributes").items())
        layout.attributes.push_back({name, values.get<std::vector<std::string>>()});
    return layout;
}

std::vector<Clue> clues_of(const PuzzleInstance& instance) {
    std::vector<Clue> out;
    for (const auto& c : instance.clues.at("clues")) out.push_back(clue_from_json(c));
    return out;
}

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) {
    const auto layout = layout_of(instance);
    Placement placement;
    for (const auto& [var, value] : answer) {
        const auto domain = Family{}.value_domain(instance, var);
        if (domain.empty()) return Verdict::fail("unknown variable " + var);
        if (std::find(domain.begin(), domain.end(), value) == domain.end())
            return Verdict::fail(var + " has invalid position '" + value + "'");
        placement[var] = std::stoi(value);
    }
    for (const auto& a : layout.attributes) {
        std::set<int> taken;
        for (const auto& v : a.values) {
            auto it = placement.find(variable(a.name, v));
            if (it == placement.end()) return Verdict::fail("missing " + variable(a.name, v));
            if (!taken.insert(it->second).second)
                return Verdict::fail("two " + a.name + " values share position " + std::to_string(it->second));
        }
    }
    for (const auto& c : clues_of(instance))
        if (!holds(c, placement)) return Verdict::fail("violated clue: " + render(c));
    return Verdict::pass();
}

PuzzleInstance Family::generate(int level, std::uint64_t seed) const { return zebra::generate(Params::for_level(level), seed); }

Verdict Family::check_final(const PuzzleInstance& instance, const Assignment& answer) const {
    return zebra::check_final(instance, answer);
}

std::vector<std::string> Family::value_domain(const PuzzleInstance& instance, std::string_view var) const {
    const auto colon = var.find(':');
    if (colon == std::string_view::npos) return {};
    const auto& attributes = instance.clues.at("attributes");
    const auto it = attributes.find(std::string(var.substr(0, colon)));
    if (it == attributes.end()) return {};
    const auto value = var.substr(colon + 1);
    for (const auto& v : *it) {
        if (v.get<std::string>() == value) return position_values(instance.clues.at("positions").get<int>());
    }
    return {};
}

}  // namespace pf::zebra
