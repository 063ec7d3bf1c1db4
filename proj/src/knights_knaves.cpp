#include "puzzle_forge/knights_knaves.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "puzzle_forge/rng.hpp"

namespace pf::knights_knaves {

namespace {

constexpr std::array<std::string_view, 6> kOpNames = {"knight", "knave", "not", "and", "or", "implies"};

bool is_atom(const Formula& f) { return f.op == Op::knight || f.op == Op::knave; }

Op parse_op(const std::string& s) {
    for (std::size_t i = 0; i < kOpNames.size(); ++i)
        if (kOpNames[i] == s) return static_cast<Op>(i);
    throw ValidationError("knights_knaves: unknown operator " + s);
}

// Truth under a bitmask where bit i set means character i is a knight.
bool eval_mask(const Formula& f, const std::vector<std::string>& names, std::uint32_t mask) {
    switch (f.op) {
        case Op::knight:
        case Op::knave: {
            const auto it = std::find(names.begin(), names.end(), f.who);
            const bool knight = (mask >> (it - names.begin())) & 1U;
            return f.op == Op::knight ? knight : !knight;
        }
        case Op::not_: return !eval_mask(f.args[0], names, mask);
        case Op::and_: return eval_mask(f.args[0], names, mask) && eval_mask(f.args[1], names, mask);
        case Op::or_: return eval_mask(f.args[0], names, mask) || eval_mask(f.args[1], names, mask);
        case Op::implies: return !eval_mask(f.args[0], names, mask) || eval_mask(f.args[1], names, mask);
    }
    return false;
}

bool consistent(const Statement& s, const std::vector<std::string>& names, std::uint32_t mask) {
    const auto it = std::find(names.begin(), names.end(), s.speaker);
    const bool knight = (mask >> (it - names.begin())) & 1U;
    return eval_mask(s.body, names, mask) == knight;
}

void collect(const Formula& f, std::set<std::string>& out) {
    if (is_atom(f)) out.insert(f.who);
    for (const auto& a : f.args) collect(a, out);
}

void check_references(const std::vector<std::string>& names, const std::vector<Statement>& statements) {
    if (names.empty() || names.size() > 10) throw ValidationError("knights_knaves: 1 to 10 characters required");
    std::set<std::string> known(names.begin(), names.end());
    for (const auto& s : statements) {
        std::set<std::string> refs{s.speaker};
        collect(s.body, refs);
        for (const auto& r : refs)
            if (!known.count(r)) throw ValidationError("knights_knaves: undeclared character " + r);
    }
}

Formula random_formula(const std::vector<std::string>& names, int budget, bool rich, Rng& rng) {
    auto atom = [&] {
        const auto& who = names[rng.next_range(names.size())];
        return rng.bernoulli(1, 2) ? Formula::is_knight(who) : Formula::is_knave(who);
    };
    if (budget == 0) return atom();
    if (!rich) {
        if (rng.bernoulli(1, 2)) return atom();
        return Formula::conj(random_formula(names, budget - 1, rich, rng), random_formula(names, budget - 1, rich, rng));
    }
    switch (rng.next_range(5)) {
        case 0: return atom();
        case 1: return Formula::negation(random_formula(names, budget - 1, rich, rng));
        case 2: return Formula::conj(random_formula(names, budget - 1, rich, rng), random_formula(names, budget - 1, rich, rng));
        case 3: return Formula::disj(random_formula(names, budget - 1, rich, rng), random_formula(names, budget - 1, rich, rng));
        default:
            return Formula::implication(random_formula(names, budget - 1, rich, rng),
                                        random_formula(names, budget - 1, rich, rng));
    }
}

std::string render_operand(const Formula& f) { return is_atom(f) ? render(f) : "(" + render(f) + ")"; }

std::string render_prompt(const std::vector<std::string>& names, const std::vector<Statement>& statements) {
    std::ostringstream out;
    out << "Knights and knaves. On this island every inhabitant is either a knight, who always tells the truth, "
           "or a knave, who always lies. You meet "
        << names.size() << " inhabitants:";
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : " ") << names[i];
    out << ".\n\n";
    for (const auto& s : statements) out << render(s) << '\n';
    out << "\nDetermine who is a knight and who is a knave. Variables are the inhabitant names; values are knight "
           "or knave.\n\n"
        << kPromptFooter;
    return out.str();
}

PuzzleInstance make_instance(const std::vector<std::string>& names, const std::vector<Statement>& statements,
                             std::uint32_t mask, int level, std::uint64_t seed) {
    PuzzleInstance inst;
    inst.game = GameId::knights_knaves;
    inst.level = level;
    inst.seed = seed;
    inst.prompt = render_prompt(names, statements);
    json list = json::array();
    int max_depth = 0;
    for (const auto& s : statements) {
        list.push_back(json{{"speaker", s.speaker}, {"ast", to_json(s.body)}, {"text", render(s)}});
        max_depth = std::max(max_depth, depth(s.body));
    }
    inst.clues = json{{"characters", names}, {"statements", std::move(list)}};
    for (std::size_t i = 0; i < names.size(); ++i) inst.solution[names[i]] = (mask >> i) & 1U ? "knight" : "knave";
    inst.metadata = json{{"characters", names.size()}, {"statement_count", statements.size()}, {"max_depth", max_depth}};
    return inst;
}

}  // namespace

Params Params::for_level(int level) {
    static constexpr int depths[] = {1, 1, 2, 2, 3};
    if (level < 1 || level > 5) throw ValidationError("knights_knaves level must be in [1,5]");
    return {level, level + 1, depths[level - 1]};
}

int depth(const Formula& f) {
    int d = 0;
    for (const auto& a : f.args) d = std::max(d, depth(a) + 1);
    return is_atom(f) ? 0 : std::max(d, 1);
}

bool evaluate(const Formula& f, const Assignment& assignment) {
    switch (f.op) {
        case Op::knight:
        case Op::knave: {
            const auto it = assignment.find(f.who);
            if (it == assignment.end()) throw ValidationError("knights_knaves: " + f.who + " is unassigned");
            if (it->second != "knight" && it->second != "knave")
                throw ValidationError("knights_knaves: " + f.who + " is '" + it->second + "'");
            return (it->second == "knight") == (f.op == Op::knight);
        }
        case Op::not_: return !evaluate(f.args.at(0), assignment);
        case Op::and_: return evaluate(f.args.at(0), assignment) && evaluate(f.args.at(1), assignment);
        case Op::or_: return evaluate(f.args.at(0), assignment) || evaluate(f.args.at(1), assignment);
        case Op::implies: return !evaluate(f.args.at(0), assignment) || evaluate(f.args.at(1), assignment);
    }
    return false;
}

std::string render(const Formula& f) {
    switch (f.op) {
        case Op::knight: return f.who + " is a knight";
        case Op::knave: return f.who + " is a knave";
        case Op::not_: return "it is not the case that " + render_operand(f.args[0]);
        case Op::and_: return render_operand(f.args[0]) + " and " + render_operand(f.args[1]);
        case Op::or_: return "either " + render_operand(f.args[0]) + " or " + render_operand(f.args[1]);
        case Op::implies: return "if " + render_operand(f.args[0]) + " then " + render_operand(f.args[1]);
    }
    return {};
}

std::string render(const Statement& s) { return s.speaker + " says: " + render(s.body) + "."; }

json to_json(const Formula& f) {
    if (is_atom(f)) return json{{"op", kOpNames[static_cast<std::size_t>(f.op)]}, {"who", f.who}};
    json args = json::array();
    for (const auto& a : f.args) args.push_back(to_json(a));
    return json{{"op", kOpNames[static_cast<std::size_t>(f.op)]}, {"args", std::move(args)}};
}

Formula formula_from_json(const json& j) {
    Formula f;
    f.op = parse_op(j.at("op").get<std::string>());
    if (is_atom(f)) {
        f.who = j.at("who").get<std::string>();
        return f;
    }
    for (const auto& a : j.at("args")) f.args.push_back(formula_from_json(a));
    const std::size_t arity = f.op == Op::not_ ? 1 : 2;
    if (f.args.size() != arity) throw ValidationError("knights_knaves: wrong operand count");
    return f;
}

std::vector<std::string> character_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.emplace_back(1, static_cast<char>('A' + i));
    return names;
}

std::uint64_t count_consistent(const std::vector<std::string>& characters, const std::vector<Statement>& statements,
                               std::uint64_t limit) {
    check_references(characters, statements);
    std::uint64_t count = 0;
    for (std::uint32_t mask = 0; mask < (1U << characters.size()) && count < limit; ++mask) {
        if (std::all_of(statements.begin(), statements.end(),
                        [&](const Statement& s) { return consistent(s, characters, mask); }))
            ++count;
    }
    return count;
}

csp::Model to_model(const std::vector<std::string>& characters, const std::vector<Statement>& statements) {
    check_references(characters, statements);
    csp::Model model;
    for (const auto& c : characters) model.add_variable(c, {"knave", "knight"});
    for (const auto& s : statements) {
        std::set<std::string> refs{s.speaker};
        collect(s.body, refs);
        csp::Table table{{refs.begin(), refs.end()}, {}};
        for (std::uint32_t local = 0; local < (1U << refs.size()); ++local) {
            Assignment a;
            std::vector<std::string> tuple;
            std::size_t bit = 0;
            for (const auto& r : refs) {
                tuple.push_back((local >> bit++) & 1U ? "knight" : "knave");
                a[r] = tuple.back();
            }
            if (evaluate(s.body, a) == (a.at(s.speaker) == "knight")) table.tuples.push_back(std::move(tuple));
        }
        model.add(std::move(table));
    }
    return model;
}

PuzzleInstance generate(const Params& params, std::uint64_t seed) {
    if (params.characters < 2 || params.characters > 10) throw ValidationError("knights_knaves: 2 to 10 characters");
    if (params.max_depth < 1) throw ValidationError("knights_knaves: max_depth must be positive");
    const auto names = character_names(params.characters);
    const bool rich = params.max_depth >= 2;
    const std::uint32_t all = 1U << params.characters;
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
        const auto truth = static_cast<std::uint32_t>(rng.next_range(all));
        std::vector<bool> alive(all, true);
        std::uint32_t remaining = all;
        std::vector<Statement> statements;

        // Returns whether the statement was kept.
        auto offer = [&](Statement s, bool require_progress) {
            if (!consistent(s, names, truth)) return false;
            if (std::find(statements.begin(), statements.end(), s) != statements.end()) return false;
            std::uint32_t cut = 0;
            for (std::uint32_t m = 0; m < all; ++m)
                if (alive[m] && !consistent(s, names, m)) ++cut;
            if (require_progress && cut == 0) return false;
            for (std::uint32_t m = 0; m < all; ++m)
                if (alive[m] && !consistent(s, names, m)) alive[m] = false;
            remaining -= cut;
            statements.push_back(std::move(s));
            return true;
        };

        int draws = 0;
        for (const auto& speaker : names) {
            while (draws < kStatementBudget) {
                ++draws;
                if (offer({speaker, random_formula(names, params.max_depth, rich, rng)}, false)) break;
            }
        }
        while (remaining > 1 && draws < kStatementBudget) {
            ++draws;
            const auto& speaker = names[rng.next_range(names.size())];
            offer({speaker, random_formula(names, params.max_depth, rich, rng)}, true);
        }
        if (remaining == 1 && statements.size() >= names.size())
            return make_instance(names, statements, truth, params.level, seed);
    }
    throw GenerationExhausted("knights_knaves: statement budget exhausted " + std::to_string(kMaxRestarts) + " times");
}

PuzzleInstance from_statements(const std::vector<std::string>& characters, const std::vector<Statement>& statements,
                               int level, std::uint64_t seed) {
    if (count_consistent(characters, statements, 2) != 1)
        throw ValidationError("knights_knaves: statements do not admit exactly one assignment");
    for (std::uint32_t mask = 0; mask < (1U << characters.size()); ++mask) {
        if (std::all_of(statements.begin(), statements.end(),
                        [&](const Statement& s) { return consistent(s, characters, mask); }))
            return make_instance(characters, statements, mask, level, seed);
    }
    throw ValidationError("knights_knaves: unreachable");
}

std::vector<std::string> characters_of(const PuzzleInstance& instance) {
    return instance.clues.at("characters").get<std::vector<std::string>>();
}

std::vector<Statement> statements_of(const PuzzleInstance& instance) {
    std::vector<Statement> out;
    for (const auto& s : instance.clues.at("statements"))
        out.push_back({s.at("speaker").get<std::string>(), formula_from_json(s.at("ast"))});
    return out;
}

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) {
    const auto names = characters_of(instance);
    for (const auto& [var, value] : answer) {
        if (std::find(names.begin(), names.end(), var) == names.end()) return Verdict::fail("unknown character " + var);
        if (value != "knight" && value != "knave") return Verdict::fail(var + " has unknown type '" + value + "'");
    }
    for (const auto& n : names)
        if (!answer.count(n)) return Verdict::fail("missing character " + n);
    for (const auto& s : statements_of(instance)) {
        if (evaluate(s.body, answer) != (answer.at(s.speaker) == "knight"))
            return Verdict::fail("inconsistent: " + render(s));
    }
    return Verdict::pass();
}

bool matches_solution(const PuzzleInstance& instance, const Assignment& answer) { return answer == instance.solution; }

PuzzleInstance Family::generate(int level, std::uint64_t seed) const {
    return knights_knaves::generate(Params::for_level(level), seed);
}

Verdict Family::check_final(const PuzzleInstance& instance, const Assignment& answer) const {
    return knights_knaves::check_final(instance, answer);
}

std::vector<std::string> Family::value_domain(const PuzzleInstance& instance, std::string_view variable) const {
    for (const auto& c : instance.clues.at("characters"))
        if (c.get<std::string>() == variable) return {"knave", "knight"};
    return {};
}

}  // namespace pf::knights_knaves
