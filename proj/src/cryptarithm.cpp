#include "puzzle_forge/cryptarithm.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "puzzle_forge/rng.hpp"

namespace pf::cryptarithm {

namespace {

bool is_word(const std::string& w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char ch) { return ch >= 'A' && ch <= 'Z'; });
}

void require_well_formed(const Puzzle& p) {
    if (p.addends.size() < 2) throw ValidationError("cryptarithm: need at least two addends");
    for (const auto& w : p.addends)
        if (!is_word(w)) throw ValidationError("cryptarithm: addend '" + w + "' is not an uppercase word");
    if (!is_word(p.result)) throw ValidationError("cryptarithm: result '" + p.result + "' is not an uppercase word");
    if (letters_of(p).size() > 10) throw ValidationError("cryptarithm: more than 10 distinct letters");
}

bool is_leading(const Puzzle& p, char letter) {
    auto leads = [&](const std::string& w) { return w.size() > 1 && w.front() == letter; };
    return leads(p.result) || std::any_of(p.addends.begin(), p.addends.end(), leads);
}

// Search plan: for each column from the right, bind the column's new letters
// then check the column digit and carry.
class ColumnSearch {
public:
    explicit ColumnSearch(const Puzzle& p) : columns_(static_cast<int>(p.result.size())) {
        std::array<bool, 26> seen{};
        for (const auto& w : p.addends) feasible_ = feasible_ && w.size() <= p.result.size();
        addend_cols_.resize(static_cast<std::size_t>(columns_));
        result_col_.resize(static_cast<std::size_t>(columns_));
        for (int col = 0; col < columns_; ++col) {
            auto bind = [&](char ch) {
                const int id = ch - 'A';
                if (!seen[static_cast<std::size_t>(id)]) {
                    seen[static_cast<std::size_t>(id)] = true;
                    plan_.push_back({true, id});
                }
            };
            for (const auto& w : p.addends) {
                if (col < static_cast<int>(w.size())) {
                    const char ch = w[w.size() - 1 - static_cast<std::size_t>(col)];
                    addend_cols_[static_cast<std::size_t>(col)].push_back(ch - 'A');
                    bind(ch);
                }
            }
            const char rch = p.result[p.result.size() - 1 - static_cast<std::size_t>(col)];
            result_col_[static_cast<std::size_t>(col)] = rch - 'A';
            bind(rch);
            plan_.push_back({false, col});
        }
        for (int i = 0; i < 26; ++i) nonzero_[static_cast<std::size_t>(i)] = is_leading(p, static_cast<char>('A' + i));
    }

    Solutions run(std::uint64_t limit) {
        limit_ = limit;
        digit_.fill(-1);
        used_.fill(false);
        if (feasible_) step(0, 0);
        return out_;
    }

private:
    struct Action {
        bool bind;
        int arg;  // letter id when binding, column otherwise
    };

    void step(std::size_t at, int carry) {
        if (out_.count >= limit_) return;
        if (at == plan_.size()) {
            if (carry != 0) return;
            if (++out_.count == 1) {
                Mapping m;
                for (int i = 0; i < 26; ++i)
                    if (digit_[static_cast<std::size_t>(i)] >= 0) m.emplace(static_cast<char>('A' + i), digit_[static_cast<std::size_t>(i)]);
                out_.first = std::move(m);
            }
            return;
        }
        const Action& a = plan_[at];
        if (a.bind) {
            const auto letter = static_cast<std::size_t>(a.arg);
            for (int d = nonzero_[letter] ? 1 : 0; d <= 9; ++d) {
                if (used_[static_cast<std::size_t>(d)]) continue;
                used_[static_cast<std::size_t>(d)] = true;
                digit_[letter] = d;
                step(at + 1, carry);
                digit_[letter] = -1;
                used_[static_cast<std::size_t>(d)] = false;
                if (out_.count >= limit_) return;
            }
            return;
        }
        int sum = carry;
        for (int id : addend_cols_[static_cast<std::size_t>(a.arg)]) sum += digit_[static_cast<std::size_t>(id)];
        if (sum % 10 != digit_[static_cast<std::size_t>(result_col_[static_cast<std::size_t>(a.arg)])]) return;
        step(at + 1, sum / 10);
    }

    int columns_;
    bool feasible_ = true;
    std::vector<Action> plan_;
    std::vector<std::vector<int>> addend_cols_;
    std::vector<int> result_col_;
    std::array<bool, 26> nonzero_{};
    std::array<int, 26> digit_{};
    std::array<bool, 10> used_{};
    std::uint64_t limit_ = 1;
    Solutions out_;
};

std::int64_t value_of(const std::string& word, const Mapping& m) {
    std::int64_t v = 0;
    for (char ch : word) v = v * 10 + m.at(ch);
    return v;
}

std::string render_prompt(const Puzzle& p) {
    std::ostringstream out;
    out << "Cryptarithm. Each letter stands for a different digit from 0 to 9, and no word starts with the digit 0. "
           "Find the digit of every letter so that the addition holds:\n\n"
        << render(p) << "\n\nVariables are the letters ";
    const auto letters = letters_of(p);
    for (std::size_t i = 0; i < letters.size(); ++i) out << (i ? ", " : "") << letters[i];
    out << "; values are single digits.\n\n" << kPromptFooter;
    return out.str();
}

PuzzleInstance make_instance(const Puzzle& p, const Mapping& m, int level, std::uint64_t seed) {
    PuzzleInstance inst;
    inst.game = GameId::cryptarithm;
    inst.level = level;
    inst.seed = seed;
    inst.prompt = render_prompt(p);
    inst.clues = json{{"addends", p.addends}, {"result", p.result}};
    for (const auto& [letter, digit] : m) inst.solution.emplace(std::string(1, letter), std::to_string(digit));
    inst.metadata = json{{"unique_letters", m.size()}, {"addend_count", p.addends.size()}};
    return inst;
}

std::string digits_to_word(std::int64_t number, const std::array<char, 10>& letter_of) {
    std::string s = std::to_string(number);
    for (auto& ch : s) ch = letter_of[static_cast<std::size_t>(ch - '0')];
    return s;
}

}  // namespace

Params Params::for_level(int level) {
    Params p;
    p.level = level;
    switch (level) {
        case 1: p.addends = 2; p.min_letters = 5; p.max_letters = 6; break;
        case 2: p.addends = 2; p.min_letters = p.max_letters = 7; break;
        case 3: p.addends = 2; p.min_letters = p.max_letters = 8; break;
        case 4: p.addends = 3; p.min_letters = p.max_letters = 9; break;
        case 5: p.addends = 3; p.min_letters = p.max_letters = 10; break;
        default: throw ValidationError("cryptarithm level must be in [1,5]");
    }
    return p;
}

std::string letters_of(const Puzzle& p) {
    std::set<char> s(p.result.begin(), p.result.end());
    for (const auto& w : p.addends) s.insert(w.begin(), w.end());
    return {s.begin(), s.end()};
}

std::string render(const Puzzle& p) {
    std::string s;
    for (std::size_t i = 0; i < p.addends.size(); ++i) s += (i ? " + " : "") + p.addends[i];
    return s + " = " + p.result;
}

Solutions solve(const Puzzle& puzzle, std::uint64_t limit) {
    require_well_formed(puzzle);
    ColumnSearch search(puzzle);
    return search.run(limit);
}

PuzzleInstance generate(const Params& params, std::uint64_t seed) {
    if (params.max_letters > 10 || params.min_letters < 2) throw ValidationError("cryptarithm: letters must be in [2,10]");
    Rng rng(seed);
    std::array<char, 26> alphabet{};
    std::iota(alphabet.begin(), alphabet.end(), 'A');
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        const auto letters = static_cast<int>(rng.next_between(params.min_letters, params.max_letters));
        std::array<int, 10> digits{};
        std::iota(digits.begin(), digits.end(), 0);
        rng.shuffle(std::span<int>(digits));
        rng.shuffle(std::span<char>(alphabet));
        std::array<bool, 10> allowed{};
        std::array<char, 10> letter_of{};
        for (int i = 0; i < letters; ++i) {
            allowed[static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])] = true;
            letter_of[static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])] = alphabet[static_cast<std::size_t>(i)];
        }
        std::vector<int> pool, leading_pool;
        for (int d = 0; d < 10; ++d) {
            if (!allowed[static_cast<std::size_t>(d)]) continue;
            pool.push_back(d);
            if (d != 0) leading_pool.push_back(d);
        }

        std::vector<std::int64_t> numbers;
        std::int64_t sum = 0;
        for (int a = 0; a < params.addends; ++a) {
            const auto len = rng.next_between(params.min_word_length, params.max_word_length);
            std::int64_t v = leading_pool[rng.next_range(leading_pool.size())];
            for (std::int64_t i = 1; i < len; ++i) v = v * 10 + pool[rng.next_range(pool.size())];
            numbers.push_back(v);
            sum += v;
        }
        const std::string sum_text = std::to_string(sum);
        if (static_cast<int>(sum_text.size()) > params.max_word_length) continue;
        std::array<bool, 10> used{};
        bool ok = true;
        for (char ch : sum_text) {
            const auto d = static_cast<std::size_t>(ch - '0');
            ok = ok && allowed[d];
            used[d] = true;
        }
        if (!ok) continue;
        for (auto v : numbers)
            for (char ch : std::to_string(v)) used[static_cast<std::size_t>(ch - '0')] = true;
        if (std::count(used.begin(), used.end(), true) != letters) continue;

        Puzzle puzzle;
        for (auto v : numbers) puzzle.addends.push_back(digits_to_word(v, letter_of));
        puzzle.result = digits_to_word(sum, letter_of);
        const auto found = solve(puzzle, 2);
        if (found.count != 1) continue;
        return make_instance(puzzle, *found.first, params.level, seed);
    }
    throw GenerationExhausted("cryptarithm: no unique puzzle after " + std::to_string(kMaxResamples) + " resamples");
}

PuzzleInstance from_puzzle(const Puzzle& puzzle, int level, std::uint64_t seed) {
    const auto found = solve(puzzle, 2);
    if (found.count != 1) throw ValidationError("cryptarithm: " + render(puzzle) + " does not have exactly one solution");
    return make_instance(puzzle, *found.first, level, seed);
}

Puzzle puzzle_of(const PuzzleInstance& instance) {
    return {instance.clues.at("addends").get<std::vector<std::string>>(), instance.clues.at("result").get<std::string>()};
}

csp::Model to_model(const Puzzle& p) {
    require_well_formed(p);
    csp::Model model;
    const auto letters = letters_of(p);
    for (char ch : letters) {
        std::vector<std::string> domain;
        for (int d = is_leading(p, ch) ? 1 : 0; d <= 9; ++d) domain.push_back(std::to_string(d));
        model.add_variable(std::string(1, ch), std::move(domain));
    }
    csp::AllDifferent distinct;
    for (char ch : letters) distinct.vars.emplace_back(1, ch);
    model.add(std::move(distinct));

    const auto columns = p.result.size();
    for (const auto& w : p.addends) {
        if (w.size() > columns) {
            // An addend longer than the result cannot be satisfied.
            model.add(csp::Table{{std::string(1, w.front())}, {}});
            return model;
        }
    }
    const auto max_carry = static_cast<int>(p.addends.size()) - 1;
    auto carry = [](std::size_t col) { return "c" + std::to_string(col); };
    for (std::size_t col = 1; col < columns; ++col) {
        std::vector<std::string> domain;
        for (int c = 0; c <= max_carry; ++c) domain.push_back(std::to_string(c));
        model.add_variable(carry(col), std::move(domain));
    }
    // Column col: addend letters + carry in == result letter + 10 * carry out.
    for (std::size_t col = 0; col < columns; ++col) {
        std::map<std::string, std::int64_t> coef;
        for (const auto& w : p.addends)
            if (col < w.size()) coef[std::string(1, w[w.size() - 1 - col])] += 1;
        coef[std::string(1, p.result[columns - 1 - col])] -= 1;
        if (col > 0) coef[carry(col)] += 1;
        if (col + 1 < columns) coef[carry(col + 1)] -= 10;
        csp::LinearSumEq eq;
        for (const auto& [var, k] : coef) {
            if (k == 0) continue;
            eq.vars.push_back(var);
            eq.coefficients.push_back(k);
        }
        if (!eq.vars.empty()) model.add(std::move(eq));
    }
    return model;
}

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) {
    const auto p = puzzle_of(instance);
    const auto letters = letters_of(p);
    Mapping m;
    std::array<bool, 10> used{};
    for (const auto& [name, value] : answer) {
        if (name.size() != 1 || letters.find(name[0]) == std::string::npos) return Verdict::fail("unknown letter " + name);
        if (value.size() != 1 || value[0] < '0' || value[0] > '9')
            return Verdict::fail("letter " + name + " has non-digit value '" + value + "'");
        const int d = value[0] - '0';
        if (used[static_cast<std::size_t>(d)]) return Verdict::fail("digit " + value + " assigned to two letters");
        used[static_cast<std::size_t>(d)] = true;
        m.emplace(name[0], d);
    }
    for (char ch : letters)
        if (!m.count(ch)) return Verdict::fail(std::string("missing letter ") + ch);
    for (char ch : letters)
        if (is_leading(p, ch) && m.at(ch) == 0) return Verdict::fail(std::string("leading letter ") + ch + " is 0");
    std::int64_t sum = 0;
    for (const auto& w : p.addends) sum += value_of(w, m);
    if (sum != value_of(p.result, m))
        return Verdict::fail("addends sum to " + std::to_string(sum) + ", result reads " + std::to_string(value_of(p.result, m)));
    return Verdict::pass();
}

PuzzleInstance Family::generate(int level, std::uint64_t seed) const {
    return cryptarithm::generate(Params::for_level(level), seed);
}

Verdict Family::check_final(const PuzzleInstance& instance, const Assignment& answer) const {
    return cryptarithm::check_final(instance, answer);
}

std::vector<std::string> Family::value_domain(const PuzzleInstance& instance, std::string_view variable) const {
    if (!instance.solution.count(std::string(variable))) return {};
    return {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"};
}

}  // namespace pf::cryptarithm
