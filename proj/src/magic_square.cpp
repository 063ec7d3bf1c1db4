#include "puzzle_forge/magic_square.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "puzzle_forge/rng.hpp"

namespace pf::magic_square {

namespace {

Square siamese(int n) {
    Square sq(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    int r = 0, c = n / 2;
    for (int v = 1; v <= n * n; ++v) {
        sq[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
        const int nr = (r - 1 + n) % n, nc = (c + 1) % n;
        if (sq[static_cast<std::size_t>(nr)][static_cast<std::size_t>(nc)] != 0) {
            r = (r + 1) % n;
        } else {
            r = nr;
            c = nc;
        }
    }
    return sq;
}

Square doubly_even(int n) {
    Square sq(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int v = r * n + c + 1;
            // Cells on the diagonals of each 4x4 block are complemented.
            const bool diag = (r % 4 == c % 4) || ((r % 4) + (c % 4) == 3);
            sq[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = diag ? n * n + 1 - v : v;
        }
    }
    return sq;
}

Square transpose(const Square& s) {
    const auto n = s.size();
    Square t(n, std::vector<int>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) t[c][r] = s[r][c];
    return t;
}

Square mirror(const Square& s) {
    Square t = s;
    for (auto& row : t) std::reverse(row.begin(), row.end());
    return t;
}

// Symmetries that keep a square magic: the 8 dihedral maps, value
// complement v -> n^2 + 1 - v, and swapping row pair (i, n-1-i) together
// with column pair (i, n-1-i).
Square randomize(Square s, Rng& rng) {
    const int n = static_cast<int>(s.size());
    const auto dihedral = rng.next_range(8);
    if (dihedral & 1U) s = transpose(s);
    if (dihedral & 2U) s = mirror(s);
    if (dihedral & 4U) std::reverse(s.begin(), s.end());
    if (rng.bernoulli(1, 2)) {
        for (auto& row : s)
            for (auto& v : row) v = n * n + 1 - v;
    }
    for (int i = 0; i < n / 2; ++i) {
        if (!rng.bernoulli(1, 2)) continue;
        const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(n - 1 - i);
        std::swap(s[a], s[b]);
        for (auto& row : s) std::swap(row[a], row[b]);
    }
    return s;
}

std::string render_prompt(const Square& clues) {
    const int n = static_cast<int>(clues.size());
    std::ostringstream out;
    out << "Magic square. Fill the " << n << "x" << n << " grid with the integers 1 to " << n * n
        << ", each used exactly once, so that every row, every column and both main diagonals sum to "
        << magic_constant(n) << ".\nCells are named R<row>C<column> with rows and columns numbered 1 to " << n
        << ". Blank cells are shown as '.'.\n\n";
    for (const auto& row : clues) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ' ';
            if (row[c] == 0) {
                out << (n * n >= 10 ? " ." : ".");
            } else {
                if (n * n >= 10 && row[c] < 10) out << ' ';
                out << row[c];
            }
        }
        out << '\n';
    }
    out << '\n' << kPromptFooter;
    return out.str();
}

PuzzleInstance make_instance(const Square& clues, const Square& solution, int level, std::uint64_t seed) {
    const int n = static_cast<int>(clues.size());
    PuzzleInstance inst;
    inst.game = GameId::magic_square;
    inst.level = level;
    inst.seed = seed;
    inst.prompt = render_prompt(clues);
    inst.clues = json{{"n", n}, {"grid", clues}};
    int given = 0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            inst.solution.emplace(grid_cell_name(r, c), std::to_string(solution[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]));
            given += clues[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0;
        }
    }
    inst.metadata = json{{"n", n}, {"clue_count", given}, {"magic_constant", magic_constant(n)}};
    return inst;
}

Square square_from_assignment(const Assignment& a, int n) {
    Square s(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = std::stoi(a.at(grid_cell_name(r, c)));
    return s;
}

}  // namespace

Params Params::for_level(int level) {
    static constexpr int sizes[] = {3, 4, 4, 5, 5};
    static constexpr int removal[] = {33, 40, 55, 55, 65};
    if (level < 1 || level > 5) throw ValidationError("magic_square level must be in [1,5]");
    return {level, sizes[level - 1], removal[level - 1]};
}

int Params::blanks() const { return (removal_pct * n * n + 50) / 100; }

std::int64_t magic_constant(int n) {
    const std::int64_t m = n;
    return m * (m * m + 1) / 2;
}

Square classical(int n) {
    if (n >= 1 && n % 2 == 1) return siamese(n);
    if (n >= 4 && n % 4 == 0) return doubly_even(n);
    throw ValidationError("magic_square: no classical construction for n = " + std::to_string(n));
}

bool is_magic(const Square& s) {
    const int n = static_cast<int>(s.size());
    std::set<int> seen;
    for (const auto& row : s) {
        if (static_cast<int>(row.size()) != n) return false;
        for (int v : row)
            if (v < 1 || v > n * n || !seen.insert(v).second) return false;
    }
    const auto m = magic_constant(n);
    std::int64_t d1 = 0, d2 = 0;
    for (int i = 0; i < n; ++i) {
        std::int64_t row = 0, col = 0;
        for (int j = 0; j < n; ++j) {
            row += s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            col += s[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        }
        if (row != m || col != m) return false;
        d1 += s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        d2 += s[static_cast<std::size_t>(i)][static_cast<std::size_t>(n - 1 - i)];
    }
    return d1 == m && d2 == m;
}

csp::Model to_model(const Square& clues) {
    const int n = static_cast<int>(clues.size());
    std::vector<std::string> all;
    for (int v = 1; v <= n * n; ++v) all.push_back(std::to_string(v));
    csp::Model model;
    csp::AllDifferent distinct;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int given = clues[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            model.add_variable(grid_cell_name(r, c), given ? std::vector<std::string>{std::to_string(given)} : all);
            distinct.vars.push_back(grid_cell_name(r, c));
        }
    }
    model.add(std::move(distinct));
    const auto m = magic_constant(n);
    auto line = [&](auto cell_at) {
        csp::LinearSumEq eq;
        eq.target = m;
        for (int i = 0; i < n; ++i) {
            eq.vars.push_back(cell_at(i));
            eq.coefficients.push_back(1);
        }
        model.add(std::move(eq));
    };
    for (int i = 0; i < n; ++i) {
        line([&](int j) { return grid_cell_name(i, j); });
        line([&](int j) { return grid_cell_name(j, i); });
    }
    line([&](int j) { return grid_cell_name(j, j); });
    line([&](int j) { return grid_cell_name(j, n - 1 - j); });
    return model;
}

PuzzleInstance generate(const Params& params, std::uint64_t seed) {
    const int n = params.n;
    if (n < 3) throw ValidationError("magic_square: n must be at least 3");
    if (n * n - params.blanks() < 2) throw ValidationError("magic_square: removal must leave at least 2 clues");
    Rng rng(seed);
    for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
        const Square solution = randomize(classical(n), rng);
        Square clues = solution;
        std::vector<int> order(static_cast<std::size_t>(n * n));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(std::span<int>(order));
        int removed = 0;
        for (int cell : order) {
            if (removed == params.blanks()) break;
            auto& slot = clues[static_cast<std::size_t>(cell / n)][static_cast<std::size_t>(cell % n)];
            const int keep = slot;
            slot = 0;
            if (csp::count_solutions(to_model(clues), 2) == 1) {
                ++removed;
            } else {
                slot = keep;
            }
        }
        if (removed == params.blanks()) return make_instance(clues, solution, params.level, seed);
    }
    throw GenerationExhausted("magic_square: could not blank " + std::to_string(params.blanks()) + " cells of a " +
                              std::to_string(n) + "x" + std::to_string(n) + " square under uniqueness");
}

PuzzleInstance from_clues(const Square& clues, int level, std::uint64_t seed) {
    for (const auto& row : clues)
        if (row.size() != clues.size()) throw ValidationError("magic_square: grid must be square");
    const auto model = to_model(clues);
    if (csp::count_solutions(model, 2) != 1) throw ValidationError("magic_square: clues do not have a unique completion");
    const auto solution = csp::solve_one(model);
    return make_instance(clues, square_from_assignment(*solution, static_cast<int>(clues.size())), level, seed);
}

Square clue_square(const PuzzleInstance& instance) { return instance.clues.at("grid").get<Square>(); }

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) {
    const auto clues = clue_square(instance);
    const int n = static_cast<int>(clues.size());
    Square s(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    std::set<int> seen;
    for (const auto& [name, value] : answer) {
        const auto cell = parse_grid_cell(name, n);
        if (!cell) return Verdict::fail("unknown cell " + name);
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(value, &used);
            if (used != value.size()) v = 0;
        } catch (const std::exception&) {
            v = 0;
        }
        if (v < 1 || v > n * n || std::to_string(v) != value)
            return Verdict::fail("cell " + name + " has out-of-range value '" + value + "'");
        if (!seen.insert(v).second) return Verdict::fail("value " + value + " used more than once");
        s[static_cast<std::size_t>(cell->first)][static_cast<std::size_t>(cell->second)] = v;
    }
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int got = s[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (got == 0) return Verdict::fail("missing cell " + grid_cell_name(r, c));
            const int given = clues[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (given != 0 && given != got)
                return Verdict::fail("cell " + grid_cell_name(r, c) + " contradicts the given " + std::to_string(given));
        }
    }
    if (!is_magic(s)) return Verdict::fail("rows, columns and diagonals do not share the sum " + std::to_string(magic_constant(n)));
    return Verdict::pass();
}

PuzzleInstance Family::generate(int level, std::uint64_t seed) const {
    return magic_square::generate(Params::for_level(level), seed);
}

Verdict Family::check_final(const PuzzleInstance& instance, const Assignment& answer) const {
    return magic_square::check_final(instance, answer);
}

std::vector<std::string> Family::value_domain(const PuzzleInstance& instance, std::string_view variable) const {
    const int n = instance.clues.at("n").get<int>();
    if (!parse_grid_cell(variable, n)) return {};
    std::vector<std::string> out;
    for (int v = 1; v <= n * n; ++v) out.push_back(std::to_string(v));
    return out;
}

}  // namespace pf::magic_square
