#include "puzzle_forge/sudoku.hpp"

#include <bit>
#include <numeric>
#include <sstream>

#include "puzzle_forge/rng.hpp"

namespace pf::sudoku {

namespace {

constexpr std::uint16_t kAllDigits = 0x3FE;  // bits 1..9

int box_of(int r, int c) { return (r / 3) * 3 + c / 3; }

// Row/column/box occupancy bitmasks over a 9x9 grid.
class Board {
public:
    explicit Board(const Grid& grid) : grid_(grid) {
        for (int r = 0; r < 9; ++r)
            for (int c = 0; c < 9; ++c)
                if (grid_[r][c] != 0 && !place(r, c, grid_[r][c])) valid_ = false;
    }

    bool valid() const { return valid_; }

    std::uint16_t candidates(int r, int c) const {
        return kAllDigits & ~(rows_[r] | cols_[c] | boxes_[box_of(r, c)]);
    }

    bool place(int r, int c, int d) {
        const auto bit = static_cast<std::uint16_t>(1U << d);
        if ((rows_[r] | cols_[c] | boxes_[box_of(r, c)]) & bit) return false;
        rows_[r] |= bit;
        cols_[c] |= bit;
        boxes_[box_of(r, c)] |= bit;
        grid_[r][c] = d;
        return true;
    }

    void clear(int r, int c) {
        const auto bit = static_cast<std::uint16_t>(~(1U << grid_[r][c]));
        rows_[r] &= bit;
        cols_[c] &= bit;
        boxes_[box_of(r, c)] &= bit;
        grid_[r][c] = 0;
    }

    // Blank cell with the fewest candidates; false if the grid is full.
    bool most_constrained(int& row, int& col, std::uint16_t& cands) const {
        int best = 10;
        for (int r = 0; r < 9; ++r) {
            for (int c = 0; c < 9; ++c) {
                if (grid_[r][c] != 0) continue;
                const auto m = candidates(r, c);
                const int n = std::popcount(m);
                if (n < best) {
                    best = n;
                    row = r;
                    col = c;
                    cands = m;
                    if (n <= 1) return true;
                }
            }
        }
        return best < 10;
    }

    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    std::array<std::uint16_t, 9> rows_{}, cols_{}, boxes_{};
    bool valid_ = true;
};

void count_rec(Board& board, std::uint64_t limit, std::uint64_t& found) {
    int r = 0, c = 0;
    std::uint16_t cands = 0;
    if (!board.most_constrained(r, c, cands)) {
        ++found;
        return;
    }
    for (std::uint16_t m = cands; m && found < limit; m &= static_cast<std::uint16_t>(m - 1)) {
        board.place(r, c, std::countr_zero(m));
        count_rec(board, limit, found);
        board.clear(r, c);
    }
}

bool solve_first(Board& board, Grid& out) {
    int r = 0, c = 0;
    std::uint16_t cands = 0;
    if (!board.most_constrained(r, c, cands)) {
        out = board.grid();
        return true;
    }
    for (std::uint16_t m = cands; m; m &= static_cast<std::uint16_t>(m - 1)) {
        board.place(r, c, std::countr_zero(m));
        if (solve_first(board, out)) return true;
        board.clear(r, c);
    }
    return false;
}

bool fill_random(Board& board, Rng& rng, int cell) {
    if (cell == 81) return true;
    const int r = cell / 9, c = cell % 9;
    std::array<int, 9> digits{};
    std::iota(digits.begin(), digits.end(), 1);
    rng.shuffle(std::span<int>(digits));
    const auto cands = board.candidates(r, c);
    for (int d : digits) {
        if (!(cands & (1U << d))) continue;
        board.place(r, c, d);
        if (fill_random(board, rng, cell + 1)) return true;
        board.clear(r, c);
    }
    return false;
}

int count_clues(const Grid& g) {
    int n = 0;
    for (const auto& row : g)
        for (int v : row) n += v != 0;
    return n;
}

json grid_json(const Grid& g) {
    json rows = json::array();
    for (const auto& row : g) rows.push_back(json(row));
    return rows;
}

std::string render_prompt(const Grid& clues) {
    std::ostringstream out;
    out << "Sudoku. Fill the 9x9 grid so that every row, every column and every 3x3 box "
           "contains each digit from 1 to 9 exactly once.\n"
           "Cells are named R<row>C<column> with rows and columns numbered 1 to 9; "
           "values are the digits 1 to 9. Blank cells are shown as '.'.\n\n";
    for (int r = 0; r < 9; ++r) {
        if (r > 0 && r % 3 == 0) out << "------+-------+------\n";
        for (int c = 0; c < 9; ++c) {
            if (c > 0) out << (c % 3 == 0 ? " | " : " ");
            out << (clues[r][c] == 0 ? '.' : static_cast<char>('0' + clues[r][c]));
        }
        out << '\n';
    }
    out << '\n' << kPromptFooter;
    return out.str();
}

PuzzleInstance make_instance(const Grid& clues, const Grid& solution, int level, std::uint64_t seed) {
    PuzzleInstance inst;
    inst.game = GameId::sudoku;
    inst.level = level;
    inst.seed = seed;
    inst.prompt = render_prompt(clues);
    inst.clues = json{{"grid", grid_json(clues)}};
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) inst.solution.emplace(cell_name(r, c), std::to_string(solution[r][c]));
    inst.metadata = json{{"clue_count", count_clues(clues)}};
    return inst;
}

Grid grid_from_json(const json& rows) {
    Grid g{};
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) g[r][c] = rows.at(r).at(c).get<int>();
    return g;
}

}  // namespace

Params Params::for_level(int level) {
    switch (level) {
        case 1: return {1, 40, 45};
        case 2: return {2, 34, 39};
        case 3: return {3, 28, 33};
        case 4: return {4, 25, 27};
        case 5: return {5, 22, 24};
        default: throw ValidationError("sudoku level must be in [1,5]");
    }
}

std::string cell_name(int row, int col) { return grid_cell_name(row, col); }

std::uint64_t count_completions(const Grid& clues, std::uint64_t limit) {
    Board board(clues);
    if (!board.valid()) return 0;
    std::uint64_t found = 0;
    count_rec(board, limit, found);
    return found;
}

PuzzleInstance generate(const Params& params, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
        Board board(Grid{});
        fill_random(board, rng, 0);
        const Grid solution = board.grid();

        Grid clues = solution;
        const int target = static_cast<int>(rng.next_between(params.min_clues, params.max_clues));
        std::array<int, 81> order{};
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(std::span<int>(order));
        int remaining = 81;
        for (int cell : order) {
            if (remaining == target) break;
            const int r = cell / 9, c = cell % 9;
            const int keep = clues[r][c];
            clues[r][c] = 0;
            if (count_completions(clues, 2) == 1) {
                --remaining;
            } else {
                clues[r][c] = keep;
            }
        }
        if (remaining <= params.max_clues) return make_instance(clues, solution, params.level, seed);
    }
    throw GenerationExhausted("sudoku: clue band [" + std::to_string(params.min_clues) + "," +
                              std::to_string(params.max_clues) + "] not reached after " +
                              std::to_string(kMaxRestarts) + " restarts");
}

PuzzleInstance from_clues(const Grid& clues, int level, std::uint64_t seed) {
    Board board(clues);
    if (!board.valid() || count_completions(clues, 2) != 1) throw ValidationError("sudoku: clues do not have a unique completion");
    Grid solution{};
    solve_first(board, solution);
    return make_instance(clues, solution, level, seed);
}

Grid clue_grid(const PuzzleInstance& instance) { return grid_from_json(instance.clues.at("grid")); }

Grid solution_grid(const PuzzleInstance& instance) {
    Grid g{};
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) g[r][c] = std::stoi(instance.solution.at(cell_name(r, c)));
    return g;
}

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) {
    const Grid clues = clue_grid(instance);
    Grid g{};
    for (const auto& [name, value] : answer) {
        if (!parse_grid_cell(name, 9)) return Verdict::fail("unknown cell " + name);
        if (value.size() != 1 || value[0] < '1' || value[0] > '9')
            return Verdict::fail("cell " + name + " has out-of-range value '" + value + "'");
    }
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            auto it = answer.find(cell_name(r, c));
            if (it == answer.end()) return Verdict::fail("missing cell " + cell_name(r, c));
            g[r][c] = it->second[0] - '0';
            if (clues[r][c] != 0 && clues[r][c] != g[r][c])
                return Verdict::fail("cell " + cell_name(r, c) + " contradicts the given " + std::to_string(clues[r][c]));
        }
    }
    for (int i = 0; i < 9; ++i) {
        std::uint16_t row = 0, col = 0, box = 0;
        for (int j = 0; j < 9; ++j) {
            row |= static_cast<std::uint16_t>(1U << g[i][j]);
            col |= static_cast<std::uint16_t>(1U << g[j][i]);
            box |= static_cast<std::uint16_t>(1U << g[(i / 3) * 3 + j / 3][(i % 3) * 3 + j % 3]);
        }
        if (row != kAllDigits) return Verdict::fail("row " + std::to_string(i + 1) + " repeats a digit");
        if (col != kAllDigits) return Verdict::fail("column " + std::to_string(i + 1) + " repeats a digit");
        if (box != kAllDigits) return Verdict::fail("box " + std::to_string(i + 1) + " repeats a digit");
    }
    return Verdict::pass();
}

bool matches_solution(const PuzzleInstance& instance, const Assignment& answer) { return answer == instance.solution; }

csp::Model to_model(const Grid& clues) {
    csp::Model model;
    const std::vector<std::string> digits = {"1", "2", "3", "4", "5", "6", "7", "8", "9"};
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
            if (clues[r][c] == 0) {
                model.add_variable(cell_name(r, c), digits);
            } else {
                model.add_variable(cell_name(r, c), {std::to_string(clues[r][c])});
            }
        }
    }
    for (int i = 0; i < 9; ++i) {
        csp::AllDifferent row, col, box;
        for (int j = 0; j < 9; ++j) {
            row.vars.push_back(cell_name(i, j));
            col.vars.push_back(cell_name(j, i));
            box.vars.push_back(cell_name((i / 3) * 3 + j / 3, (i % 3) * 3 + j % 3));
        }
        model.add(std::move(row));
        model.add(std::move(col));
        model.add(std::move(box));
    }
    return model;
}

PuzzleInstance Family::generate(int level, std::uint64_t seed) const { return sudoku::generate(Params::for_level(level), seed); }

Verdict Family::check_final(const PuzzleInstance& instance, const Assignment& answer) const {
    return sudoku::check_final(instance, answer);
}

std::vector<std::string> Family::value_domain(const PuzzleInstance&, std::string_view variable) const {
    if (!parse_grid_cell(variable, 9)) return {};
    return {"1", "2", "3", "4", "5", "6", "7", "8", "9"};
}

}  // namespace pf::sudoku
