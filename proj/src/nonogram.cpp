#include "puzzle_forge/nonogram.hpp"

#include <algorithm>
#include <sstream>

#include "puzzle_forge/rng.hpp"

namespace pf::nonogram {

namespace {

constexpr signed char kUnknown = -1;

using Line = std::vector<signed char>;

std::vector<int> blocks_of(const Clue& clue) {
    if (clue.size() == 1 && clue[0] == 0) return {};
    return clue;
}

// Settles every cell of a line that takes the same value in all placements
// consistent with the known cells. Returns false if no placement fits.
bool solve_line(const std::vector<int>& blocks, Line& line) {
    const int n = static_cast<int>(line.size());
    const int k = static_cast<int>(blocks.size());
    auto can0 = [&](int i) { return line[i] != 1; };
    // blanks[i]: known-blank cells in [0, i).
    std::vector<int> blanks(n + 1, 0);
    for (int i = 0; i < n; ++i) blanks[i + 1] = blanks[i] + (line[i] == 0);
    auto can1 = [&](int s, int e) { return blanks[e] == blanks[s]; };

    // fwd[j][i]: cells [0, i) hold exactly blocks 0..j-1.
    std::vector<std::vector<char>> fwd(k + 1, std::vector<char>(n + 1, 0));
    fwd[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = 0; j <= k; ++j) {
            bool ok = can0(i - 1) && fwd[j][i - 1];
            if (!ok && j > 0) {
                const int s = i - blocks[j - 1];
                if (s >= 0 && can1(s, i)) ok = s == 0 ? j == 1 : (can0(s - 1) && fwd[j - 1][s - 1]);
            }
            fwd[j][i] = ok;
        }
    }
    if (!fwd[k][n]) return false;

    // bwd[j][i]: cells [i, n) hold exactly blocks j..k-1.
    std::vector<std::vector<char>> bwd(k + 1, std::vector<char>(n + 1, 0));
    bwd[k][n] = 1;
    for (int i = n - 1; i >= 0; --i) {
        for (int j = k; j >= 0; --j) {
            bool ok = can0(i) && bwd[j][i + 1];
            if (!ok && j < k) {
                const int e = i + blocks[j];
                if (e <= n && can1(i, e)) ok = e == n ? j + 1 == k : (can0(e) && bwd[j + 1][e + 1]);
            }
            bwd[j][i] = ok;
        }
    }

    std::vector<char> may0(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!can0(i)) continue;
        for (int j = 0; j <= k && !may0[i]; ++j) may0[i] = fwd[j][i] && bwd[j][i + 1];
    }
    // cover: difference array of cells covered by some feasible block placement.
    std::vector<int> cover(n + 1, 0);
    for (int j = 0; j < k; ++j) {
        for (int s = 0; s + blocks[j] <= n; ++s) {
            const int e = s + blocks[j];
            if (!can1(s, e)) continue;
            const bool before = s == 0 ? j == 0 : (can0(s - 1) && fwd[j][s - 1]);
            const bool after = e == n ? j + 1 == k : (can0(e) && bwd[j + 1][e + 1]);
            if (before && after) {
                ++cover[s];
                --cover[e];
            }
        }
    }
    int running = 0;
    for (int i = 0; i < n; ++i) {
        running += cover[i];
        const bool may1 = running > 0;
        if (!may1 && !may0[i]) return false;
        if (may1 != static_cast<bool>(may0[i])) line[i] = may1 ? 1 : 0;
    }
    return true;
}

class LineSolver {
public:
    LineSolver(const std::vector<Clue>& rows, const std::vector<Clue>& cols) : n_(static_cast<int>(rows.size())) {
        for (const auto& c : rows) row_blocks_.push_back(blocks_of(c));
        for (const auto& c : cols) col_blocks_.push_back(blocks_of(c));
    }

    void count(std::vector<signed char> grid, std::uint64_t limit, std::uint64_t& found) const {
        if (!settle(grid)) return;
        const auto it = std::find(grid.begin(), grid.end(), kUnknown);
        if (it == grid.end()) {
            ++found;
            return;
        }
        const auto cell = static_cast<std::size_t>(it - grid.begin());
        for (signed char v : {static_cast<signed char>(1), static_cast<signed char>(0)}) {
            if (found >= limit) return;
            auto child = grid;
            child[cell] = v;
            count(std::move(child), limit, found);
        }
    }

    int n() const { return n_; }

private:
    // Line propagation to a fixpoint over dirty rows and columns.
    bool settle(std::vector<signed char>& grid) const {
        const auto n = static_cast<std::size_t>(n_);
        std::vector<char> dirty(2 * n, 1);
        bool any = true;
        Line line(n);
        while (any) {
            any = false;
            for (std::size_t li = 0; li < 2 * n; ++li) {
                if (!dirty[li]) continue;
                dirty[li] = 0;
                const bool is_row = li < n;
                const std::size_t idx = is_row ? li : li - n;
                for (std::size_t t = 0; t < n; ++t) line[t] = grid[is_row ? idx * n + t : t * n + idx];
                const Line before = line;
                if (!solve_line(is_row ? row_blocks_[idx] : col_blocks_[idx], line)) return false;
                for (std::size_t t = 0; t < n; ++t) {
                    if (line[t] == before[t]) continue;
                    grid[is_row ? idx * n + t : t * n + idx] = line[t];
                    dirty[is_row ? n + t : t] = 1;
                    any = true;
                }
            }
        }
        return true;
    }

    int n_;
    std::vector<std::vector<int>> row_blocks_, col_blocks_;
};

void placements(const std::vector<int>& blocks, std::size_t j, int start, std::vector<int>& line,
                std::vector<std::vector<std::string>>& out) {
    const int n = static_cast<int>(line.size());
    if (j == blocks.size()) {
        std::vector<std::string> tuple;
        for (int v : line) tuple.push_back(v ? "1" : "0");
        out.push_back(std::move(tuple));
        return;
    }
    int rest = 0;
    for (std::size_t t = j + 1; t < blocks.size(); ++t) rest += blocks[t] + 1;
    for (int s = start; s + blocks[j] + rest <= n; ++s) {
        for (int t = s; t < s + blocks[j]; ++t) line[static_cast<std::size_t>(t)] = 1;
        placements(blocks, j + 1, s + blocks[j] + 1, line, out);
        for (int t = s; t < s + blocks[j]; ++t) line[static_cast<std::size_t>(t)] = 0;
    }
}

json clues_json(const std::vector<Clue>& clues) {
    json out = json::array();
    for (const auto& c : clues) out.push_back(json(c));
    return out;
}

std::vector<Clue> clues_from_json(const json& value) {
    std::vector<Clue> out;
    for (const auto& c : value) out.push_back(c.get<Clue>());
    return out;
}

std::string join(const Clue& clue) {
    std::string s;
    for (std::size_t i = 0; i < clue.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(clue[i]);
    }
    return s;
}

std::string render_prompt(int n, const std::vector<Clue>& rows, const std::vector<Clue>& cols) {
    std::ostringstream out;
    out << "Nonogram. Shade cells of a " << n << "x" << n
        << " grid so that each row and column shows the given runs of consecutive shaded cells, "
           "in order, separated by at least one blank cell. A clue of 0 means the line is entirely blank.\n"
           "Cells are named R<row>C<column> with rows and columns numbered 1 to "
        << n << "; the value is 1 for shaded and 0 for blank.\n\nRow clues (top to bottom):\n";
    for (std::size_t i = 0; i < rows.size(); ++i) out << "Row " << i + 1 << ": " << join(rows[i]) << '\n';
    out << "\nColumn clues (left to right):\n";
    for (std::size_t i = 0; i < cols.size(); ++i) out << "Column " << i + 1 << ": " << join(cols[i]) << '\n';
    out << '\n' << kPromptFooter;
    return out.str();
}

std::pair<std::vector<Clue>, std::vector<Clue>> clues_of(const Bitmap& image) {
    const std::size_t n = image.size();
    std::vector<Clue> rows, cols;
    for (const auto& row : image) rows.push_back(run_lengths(row));
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<int> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = image[r][c];
        cols.push_back(run_lengths(col));
    }
    return {std::move(rows), std::move(cols)};
}

PuzzleInstance make_instance(const Bitmap& image, int level, std::uint64_t seed, int density_pct) {
    const int n = static_cast<int>(image.size());
    auto [rows, cols] = clues_of(image);
    PuzzleInstance inst;
    inst.game = GameId::nonogram;
    inst.level = level;
    inst.seed = seed;
    inst.prompt = render_prompt(n, rows, cols);
    inst.clues = json{{"n", n}, {"rows", clues_json(rows)}, {"cols", clues_json(cols)}};
    int filled = 0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            inst.solution.emplace(cell_name(r, c), image[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] ? "1" : "0");
            filled += image[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    inst.metadata = json{{"n", n}, {"filled", filled}};
    if (density_pct >= 0) inst.metadata["density_pct"] = density_pct;
    return inst;
}

}  // namespace

Params Params::for_level(int level) {
    static constexpr int sizes[] = {5, 7, 10, 12, 15};
    if (level < 1 || level > 5) throw ValidationError("nonogram level must be in [1,5]");
    Params p;
    p.level = level;
    p.n = sizes[level - 1];
    return p;
}

std::string cell_name(int row, int col) { return grid_cell_name(row, col); }

Clue run_lengths(std::span<const int> line) {
    Clue out;
    int run = 0;
    for (int v : line) {
        if (v) {
            ++run;
        } else if (run > 0) {
            out.push_back(run);
            run = 0;
        }
    }
    if (run > 0) out.push_back(run);
    if (out.empty()) out.push_back(0);
    return out;
}

std::uint64_t count_solutions(const std::vector<Clue>& rows, const std::vector<Clue>& cols, std::uint64_t limit) {
    if (rows.size() != cols.size()) return 0;
    const LineSolver solver(rows, cols);
    std::uint64_t found = 0;
    solver.count(std::vector<signed char>(rows.size() * rows.size(), kUnknown), limit, found);
    return std::min(found, limit);
}

PuzzleInstance generate(const Params& params, std::uint64_t seed) {
    if (params.n < 2) throw ValidationError("nonogram: n must be at least 2");
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(params.n);
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        const auto density = static_cast<int>(rng.next_between(params.density_min_pct, params.density_max_pct));
        Bitmap image(n, std::vector<int>(n, 0));
        for (auto& row : image)
            for (auto& cell : row) cell = rng.bernoulli(static_cast<std::uint64_t>(density), 100) ? 1 : 0;
        auto [rows, cols] = clues_of(image);
        if (count_solutions(rows, cols, 2) == 1) return make_instance(image, params.level, seed, density);
    }
    throw GenerationExhausted("nonogram: no uniquely solvable image after " + std::to_string(kMaxResamples) + " resamples");
}

PuzzleInstance from_bitmap(const Bitmap& image, int level, std::uint64_t seed) {
    for (const auto& row : image)
        if (row.size() != image.size()) throw ValidationError("nonogram: image must be square");
    auto [rows, cols] = clues_of(image);
    if (count_solutions(rows, cols, 2) != 1) throw ValidationError("nonogram: image clues are ambiguous");
    return make_instance(image, level, seed, -1);
}

std::vector<Clue> row_clues(const PuzzleInstance& instance) { return clues_from_json(instance.clues.at("rows")); }
std::vector<Clue> col_clues(const PuzzleInstance& instance) { return clues_from_json(instance.clues.at("cols")); }

Verdict check_final(const PuzzleInstance& instance, const Assignment& answer) {
    const int n = instance.clues.at("n").get<int>();
    for (const auto& [name, value] : answer) {
        if (!parse_grid_cell(name, n)) return Verdict::fail("unknown cell " + name);
        if (value != "0" && value != "1") return Verdict::fail("cell " + name + " has non-binary value '" + value + "'");
    }
    Bitmap grid(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            auto it = answer.find(cell_name(r, c));
            if (it == answer.end()) return Verdict::fail("missing cell " + cell_name(r, c));
            grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = it->second == "1";
        }
    }
    const auto [rows, cols] = clues_of(grid);
    const auto want_rows = row_clues(instance);
    const auto want_cols = col_clues(instance);
    for (int i = 0; i < n; ++i) {
        if (rows[static_cast<std::size_t>(i)] != want_rows[static_cast<std::size_t>(i)])
            return Verdict::fail("row " + std::to_string(i + 1) + " reads [" + join(rows[static_cast<std::size_t>(i)]) + "], clue is [" + join(want_rows[static_cast<std::size_t>(i)]) + "]");
        if (cols[static_cast<std::size_t>(i)] != want_cols[static_cast<std::size_t>(i)])
            return Verdict::fail("column " + std::to_string(i + 1) + " reads [" + join(cols[static_cast<std::size_t>(i)]) + "], clue is [" + join(want_cols[static_cast<std::size_t>(i)]) + "]");
    }
    return Verdict::pass();
}

csp::Model to_model(const std::vector<Clue>& rows, const std::vector<Clue>& cols) {
    const int n = static_cast<int>(rows.size());
    csp::Model model;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) model.add_variable(cell_name(r, c), {"0", "1"});
    for (int i = 0; i < n; ++i) {
        for (const bool is_row : {true, false}) {
            csp::Table table;
            for (int t = 0; t < n; ++t) table.vars.push_back(is_row ? cell_name(i, t) : cell_name(t, i));
            std::vector<int> line(static_cast<std::size_t>(n), 0);
            placements(blocks_of(is_row ? rows[static_cast<std::size_t>(i)] : cols[static_cast<std::size_t>(i)]), 0, 0, line, table.tuples);
            model.add(std::move(table));
        }
    }
    return model;
}

PuzzleInstance Family::generate(int level, std::uint64_t seed) const {
    return nonogram::generate(Params::for_level(level), seed);
}

Verdict Family::check_final(const PuzzleInstance& instance, const Assignment& answer) const {
    return nonogram::check_final(instance, answer);
}

std::vector<std::string> Family::value_domain(const PuzzleInstance& instance, std::string_view variable) const {
    if (!parse_grid_cell(variable, instance.clues.at("n").get<int>())) return {};
    return {"0", "1"};
}

}  // namespace pf::nonogram
