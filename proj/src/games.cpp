#include "puzzle_forge/games.hpp"

namespace pf {

const PuzzleFamily& family(GameId game) {
    static const sudoku::Family sudoku_family;
    static const nonogram::Family nonogram_family;
    static const cryptarithm::Family cryptarithm_family;
    static const magic_square::Family magic_square_family;
    static const zebra::Family zebra_family;
    static const graph_connectivity::Family graph_family;
    static const knights_knaves::Family knights_knaves_family;
    switch (game) {
        case GameId::sudoku: return sudoku_family;
        case GameId::nonogram: return nonogram_family;
        case GameId::cryptarithm: return cryptarithm_family;
        case GameId::magic_square: return magic_square_family;
        case GameId::zebra: return zebra_family;
        case GameId::graph_connectivity: return graph_family;
        case GameId::knights_knaves: return knights_knaves_family;
    }
    throw ValidationError("unknown game id");
}

PuzzleInstance generate(GameId game, int level, std::uint64_t seed) {
    const auto& fam = family(game);
    if (level < 1 || level > fam.levels())
        throw ValidationError("level " + std::to_string(level) + " outside [1," + std::to_string(fam.levels()) + "] for " +
                              std::string(to_string(game)));
    return fam.generate(level, seed);
}

std::optional<csp::Model> generic_model(const PuzzleInstance& instance) {
    switch (instance.game) {
        case GameId::sudoku: return sudoku::to_model(sudoku::clue_grid(instance));
        case GameId::nonogram: return nonogram::to_model(nonogram::row_clues(instance), nonogram::col_clues(instance));
        case GameId::cryptarithm: return cryptarithm::to_model(cryptarithm::puzzle_of(instance));
        case GameId::magic_square: return magic_square::to_model(magic_square::clue_square(instance));
        case GameId::zebra: return zebra::to_model(zebra::layout_of(instance), zebra::clues_of(instance));
        case GameId::graph_connectivity: return graph_connectivity::to_model(instance);
        case GameId::knights_knaves:
            return knights_knaves::to_model(knights_knaves::characters_of(instance), knights_knaves::statements_of(instance));
    }
    return std::nullopt;
}

}  // namespace pf
