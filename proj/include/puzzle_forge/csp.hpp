#pragma once

// Finite-domain constraint solver: propagation to a fixpoint, then
// depth-first search with smallest-domain-first variable choice and
// lexicographic value order. Used as the uniqueness oracle for generated
// puzzles (count_solutions with limit 2).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "puzzle_forge/core.hpp"

namespace pf::csp {

struct AllDifferent {
    std::vector<std::string> vars;
};

// sum(coefficients[i] * vars[i]) == target. Values of the scope must parse as integers.
struct LinearSumEq {
    std::vector<std::string> vars;
    std::vector<std::int64_t> coefficients;
    std::int64_t target = 0;
};

// Extensional constraint: the scope must take one of the listed tuples.
struct Table {
    std::vector<std::string> vars;
    std::vector<std::vector<std::string>> tuples;
};

// Named binary relation from the registry below. Filtered by forward checking only.
struct Predicate {
    std::string name;
    std::vector<std::string> vars;
};

using Constraint = std::variant<AllDifferent, LinearSumEq, Table, Predicate>;

struct Variable {
    std::string id;
    std::vector<std::string> domain;
};

// Registered predicate names: "equal", "not_equal" (compare value spellings),
// "less_than", "adjacent" (numeric: a < b, |a - b| == 1).
const std::vector<std::string>& registered_predicates();

class Model {
public:
    // Throws std::invalid_argument on a duplicate id or an empty domain.
    void add_variable(std::string id, std::vector<std::string> domain);
    // Throws std::invalid_argument if the constraint is malformed or names an
    // undeclared variable.
    void add(Constraint constraint);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    bool has_variable(const std::string& id) const { return index_.count(id) != 0; }

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::map<std::string, std::size_t> index_;
};

struct Propagation {
    bool contradiction = false;
    // Reduced domain of every variable, in lexicographic value order.
    // Empty when `contradiction` is set.
    std::map<std::string, std::vector<std::string>> domains;
};

struct SearchOptions {
    // When set, every decision, failure and solution is written as one line.
    std::ostream* trace = nullptr;
};

// Fixes the entries of `partial` and propagates. Throws std::invalid_argument
// for a variable the model does not declare.
Propagation propagate(const Model& model, const Assignment& partial = {});

// min(limit, number of solutions). Throws std::invalid_argument if limit == 0.
std::uint64_t count_solutions(const Model& model, std::uint64_t limit, const SearchOptions& options = {});

// First solution in search order.
std::optional<Assignment> solve_one(const Model& model, const SearchOptions& options = {});

// Direct check of a total assignment against every constraint; independent
// of the propagators.
bool satisfies(const Model& model, const Assignment& assignment);

}  // namespace pf::csp
