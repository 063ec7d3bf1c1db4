#include "puzzle_forge/csp.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <ostream>
#include <set>
#include <stdexcept>

namespace pf::csp {

namespace {

using Mask = std::uint64_t;
constexpr std::size_t kMaxValues = 64;

enum class Relation { equal, not_equal, less_than, adjacent };

struct NamedRelation {
    const char* name;
    Relation relation;
    bool numeric;
};

constexpr NamedRelation kRelations[] = {
    {"equal", Relation::equal, false},
    {"not_equal", Relation::not_equal, false},
    {"less_than", Relation::less_than, true},
    {"adjacent", Relation::adjacent, true},
};

const NamedRelation* find_relation(const std::string& name) {
    for (const auto& r : kRelations) {
        if (name == r.name) return &r;
    }
    return nullptr;
}

std::optional<std::int64_t> parse_int(const std::string& text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return v;
}

bool holds(Relation relation, std::int64_t a, std::int64_t b) {
    switch (relation) {
        case Relation::equal: return a == b;
        case Relation::not_equal: return a != b;
        case Relation::less_than: return a < b;
        case Relation::adjacent: return a - b == 1 || b - a == 1;
    }
    return false;
}

bool single(Mask m) { return m != 0 && (m & (m - 1)) == 0; }

struct CAllDiff {
    std::vector<int> vars;
};
struct CLinear {
    std::vector<int> vars;
    std::vector<std::int64_t> coefs;
    std::int64_t target;
};
struct CTable {
    std::vector<int> vars;
    std::vector<std::vector<std::uint8_t>> tuples;
};
struct CPredicate {
    Relation relation;
    bool numeric;
    int a;
    int b;
};

using CConstraint = std::variant<CAllDiff, CLinear, CTable, CPredicate>;

// Model lowered onto integer value ids. Value ids are assigned in
// lexicographic order of the spellings, so ascending bit order is
// lexicographic value order.
class Compiled {
public:
    explicit Compiled(const Model& model) : model_(model) {
        std::set<std::string> spellings;
        for (const auto& v : model.variables())
            for (const auto& value : v.domain) spellings.insert(value);
        if (spellings.size() > kMaxValues)
            throw std::invalid_argument("csp: more than 64 distinct values in one model");
        values_.assign(spellings.begin(), spellings.end());
        for (const auto& s : values_) numeric_.push_back(parse_int(s));

        for (const auto& v : model.variables()) {
            Mask m = 0;
            for (const auto& value : v.domain) m |= Mask{1} << value_id(value);
            initial_.push_back(m);
        }
        watchers_.resize(model.variables().size());
        for (const auto& c : model.constraints()) lower(c);
    }

    std::size_t size() const { return initial_.size(); }
    const std::vector<Mask>& initial() const { return initial_; }
    const std::string& value(int id) const { return values_[static_cast<std::size_t>(id)]; }
    const std::string& var_name(std::size_t i) const { return model_.variables()[i].id; }

    int value_id(const std::string& spelling) const {
        auto it = std::lower_bound(values_.begin(), values_.end(), spelling);
        if (it == values_.end() || *it != spelling) return -1;
        return static_cast<int>(it - values_.begin());
    }

    int var_id(const std::string& name) const {
        const auto& vars = model_.variables();
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i].id == name) return static_cast<int>(i);
        return -1;
    }

    // Runs every constraint in `queue` (and whatever it wakes) to a fixpoint.
    // Returns false on a wiped-out domain.
    bool fixpoint(std::vector<Mask>& dom, std::vector<int> queue) const {
        std::vector<char> queued(constraints_.size(), 0);
        for (int c : queue) queued[static_cast<std::size_t>(c)] = 1;
        std::size_t head = 0;
        std::vector<Mask> before;
        while (head < queue.size()) {
            const int c = queue[head++];
            queued[static_cast<std::size_t>(c)] = 0;
            const auto& scope = scopes_[static_cast<std::size_t>(c)];
            before.clear();
            for (int v : scope) before.push_back(dom[static_cast<std::size_t>(v)]);
            if (!filter(constraints_[static_cast<std::size_t>(c)], dom)) return false;
            for (std::size_t k = 0; k < scope.size(); ++k) {
                const auto v = static_cast<std::size_t>(scope[k]);
                if (dom[v] == before[k]) continue;
                for (int w : watchers_[v]) {
                    if (w != c && !queued[static_cast<std::size_t>(w)]) {
                        queued[static_cast<std::size_t>(w)] = 1;
                        queue.push_back(w);
                    }
                }
            }
            if (head > 4096 && head * 2 > queue.size()) {
                queue.erase(queue.begin(), queue.begin() + static_cast<std::ptrdiff_t>(head));
                head = 0;
            }
        }
        return true;
    }

    std::vector<int> all_constraints() const {
        std::vector<int> q(constraints_.size());
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = static_cast<int>(i);
        return q;
    }

    const std::vector<int>& watchers(std::size_t var) const { return watchers_[var]; }

private:
    int require_var(const std::string& name) const {
        const int id = var_id(name);
        if (id < 0) throw std::invalid_argument("csp: undeclared variable " + name);
        return id;
    }

    std::int64_t number(int value) const {
        const auto& n = numeric_[static_cast<std::size_t>(value)];
        if (!n) throw std::invalid_argument("csp: non-numeric value " + value_name(value) + " in arithmetic constraint");
        return *n;
    }

    std::string value_name(int value) const { return values_[static_cast<std::size_t>(value)]; }

    void require_numeric(int var) const {
        for (Mask m = initial_[static_cast<std::size_t>(var)]; m; m &= m - 1) number(std::countr_zero(m));
    }

    void add(CConstraint c, std::vector<int> scope) {
        const int id = static_cast<int>(constraints_.size());
        for (int v : scope) watchers_[static_cast<std::size_t>(v)].push_back(id);
        constraints_.push_back(std::move(c));
        scopes_.push_back(std::move(scope));
    }

    void lower(const Constraint& c) {
        if (const auto* ad = std::get_if<AllDifferent>(&c)) {
            CAllDiff out;
            for (const auto& n : ad->vars) out.vars.push_back(require_var(n));
            auto scope = out.vars;
            add(std::move(out), std::move(scope));
        } else if (const auto* lin = std::get_if<LinearSumEq>(&c)) {
            CLinear out{{}, lin->coefficients, lin->target};
            for (const auto& n : lin->vars) {
                out.vars.push_back(require_var(n));
                require_numeric(out.vars.back());
            }
            auto scope = out.vars;
            add(std::move(out), std::move(scope));
        } else if (const auto* table = std::get_if<Table>(&c)) {
            CTable out;
            for (const auto& n : table->vars) out.vars.push_back(require_var(n));
            for (const auto& tuple : table->tuples) {
                std::vector<std::uint8_t> ids;
                bool representable = true;
                for (const auto& s : tuple) {
                    const int id = value_id(s);
                    if (id < 0) {
                        representable = false;  // value outside every domain; tuple can never match
                        break;
                    }
                    ids.push_back(static_cast<std::uint8_t>(id));
                }
                if (representable) out.tuples.push_back(std::move(ids));
            }
            auto scope = out.vars;
            add(std::move(out), std::move(scope));
        } else {
            const auto& p = std::get<Predicate>(c);
            const auto* rel = find_relation(p.name);
            CPredicate out{rel->relation, rel->numeric, require_var(p.vars[0]), require_var(p.vars[1])};
            if (out.numeric) {
                require_numeric(out.a);
                require_numeric(out.b);
            }
            add(out, {out.a, out.b});
        }
    }

    bool filter(const CConstraint& c, std::vector<Mask>& dom) const {
        return std::visit([&](const auto& k) { return filter_one(k, dom); }, c);
    }

    bool filter_one(const CAllDiff& c, std::vector<Mask>& dom) const {
        bool again = true;
        while (again) {
            again = false;
            Mask seen = 0;
            for (std::size_t i = 0; i < c.vars.size(); ++i) {
                const Mask m = dom[static_cast<std::size_t>(c.vars[i])];
                if (!single(m)) continue;
                if (seen & m) return false;
                seen |= m;
                for (std::size_t j = 0; j < c.vars.size(); ++j) {
                    if (j == i) continue;
                    Mask& other = dom[static_cast<std::size_t>(c.vars[j])];
                    if (other & m) {
                        other &= ~m;
                        if (other == 0) return false;
                        if (single(other)) again = true;
                    }
                }
            }
            Mask all = 0;
            for (int v : c.vars) all |= dom[static_cast<std::size_t>(v)];
            const auto distinct = static_cast<std::size_t>(std::popcount(all));
            if (distinct < c.vars.size()) return false;
            if (distinct == c.vars.size()) {
                // Permutation: a value supported by exactly one variable is forced there.
                for (Mask rest = all; rest; rest &= rest - 1) {
                    const Mask bit = rest & (~rest + 1);
                    int holder = -1;
                    int holders = 0;
                    for (int v : c.vars) {
                        if (dom[static_cast<std::size_t>(v)] & bit) {
                            holder = v;
                            ++holders;
                        }
                    }
                    if (holders == 1 && dom[static_cast<std::size_t>(holder)] != bit) {
                        dom[static_cast<std::size_t>(holder)] = bit;
                        again = true;
                    }
                }
            }
        }
        return true;
    }

    bool filter_one(const CLinear& c, std::vector<Mask>& dom) const {
        const std::size_t n = c.vars.size();
        std::vector<std::int64_t> lo(n), hi(n);
        bool again = true;
        while (again) {
            again = false;
            std::int64_t sum_lo = 0, sum_hi = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const Mask m = dom[static_cast<std::size_t>(c.vars[i])];
                std::int64_t mn = INT64_MAX, mx = INT64_MIN;
                for (Mask r = m; r; r &= r - 1) {
                    const std::int64_t t = c.coefs[i] * *numeric_[static_cast<std::size_t>(std::countr_zero(r))];
                    mn = std::min(mn, t);
                    mx = std::max(mx, t);
                }
                lo[i] = mn;
                hi[i] = mx;
                sum_lo += mn;
                sum_hi += mx;
            }
            if (sum_lo > c.target || sum_hi < c.target) return false;
            for (std::size_t i = 0; i < n; ++i) {
                const std::int64_t allowed_lo = c.target - (sum_hi - hi[i]);
                const std::int64_t allowed_hi = c.target - (sum_lo - lo[i]);
                if (lo[i] >= allowed_lo && hi[i] <= allowed_hi) continue;
                Mask& m = dom[static_cast<std::size_t>(c.vars[i])];
                Mask keep = 0;
                for (Mask r = m; r; r &= r - 1) {
                    const int b = std::countr_zero(r);
                    const std::int64_t t = c.coefs[i] * *numeric_[static_cast<std::size_t>(b)];
                    if (t >= allowed_lo && t <= allowed_hi) keep |= Mask{1} << b;
                }
                if (keep == 0) return false;
                if (keep != m) {
                    m = keep;
                    again = true;
                }
            }
        }
        return true;
    }

    bool filter_one(const CTable& c, std::vector<Mask>& dom) const {
        const std::size_t n = c.vars.size();
        std::vector<Mask> support(n, 0);
        for (const auto& tuple : c.tuples) {
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k)
                ok = (dom[static_cast<std::size_t>(c.vars[k])] >> tuple[k]) & 1U;
            if (!ok) continue;
            for (std::size_t k = 0; k < n; ++k) support[k] |= Mask{1} << tuple[k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            Mask& m = dom[static_cast<std::size_t>(c.vars[k])];
            m &= support[k];
            if (m == 0) return false;
        }
        return true;
    }

    bool filter_one(const CPredicate& c, std::vector<Mask>& dom) const {
        Mask& a = dom[static_cast<std::size_t>(c.a)];
        Mask& b = dom[static_cast<std::size_t>(c.b)];
        auto related = [&](int x, int y) {
            if (!c.numeric) return holds(c.relation, x, y) ;
            return holds(c.relation, *numeric_[static_cast<std::size_t>(x)], *numeric_[static_cast<std::size_t>(y)]);
        };
        if (single(a)) {
            const int x = std::countr_zero(a);
            Mask keep = 0;
            for (Mask r = b; r; r &= r - 1) {
                const int y = std::countr_zero(r);
                if (related(x, y)) keep |= Mask{1} << y;
            }
            b = keep;
            if (b == 0) return false;
        }
        if (single(b)) {
            const int y = std::countr_zero(b);
            Mask keep = 0;
            for (Mask r = a; r; r &= r - 1) {
                const int x = std::countr_zero(r);
                if (related(x, y)) keep |= Mask{1} << x;
            }
            a = keep;
            if (a == 0) return false;
        }
        return true;
    }

    const Model& model_;
    std::vector<std::string> values_;
    std::vector<std::optional<std::int64_t>> numeric_;
    std::vector<Mask> initial_;
    std::vector<CConstraint> constraints_;
    std::vector<std::vector<int>> scopes_;
    std::vector<std::vector<int>> watchers_;
};

class Search {
public:
    Search(const Compiled& compiled, std::uint64_t limit, const SearchOptions& options)
        : compiled_(compiled), limit_(limit), trace_(options.trace) {}

    void run() {
        auto dom = compiled_.initial();
        if (!compiled_.fixpoint(dom, compiled_.all_constraints())) {
            if (trace_) *trace_ << "root: fail\n";
            return;
        }
        descend(std::move(dom), 0);
    }

    std::uint64_t found() const { return found_; }
    const std::optional<std::vector<Mask>>& first() const { return first_; }

private:
    void descend(std::vector<Mask> dom, int depth) {
        // Smallest domain first; ties go to the earliest declared variable.
        std::size_t best = dom.size();
        int best_size = 65;
        for (std::size_t i = 0; i < dom.size(); ++i) {
            const int s = std::popcount(dom[i]);
            if (s > 1 && s < best_size) {
                best = i;
                best_size = s;
                if (s == 2) break;
            }
        }
        if (best == dom.size()) {
            ++found_;
            if (trace_) *trace_ << "depth " << depth << ": solution " << found_ << '\n';
            if (!first_) first_ = dom;
            return;
        }
        for (Mask r = dom[best]; r && found_ < limit_; r &= r - 1) {
            const Mask bit = r & (~r + 1);
            auto child = dom;
            child[best] = bit;
            if (trace_) {
                *trace_ << "depth " << depth << ": " << compiled_.var_name(best) << '='
                        << compiled_.value(std::countr_zero(bit)) << '\n';
            }
            if (!compiled_.fixpoint(child, compiled_.watchers(best))) {
                if (trace_) *trace_ << "depth " << depth << ": fail\n";
                continue;
            }
            descend(std::move(child), depth + 1);
        }
    }

    const Compiled& compiled_;
    std::uint64_t limit_;
    std::ostream* trace_;
    std::uint64_t found_ = 0;
    std::optional<std::vector<Mask>> first_;
};

Assignment to_assignment(const Compiled& compiled, const std::vector<Mask>& dom) {
    Assignment out;
    for (std::size_t i = 0; i < dom.size(); ++i)
        out.emplace(compiled.var_name(i), compiled.value(std::countr_zero(dom[i])));
    return out;
}

void check_scope(const Model& model, const std::vector<std::string>& vars) {
    if (vars.empty()) throw std::invalid_argument("csp: constraint arity must be at least 1");
    std::set<std::string> distinct;
    for (const auto& v : vars) {
        if (!model.has_variable(v)) throw std::invalid_argument("csp: undeclared variable " + v);
        if (!distinct.insert(v).second) throw std::invalid_argument("csp: variable repeated in scope: " + v);
    }
}

}  // namespace

const std::vector<std::string>& registered_predicates() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& r : kRelations) out.emplace_back(r.name);
        return out;
    }();
    return names;
}

void Model::add_variable(std::string id, std::vector<std::string> domain) {
    if (domain.empty()) throw std::invalid_argument("csp: empty domain for " + id);
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    if (!index_.emplace(id, variables_.size()).second) throw std::invalid_argument("csp: duplicate variable " + id);
    variables_.push_back({std::move(id), std::move(domain)});
}

void Model::add(Constraint constraint) {
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            check_scope(*this, c.vars);
            if constexpr (std::is_same_v<T, LinearSumEq>) {
                if (c.coefficients.size() != c.vars.size())
                    throw std::invalid_argument("csp: linear_sum_eq needs one coefficient per variable");
            } else if constexpr (std::is_same_v<T, Table>) {
                for (const auto& t : c.tuples)
                    if (t.size() != c.vars.size()) throw std::invalid_argument("csp: table tuple arity mismatch");
            } else if constexpr (std::is_same_v<T, Predicate>) {
                if (!find_relation(c.name)) throw std::invalid_argument("csp: unregistered predicate " + c.name);
                if (c.vars.size() != 2) throw std::invalid_argument("csp: predicate " + c.name + " is binary");
            }
        },
        constraint);
    constraints_.push_back(std::move(constraint));
}

Propagation propagate(const Model& model, const Assignment& partial) {
    const Compiled compiled(model);
    auto dom = compiled.initial();
    for (const auto& [name, value] : partial) {
        const int v = compiled.var_id(name);
        if (v < 0) throw std::invalid_argument("propagate: unknown variable " + name);
        const int id = compiled.value_id(value);
        const Mask bit = id < 0 ? 0 : (Mask{1} << id);
        dom[static_cast<std::size_t>(v)] &= bit;
        if (dom[static_cast<std::size_t>(v)] == 0) return {true, {}};
    }
    if (!compiled.fixpoint(dom, compiled.all_constraints())) return {true, {}};
    Propagation out;
    for (std::size_t i = 0; i < dom.size(); ++i) {
        auto& values = out.domains[compiled.var_name(i)];
        for (Mask r = dom[i]; r; r &= r - 1) values.push_back(compiled.value(std::countr_zero(r)));
    }
    return out;
}

std::uint64_t count_solutions(const Model& model, std::uint64_t limit, const SearchOptions& options) {
    if (limit == 0) throw std::invalid_argument("count_solutions: limit must be positive");
    const Compiled compiled(model);
    Search search(compiled, limit, options);
    search.run();
    return std::min(search.found(), limit);
}

std::optional<Assignment> solve_one(const Model& model, const SearchOptions& options) {
    const Compiled compiled(model);
    Search search(compiled, 1, options);
    search.run();
    if (!search.first()) return std::nullopt;
    return to_assignment(compiled, *search.first());
}

bool satisfies(const Model& model, const Assignment& assignment) {
    auto value_of = [&](const std::string& var) -> const std::string* {
        auto it = assignment.find(var);
        return it == assignment.end() ? nullptr : &it->second;
    };
    for (const auto& v : model.variables()) {
        const auto* value = value_of(v.id);
        if (!value || !std::binary_search(v.domain.begin(), v.domain.end(), *value)) return false;
    }
    for (const auto& c : model.constraints()) {
        if (const auto* ad = std::get_if<AllDifferent>(&c)) {
            std::set<std::string> seen;
            for (const auto& v : ad->vars)
                if (!seen.insert(*value_of(v)).second) return false;
        } else if (const auto* lin = std::get_if<LinearSumEq>(&c)) {
            std::int64_t sum = 0;
            for (std::size_t i = 0; i < lin->vars.size(); ++i) {
                const auto n = parse_int(*value_of(lin->vars[i]));
                if (!n) return false;
                sum += lin->coefficients[i] * *n;
            }
            if (sum != lin->target) return false;
        } else if (const auto* table = std::get_if<Table>(&c)) {
            std::vector<std::string> row;
            for (const auto& v : table->vars) row.push_back(*value_of(v));
            if (std::find(table->tuples.begin(), table->tuples.end(), row) == table->tuples.end()) return false;
        } else {
            const auto& p = std::get<Predicate>(c);
            const auto* rel = find_relation(p.name);
            const auto& a = *value_of(p.vars[0]);
            const auto& b = *value_of(p.vars[1]);
            if (rel->numeric) {
                const auto x = parse_int(a), y = parse_int(b);
                if (!x || !y || !holds(rel->relation, *x, *y)) return false;
            } else {
                const bool same = a == b;
                if ((rel->relation == Relation::equal) != same) return false;
            }
        }
    }
    return true;
}

}  // namespace pf::csp
