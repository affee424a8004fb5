#pragma once

#include "problo/error.hpp"
#include "problo/multiset.hpp"
#include "problo/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

// probLO: Boolean probabilistic methods grouped into tables, executed on weighted states.
namespace problo {

enum class Polarity : bool { False = false, True = true };

inline Polarity flip(Polarity p) { return p == Polarity::True ? Polarity::False : Polarity::True; }
inline char to_char(Polarity p) { return p == Polarity::True ? 't' : 'f'; }

struct BoolAtom {
    std::string var;
    Polarity polarity = Polarity::True;

    friend bool operator<(const BoolAtom& a, const BoolAtom& b) {
        if (a.var != b.var) {
            return a.var < b.var;
        }
        return a.polarity < b.polarity;
    }
    friend bool operator==(const BoolAtom& a, const BoolAtom& b) {
        return a.var == b.var && a.polarity == b.polarity;
    }
    friend bool operator!=(const BoolAtom& a, const BoolAtom& b) { return !(a == b); }
};

inline std::string to_string(const BoolAtom& a) { return a.var + "=" + to_char(a.polarity); }

using AtomBag = Multiset<BoolAtom>;

struct SimpleMethod {
    std::string id;
    BoolAtom head;
    std::size_t head_multiplicity = 1;
    AtomBag body;
    Probability prob;

    AtomBag head_atoms() const {
        AtomBag h;
        h.add(head, head_multiplicity);
        return h;
    }

    friend bool operator==(const SimpleMethod& a, const SimpleMethod& b) {
        return a.id == b.id && a.head == b.head && a.head_multiplicity == b.head_multiplicity && a.body == b.body
               && a.prob == b.prob;
    }
};

// Stable label derived from the method's shape, e.g. `R=t:-C=f` or `C=t`.
inline std::string method_label(const BoolAtom& head, const AtomBag& body) {
    std::string id = to_string(head);
    if (!body.empty()) {
        id += ":-";
        bool first = true;
        for (const auto& atom : body.elements()) {
            if (!first) {
                id += ",";
            }
            id += to_string(atom);
            first = false;
        }
    }
    return id;
}

struct Conditional {
    SimpleMethod when_true;
    SimpleMethod when_false;
};

// All simple methods for one head variable. Conditionals are recovered by grouping
// methods that share a body (see conditionals()).
struct Table {
    std::string var;
    std::vector<SimpleMethod> methods;

    // Variables read by method selection: the body variables of every method.
    std::set<std::string> body_vars() const {
        std::set<std::string> vars;
        for (const auto& m : methods) {
            for (const auto& [atom, copies] : m.body) {
                vars.insert(atom.var);
            }
        }
        return vars;
    }

    std::size_t head_multiplicity() const { return methods.empty() ? 0 : methods.front().head_multiplicity; }

    friend bool operator==(const Table& a, const Table& b) { return a.var == b.var && a.methods == b.methods; }
};

struct Program {
    std::vector<Table> tables;

    const Table* find(const std::string& var) const {
        for (const auto& t : tables) {
            if (t.var == var) {
                return &t;
            }
        }
        return nullptr;
    }

    friend bool operator==(const Program& a, const Program& b) { return a.tables == b.tables; }
};

// Groups a table's methods by body. Entries missing a polarity stay empty.
inline std::map<AtomBag, std::pair<std::vector<const SimpleMethod*>, std::vector<const SimpleMethod*>>>
group_by_body(const Table& t) {
    std::map<AtomBag, std::pair<std::vector<const SimpleMethod*>, std::vector<const SimpleMethod*>>> groups;
    for (const auto& m : t.methods) {
        auto& slot = groups[m.body];
        (m.head.polarity == Polarity::True ? slot.first : slot.second).push_back(&m);
    }
    return groups;
}

// Precondition: validate_program(t) passes.
inline std::vector<Conditional> conditionals(const Table& t) {
    std::vector<Conditional> out;
    for (const auto& [body, pair] : group_by_body(t)) {
        if (pair.first.size() == 1 && pair.second.size() == 1) {
            out.push_back({*pair.first.front(), *pair.second.front()});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

struct ProgramDiagnostic {
    std::string table;
    std::string conditional; // body label, empty when the issue concerns the whole table
    std::string message;
};

struct ProgramReport {
    std::vector<ProgramDiagnostic> diagnostics;
    bool valid() const { return diagnostics.empty(); }
};

inline std::string body_label(const AtomBag& body) {
    std::string out;
    for (const auto& atom : body.elements()) {
        out += (out.empty() ? "" : ",") + to_string(atom);
    }
    return out.empty() ? "." : out;
}

inline ProgramReport validate_program(const Program& p) {
    ProgramReport report;
    auto fail = [&](const std::string& table, const std::string& cond, std::string msg) {
        report.diagnostics.push_back({table, cond, std::move(msg)});
    };
    std::set<std::string> seen;
    for (const auto& t : p.tables) {
        if (!seen.insert(t.var).second) {
            fail(t.var, "", "duplicate table for variable " + t.var);
        }
        if (t.methods.empty()) {
            fail(t.var, "", "table has no methods");
            continue;
        }
        for (const auto& m : t.methods) {
            if (m.head.var != t.var) {
                fail(t.var, body_label(m.body), "method " + m.id + " has head outside the table variable");
            }
            if (m.head_multiplicity == 0) {
                fail(t.var, body_label(m.body), "method " + m.id + " has an empty head");
            }
            if (m.head_multiplicity != t.head_multiplicity()) {
                fail(t.var, body_label(m.body), "head multiplicity differs within the table");
            }
            if (!is_probability(m.prob)) {
                fail(t.var, body_label(m.body), "probability of " + m.id + " is outside [0,1]");
            }
            std::set<std::string> vars;
            for (const auto& [atom, copies] : m.body) {
                if (copies > 1 || !vars.insert(atom.var).second) {
                    fail(t.var, body_label(m.body), "body mentions variable " + atom.var + " more than once");
                }
                if (atom.var == t.var) {
                    fail(t.var, body_label(m.body), "body mentions the head variable");
                }
            }
        }
        std::set<std::string> parents = t.body_vars();
        std::size_t expected = std::size_t{1} << parents.size();
        auto groups = group_by_body(t);
        for (const auto& [body, pair] : groups) {
            std::string label = body_label(body);
            std::set<std::string> vars;
            for (const auto& [atom, copies] : body) {
                vars.insert(atom.var);
            }
            if (vars != parents) {
                fail(t.var, label, "body does not assign every parent variable");
            }
            if (pair.first.size() != 1 || pair.second.size() != 1) {
                fail(t.var, label, "conditional needs exactly one true and one false method");
                continue;
            }
            Probability sum = pair.first.front()->prob + pair.second.front()->prob;
            if (sum != 1) {
                fail(t.var, label, "conditional probabilities sum to " + to_decimal_string(sum) + ", not 1");
            }
        }
        if (groups.size() != expected) {
            fail(t.var, "", "table has " + std::to_string(groups.size()) + " conditionals, expected "
                                + std::to_string(expected));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Goals and weighted states

struct Goal {
    AtomBag atoms;
    // Variables X appearing as the superposition X=t & X=f.
    Multiset<std::string> superpositions;

    bool empty() const { return atoms.empty() && superpositions.empty(); }

    friend bool operator==(const Goal& a, const Goal& b) {
        return a.atoms == b.atoms && a.superpositions == b.superpositions;
    }
    friend bool operator<(const Goal& a, const Goal& b) {
        if (a.atoms != b.atoms) {
            return a.atoms < b.atoms;
        }
        return a.superpositions < b.superpositions;
    }
};

inline std::string to_string(const Goal& g) {
    std::string out;
    for (const auto& atom : g.atoms.elements()) {
        out += (out.empty() ? "" : ", ") + to_string(atom);
    }
    for (const auto& var : g.superpositions.elements()) {
        out += (out.empty() ? "" : ", ") + var + "=?";
    }
    return out;
}

// True iff no variable occurs with both polarities among the plain atoms.
inline bool boolean_consistent(const AtomBag& atoms) {
    for (const auto& [atom, copies] : atoms) {
        if (atom.polarity == Polarity::False && atoms.count({atom.var, Polarity::True}) > 0) {
            return false;
        }
    }
    return true;
}

struct WeightedState {
    Program program;
    Goal goal;
    Probability weight = 1;
};

enum class Rule { exp, exp_mix, term, bra };

inline const char* to_string(Rule r) {
    switch (r) {
    case Rule::exp: return "exp";
    case Rule::exp_mix: return "exp-mix";
    case Rule::term: return "term";
    case Rule::bra: return "bra";
    }
    return "?";
}

inline std::optional<Rule> parse_rule(const std::string& s) {
    if (s == "exp") return Rule::exp;
    if (s == "exp-mix") return Rule::exp_mix;
    if (s == "term") return Rule::term;
    if (s == "bra") return Rule::bra;
    return std::nullopt;
}

// One derivation node. Weights follow the bottom-up reading of a derivation: weight_out is
// the probability of the node's conclusion, weight_in that of its premise(s). For exp-family
// nodes weight_out = weight_in * prob; for bra both equal the sum of the two premises.
struct TraceNode {
    Rule rule = Rule::exp;
    std::string method;      // simple-method id, empty for bra
    std::string branch_var;  // bra only
    AtomBag consumed;
    AtomBag produced;
    Probability weight_in = 1;
    Probability weight_out = 1;
    bool zero_probability = false;
    std::vector<TraceNode> children;

    friend bool operator==(const TraceNode& a, const TraceNode& b) {
        return a.rule == b.rule && a.method == b.method && a.branch_var == b.branch_var && a.consumed == b.consumed
               && a.produced == b.produced && a.weight_in == b.weight_in && a.weight_out == b.weight_out
               && a.zero_probability == b.zero_probability && a.children == b.children;
    }
};

// An empty trace (no root) is the vacuous success of an empty program on an empty goal.
struct Trace {
    std::optional<TraceNode> root;

    Probability probability() const { return root ? root->weight_out : Probability(1); }

    friend bool operator==(const Trace& a, const Trace& b) { return a.root == b.root; }
};

struct TraceStats {
    std::size_t exp_family = 0;
    std::size_t bra = 0;
    std::size_t zero_weight = 0;
};

inline void accumulate_stats(const TraceNode& n, TraceStats& stats) {
    if (n.rule == Rule::bra) {
        ++stats.bra;
    } else {
        ++stats.exp_family;
        if (n.zero_probability) {
            ++stats.zero_weight;
        }
    }
    for (const auto& c : n.children) {
        accumulate_stats(c, stats);
    }
}

inline TraceStats trace_stats(const Trace& t) {
    TraceStats stats;
    if (t.root) {
        accumulate_stats(*t.root, stats);
    }
    return stats;
}

// Walks every state of a trace, starting from `initial`. Bra children receive the
// goal with the superposition replaced by the False atom (first child) or the True
// atom (second child). The callback sees each state's goal before the node's step.
inline void replay_states(const TraceNode& n, Goal goal, const std::function<void(const Goal&, const TraceNode&)>& visit) {
    visit(goal, n);
    if (n.rule == Rule::bra) {
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            Goal branch = goal;
            branch.superpositions.remove(n.branch_var);
            branch.atoms.add({n.branch_var, i == 0 ? Polarity::False : Polarity::True});
            replay_states(n.children[i], branch, visit);
        }
        return;
    }
    goal.atoms -= n.consumed;
    goal.atoms += n.produced;
    for (const auto& c : n.children) {
        replay_states(c, goal, visit);
    }
}

// ---------------------------------------------------------------------------
// Rules

namespace detail {

inline std::size_t table_index(const Program& p, const Table& table) {
    for (std::size_t i = 0; i < p.tables.size(); ++i) {
        if (p.tables[i].var == table.var && p.tables[i] == table) {
            return i;
        }
    }
    throw Error(Errc::table_not_in_program, "table for " + table.var);
}

} // namespace detail

inline Rule exp_rule(const SimpleMethod& method, const WeightedState& after) {
    if (method.body.empty()) {
        return after.program.tables.empty() && after.goal.empty() ? Rule::term : Rule::exp_mix;
    }
    return Rule::exp;
}

// exp / exp-mix / term: consumes the whole table, replaces the head copies by the body,
// multiplies the weight by the method probability.
inline WeightedState step_exp(const WeightedState& s, const Table& table, const SimpleMethod& method) {
    std::size_t index = detail::table_index(s.program, table);
    if (std::find(table.methods.begin(), table.methods.end(), method) == table.methods.end()) {
        throw Error(Errc::table_not_in_program, "method " + method.id + " is not in the table for " + table.var);
    }
    if (s.goal.atoms.count(method.head) < method.head_multiplicity) {
        throw Error(Errc::head_not_available, "goal lacks " + std::to_string(method.head_multiplicity) + " copies of "
                                                  + to_string(method.head));
    }
    WeightedState next = s;
    next.program.tables.erase(next.program.tables.begin() + static_cast<std::ptrdiff_t>(index));
    next.goal.atoms.remove(method.head, method.head_multiplicity);
    next.goal.atoms += method.body;
    next.weight = s.weight * method.prob;
    return next;
}

// bra: splits X=t & X=f into a False branch and a True branch; both inherit the weight.
inline std::pair<WeightedState, WeightedState> step_bra(const WeightedState& s, const std::string& var) {
    if (s.goal.superpositions.count(var) == 0) {
        throw Error(Errc::no_superposition, var);
    }
    WeightedState when_false = s;
    when_false.goal.superpositions.remove(var);
    WeightedState when_true = when_false;
    when_false.goal.atoms.add({var, Polarity::False});
    when_true.goal.atoms.add({var, Polarity::True});
    return {std::move(when_false), std::move(when_true)};
}

// ---------------------------------------------------------------------------
// Polarity analysis

// nullopt = branching (superposition in the goal).
using PolarityMap = std::map<std::string, std::optional<Polarity>>;

inline PolarityMap static_polarity_analysis(const Goal& g) {
    PolarityMap map;
    auto claim = [&](const std::string& var, std::optional<Polarity> value) {
        if (!map.emplace(var, value).second) {
            throw Error(Errc::duplicate_variable, "goal mentions " + var + " more than once");
        }
    };
    for (const auto& [atom, copies] : g.atoms) {
        if (copies > 1) {
            throw Error(Errc::duplicate_variable, "goal mentions " + atom.var + " more than once");
        }
        claim(atom.var, atom.polarity);
    }
    for (const auto& [var, copies] : g.superpositions) {
        if (copies > 1) {
            throw Error(Errc::duplicate_variable, "goal mentions " + var + " more than once");
        }
        claim(var, std::nullopt);
    }
    return map;
}

// ---------------------------------------------------------------------------
// Deterministic execution on network-shaped goals

struct ExecutionOptions {
    // When set, ties between ready tables are broken randomly instead of by program order.
    std::optional<std::uint64_t> seed;
};

struct ExecutionResult {
    Probability probability;
    Trace trace;
};

namespace detail {

class DeterministicRunner {
public:
    explicit DeterministicRunner(ExecutionOptions options) : options_(options) {
        if (options_.seed) {
            rng_.seed(*options_.seed);
        }
    }

    std::optional<TraceNode> run(WeightedState state, PolarityMap polarity) {
        if (state.program.tables.empty()) {
            if (state.goal.empty()) {
                return std::nullopt;
            }
            throw Error(Errc::stuck, "program exhausted with goal " + to_string(state.goal) + " left");
        }
        std::vector<std::size_t> ready;
        for (std::size_t i = 0; i < state.program.tables.size(); ++i) {
            const Table& t = state.program.tables[i];
            std::size_t available = state.goal.atoms.count({t.var, Polarity::True})
                                    + state.goal.atoms.count({t.var, Polarity::False})
                                    + state.goal.superpositions.count(t.var);
            if (available >= t.head_multiplicity()) {
                ready.push_back(i);
            }
        }
        if (ready.empty()) {
            std::string blocked;
            for (const auto& t : state.program.tables) {
                blocked += (blocked.empty() ? "" : ", ") + t.var;
            }
            throw Error(Errc::stuck, "no table is ready; blocked tables: " + blocked + "; goal: " + to_string(state.goal));
        }
        if (options_.seed) {
            std::shuffle(ready.begin(), ready.end(), rng_);
        }
        // Prefer a table whose selection is fully determined; otherwise branch on the
        // first unresolved variable that the first ready table reads.
        for (std::size_t i : ready) {
            if (unresolved(state.program.tables[i], polarity).empty()) {
                return apply(std::move(state), std::move(polarity), i);
            }
        }
        std::string var = unresolved(state.program.tables[ready.front()], polarity).front();
        return branch(std::move(state), std::move(polarity), var);
    }

private:
    static std::vector<std::string> unresolved(const Table& t, const PolarityMap& polarity) {
        std::vector<std::string> vars;
        auto check = [&](const std::string& v) {
            auto it = polarity.find(v);
            if (it == polarity.end()) {
                throw Error(Errc::malformed_goal, "variable " + v + " has no goal item");
            }
            if (!it->second) {
                vars.push_back(v);
            }
        };
        check(t.var);
        for (const auto& v : t.body_vars()) {
            check(v);
        }
        return vars;
    }

    TraceNode apply(WeightedState state, PolarityMap polarity, std::size_t index) {
        const Table table = state.program.tables[index];
        const SimpleMethod* chosen = nullptr;
        Polarity own = *polarity.at(table.var);
        for (const auto& m : table.methods) {
            if (m.head.polarity != own) {
                continue;
            }
            bool matches = true;
            for (const auto& [atom, copies] : m.body) {
                if (*polarity.at(atom.var) != atom.polarity) {
                    matches = false;
                    break;
                }
            }
            if (matches) {
                chosen = &m;
                break;
            }
        }
        if (!chosen) {
            throw Error(Errc::invalid_program, "table " + table.var + " has no method for the current polarities");
        }
        WeightedState next = step_exp(state, table, *chosen);
        if (!boolean_consistent(next.goal.atoms)) {
            throw Error(Errc::invalid_program, "goal became Boolean-inconsistent after " + chosen->id);
        }
        TraceNode node;
        node.rule = exp_rule(*chosen, next);
        node.method = chosen->id;
        node.consumed = chosen->head_atoms();
        node.produced = chosen->body;
        node.zero_probability = chosen->prob == 0;
        std::optional<TraceNode> child = run(std::move(next), std::move(polarity));
        node.weight_in = child ? child->weight_out : Probability(1);
        node.weight_out = node.weight_in * chosen->prob;
        if (child) {
            node.children.push_back(std::move(*child));
        }
        return node;
    }

    TraceNode branch(WeightedState state, PolarityMap polarity, const std::string& var) {
        auto [when_false, when_true] = step_bra(state, var);
        TraceNode node;
        node.rule = Rule::bra;
        node.branch_var = var;
        Probability total = 0;
        for (Polarity p : {Polarity::False, Polarity::True}) {
            PolarityMap sub = polarity;
            sub[var] = p;
            std::optional<TraceNode> child = run(p == Polarity::False ? when_false : when_true, std::move(sub));
            if (!child) {
                throw Error(Errc::stuck, "branch on " + var + " ended without a step");
            }
            total += child->weight_out;
            node.children.push_back(std::move(*child));
        }
        node.weight_in = total;
        node.weight_out = total;
        return node;
    }

    ExecutionOptions options_;
    std::mt19937_64 rng_;
};

inline void check_goal_shape(const Program& p, const Goal& g, const PolarityMap& polarity) {
    std::set<std::string> program_vars;
    for (const auto& t : p.tables) {
        program_vars.insert(t.var);
        for (const auto& v : t.body_vars()) {
            if (!p.find(v)) {
                throw Error(Errc::invalid_program, "table " + t.var + " reads " + v + ", which has no table");
            }
        }
    }
    for (const auto& [var, value] : polarity) {
        if (!program_vars.count(var)) {
            throw Error(Errc::malformed_goal, "goal mentions " + var + ", which has no table");
        }
    }
    for (const auto& var : program_vars) {
        if (!polarity.count(var)) {
            throw Error(Errc::malformed_goal, "goal has no item for " + var);
        }
    }
    (void)g;
}

} // namespace detail

// Runs a validated program on a goal with exactly one item per program variable.
// Tables fire children-before-parents; bra on X is delayed until a ready table needs X.
inline ExecutionResult execute_deterministic(const Program& p, const Goal& g, ExecutionOptions options = {}) {
    if (auto report = validate_program(p); !report.valid()) {
        const auto& d = report.diagnostics.front();
        throw Error(Errc::invalid_program, d.table + ": " + d.message);
    }
    PolarityMap polarity = static_polarity_analysis(g);
    detail::check_goal_shape(p, g, polarity);
    detail::DeterministicRunner runner(options);
    Trace trace{runner.run(WeightedState{p, g, 1}, std::move(polarity))};
    return {trace.probability(), std::move(trace)};
}

// ---------------------------------------------------------------------------
// General search

struct SearchLimits {
    std::size_t max_depth = 256;
    std::size_t max_results = 4096;
    // Drop states holding both polarities of a variable. Sound for network programs.
    bool boolean_pruning = true;
};

struct SearchResult {
    std::vector<std::pair<Trace, Probability>> results;
    bool limit_exceeded = false;
};

namespace detail {

class Searcher {
public:
    explicit Searcher(SearchLimits limits) : limits_(limits) {}

    struct Candidate {
        std::optional<TraceNode> node;
        Probability value = 1;
        // Derivations that differ only in the order of exp steps share a signature.
        std::multiset<std::string> prefix;
        std::string tail;
    };

    std::vector<Candidate> explore(const WeightedState& s, std::size_t depth) {
        if (limits_.boolean_pruning && !boolean_consistent(s.goal.atoms)) {
            return {};
        }
        if (s.program.tables.empty()) {
            if (s.goal.empty()) {
                return {Candidate{}};
            }
            return {};
        }
        if (s.goal.empty()) {
            return {};
        }
        Key key{remaining(s.program), s.goal};
        if (auto it = memo_.find(key); it != memo_.end() && it->second.first >= limits_.max_depth - depth) {
            return it->second.second;
        }
        std::vector<Candidate> out;
        if (!s.goal.superpositions.empty()) {
            // The with rule is invertible, so branching first loses no derivation.
            std::string var = s.goal.superpositions.begin()->first;
            auto [when_false, when_true] = step_bra(s, var);
            auto lhs = explore(when_false, depth);
            auto rhs = explore(when_true, depth);
            for (const auto& a : lhs) {
                for (const auto& b : rhs) {
                    if (out.size() >= limits_.max_results) {
                        limit_exceeded_ = true;
                        break;
                    }
                    if (!a.node || !b.node) {
                        continue;
                    }
                    Candidate c;
                    TraceNode node;
                    node.rule = Rule::bra;
                    node.branch_var = var;
                    node.weight_in = node.weight_out = a.value + b.value;
                    node.children = {*a.node, *b.node};
                    c.value = node.weight_out;
                    c.node = std::move(node);
                    c.tail = "bra(" + var + ")[" + signature(a) + "][" + signature(b) + "]";
                    out.push_back(std::move(c));
                }
            }
        } else if (depth >= limits_.max_depth) {
            limit_exceeded_ = true;
            return {};
        } else {
            std::set<std::string> seen;
            for (const auto& table : s.program.tables) {
                for (const auto& m : table.methods) {
                    if (s.goal.atoms.count(m.head) < m.head_multiplicity) {
                        continue;
                    }
                    WeightedState next = step_exp(s, table, m);
                    for (auto& sub : explore(next, depth + 1)) {
                        Candidate c;
                        TraceNode node;
                        node.rule = exp_rule(m, next);
                        node.method = m.id;
                        node.consumed = m.head_atoms();
                        node.produced = m.body;
                        node.zero_probability = m.prob == 0;
                        node.weight_in = sub.value;
                        node.weight_out = sub.value * m.prob;
                        if (sub.node) {
                            node.children.push_back(std::move(*sub.node));
                        }
                        c.value = node.weight_out;
                        c.node = std::move(node);
                        c.prefix = std::move(sub.prefix);
                        c.prefix.insert(table.var + "/" + m.id);
                        c.tail = std::move(sub.tail);
                        if (!seen.insert(signature(c)).second) {
                            continue;
                        }
                        if (out.size() >= limits_.max_results) {
                            limit_exceeded_ = true;
                            break;
                        }
                        out.push_back(std::move(c));
                    }
                }
            }
        }
        memo_[key] = {limits_.max_depth - depth, out};
        return out;
    }

    bool limit_exceeded() const { return limit_exceeded_; }

private:
    using Key = std::pair<std::vector<std::string>, Goal>;

    static std::vector<std::string> remaining(const Program& p) {
        std::vector<std::string> vars;
        for (const auto& t : p.tables) {
            vars.push_back(t.var);
        }
        return vars;
    }

    static std::string signature(const Candidate& c) {
        std::string out;
        for (const auto& id : c.prefix) {
            out += id + ";";
        }
        return out + c.tail;
    }

    SearchLimits limits_;
    bool limit_exceeded_ = false;
    std::map<Key, std::pair<std::size_t, std::vector<Candidate>>> memo_;
};

} // namespace detail

// Every successful derivation of the goal, up to reordering of exp steps between
// branchings. Bra is applied eagerly on superpositions in variable order.
inline SearchResult search_all(const Program& p, const Goal& g, SearchLimits limits = {}) {
    detail::Searcher searcher(limits);
    SearchResult result;
    for (auto& c : searcher.explore(WeightedState{p, g, 1}, 0)) {
        Trace t{std::move(c.node)};
        result.results.emplace_back(std::move(t), c.value);
    }
    result.limit_exceeded = searcher.limit_exceeded();
    return result;
}

} // namespace problo
