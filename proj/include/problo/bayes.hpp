#pragma once

#include "problo/engine.hpp"
#include "problo/error.hpp"
#include "problo/lo.hpp"
#include "problo/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace problo::bayes {

struct Row {
    Probability p_true;
    Probability p_false;

    friend bool operator==(const Row& a, const Row& b) { return a.p_true == b.p_true && a.p_false == b.p_false; }
};

// Rows are keyed by the parent assignment in parent order (false < true).
struct CPT {
    std::vector<std::string> parents;
    std::map<std::vector<bool>, Row> rows;

    friend bool operator==(const CPT& a, const CPT& b) { return a.parents == b.parents && a.rows == b.rows; }
};

struct BayesNet {
    std::string name = "net";
    std::vector<std::string> variables;
    std::vector<std::pair<std::string, std::string>> edges;
    std::map<std::string, CPT> cpts;

    bool has_variable(const std::string& v) const {
        return std::find(variables.begin(), variables.end(), v) != variables.end();
    }

    std::size_t out_degree(const std::string& v) const {
        return static_cast<std::size_t>(
            std::count_if(edges.begin(), edges.end(), [&](const auto& e) { return e.first == v; }));
    }

    std::set<std::string> parents(const std::string& v) const {
        std::set<std::string> out;
        for (const auto& [from, to] : edges) {
            if (to == v) {
                out.insert(from);
            }
        }
        return out;
    }

    lo::DirectedGraph graph() const {
        lo::DirectedGraph g;
        g.vertices = variables;
        g.edges = edges;
        return g;
    }

    friend bool operator==(const BayesNet& a, const BayesNet& b) {
        return a.name == b.name && a.variables == b.variables && a.edges == b.edges && a.cpts == b.cpts;
    }
};

using Assignment = std::map<std::string, bool>;

struct Query {
    Assignment evidence;
    std::set<std::string> marginal_vars;
};

struct NetworkDiagnostic {
    std::string variable; // empty for network-wide issues
    std::string message;
};

struct NetworkReport {
    std::vector<NetworkDiagnostic> diagnostics;
    // Vertices left unconsumed by the acyclicity run: the cycles and everything downstream.
    std::vector<std::string> cycle;
    bool valid() const { return diagnostics.empty(); }
};

inline std::string row_label(const CPT& cpt, const std::vector<bool>& key) {
    if (key.empty()) {
        return "()";
    }
    std::string out = "(";
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        out += (i < cpt.parents.size() ? cpt.parents[i] : "?") + "=" + (key[i] ? "t" : "f");
    }
    return out + ")";
}

inline NetworkReport validate_network(const BayesNet& bn) {
    NetworkReport report;
    auto fail = [&](const std::string& var, std::string msg) { report.diagnostics.push_back({var, std::move(msg)}); };

    std::set<std::string> declared;
    for (const auto& v : bn.variables) {
        if (!declared.insert(v).second) {
            fail(v, "variable declared twice");
        }
    }
    std::set<std::pair<std::string, std::string>> seen_edges;
    bool endpoints_ok = true;
    for (const auto& e : bn.edges) {
        if (!declared.count(e.first) || !declared.count(e.second)) {
            fail(declared.count(e.first) ? e.second : e.first, "edge " + e.first + " -> " + e.second + " uses an undeclared variable");
            endpoints_ok = false;
        }
        if (!seen_edges.insert(e).second) {
            fail(e.second, "edge " + e.first + " -> " + e.second + " declared twice");
        }
    }
    for (const auto& [var, cpt] : bn.cpts) {
        if (!declared.count(var)) {
            fail(var, "table for undeclared variable");
        }
    }
    for (const auto& v : declared) {
        auto it = bn.cpts.find(v);
        if (it == bn.cpts.end()) {
            fail(v, "missing table");
            continue;
        }
        const CPT& cpt = it->second;
        std::set<std::string> listed(cpt.parents.begin(), cpt.parents.end());
        if (listed.size() != cpt.parents.size()) {
            fail(v, "table lists a parent twice");
        }
        if (listed != bn.parents(v)) {
            fail(v, "table parents differ from the graph parents");
        }
        std::size_t expected = std::size_t{1} << cpt.parents.size();
        if (cpt.rows.size() != expected) {
            fail(v, "table has " + std::to_string(cpt.rows.size()) + " rows, expected " + std::to_string(expected));
        }
        for (const auto& [key, row] : cpt.rows) {
            if (key.size() != cpt.parents.size()) {
                fail(v, "row " + row_label(cpt, key) + " has the wrong number of parent values");
            }
            if (!is_probability(row.p_true) || !is_probability(row.p_false)) {
                fail(v, "row " + row_label(cpt, key) + " has a value outside [0,1]");
            }
            Probability sum = row.p_true + row.p_false;
            if (sum != 1) {
                fail(v, "row " + row_label(cpt, key) + " sums to " + to_decimal_string(sum) + ", not 1");
            }
        }
    }
    if (endpoints_ok) {
        auto run = lo::acyclicity_run(bn.graph());
        if (!run.success) {
            for (const auto& [m, copies] : run.final_state.program) {
                report.cycle.push_back(m.head.begin()->first);
            }
            std::string list;
            for (const auto& v : report.cycle) {
                list += (list.empty() ? "" : ", ") + v;
            }
            fail("", "dependency graph has a cycle through or above: " + list);
        }
    }
    return report;
}

inline void require_valid(const BayesNet& bn) {
    auto report = validate_network(bn);
    if (!report.valid()) {
        const auto& d = report.diagnostics.front();
        throw Error(Errc::invalid_network, (d.variable.empty() ? "" : d.variable + ": ") + d.message);
    }
}

// One table per variable, sorted by name. Each row yields a True and a False method whose head
// has out-degree + 1 copies and whose body fixes the parents to the row's values.
inline Program compile(const BayesNet& bn) {
    require_valid(bn);
    std::vector<std::string> names = bn.variables;
    std::sort(names.begin(), names.end());
    Program program;
    for (const auto& var : names) {
        const CPT& cpt = bn.cpts.at(var);
        Table table{var, {}};
        std::size_t copies = bn.out_degree(var) + 1;
        for (const auto& [key, row] : cpt.rows) {
            AtomBag body;
            for (std::size_t i = 0; i < key.size(); ++i) {
                body.add({cpt.parents[i], key[i] ? Polarity::True : Polarity::False});
            }
            for (Polarity pol : {Polarity::True, Polarity::False}) {
                BoolAtom head{var, pol};
                table.methods.push_back(
                    {method_label(head, body), head, copies, body, pol == Polarity::True ? row.p_true : row.p_false});
            }
        }
        program.tables.push_back(std::move(table));
    }
    return program;
}

// Inverse of compile for programs of network shape. Parents are taken in name order.
inline BayesNet network_from_program(const Program& p) {
    if (auto report = validate_program(p); !report.valid()) {
        throw Error(Errc::invalid_program, report.diagnostics.front().table + ": " + report.diagnostics.front().message);
    }
    BayesNet bn;
    bn.name = "program";
    for (const auto& t : p.tables) {
        bn.variables.push_back(t.var);
    }
    for (const auto& t : p.tables) {
        CPT cpt;
        auto parents = t.body_vars();
        cpt.parents.assign(parents.begin(), parents.end());
        for (const auto& parent : cpt.parents) {
            bn.edges.emplace_back(parent, t.var);
        }
        for (const auto& c : conditionals(t)) {
            std::vector<bool> key;
            for (const auto& parent : cpt.parents) {
                key.push_back(c.when_true.body.count({parent, Polarity::True}) > 0);
            }
            cpt.rows[key] = {c.when_true.prob, c.when_false.prob};
        }
        bn.cpts[t.var] = std::move(cpt);
    }
    for (const auto& t : p.tables) {
        if (t.head_multiplicity() != bn.out_degree(t.var) + 1) {
            throw Error(Errc::invalid_program, "table " + t.var + " does not have network shape: head multiplicity "
                                                   + std::to_string(t.head_multiplicity()) + ", out-degree "
                                                   + std::to_string(bn.out_degree(t.var)));
        }
    }
    require_valid(bn);
    return bn;
}

inline void check_query(const BayesNet& bn, const Query& q) {
    for (const auto& [var, value] : q.evidence) {
        if (!bn.has_variable(var)) {
            throw Error(Errc::invalid_query, "unknown variable " + var);
        }
        if (q.marginal_vars.count(var)) {
            throw Error(Errc::invalid_query, var + " is both evidence and marginal");
        }
    }
    for (const auto& var : q.marginal_vars) {
        if (!bn.has_variable(var)) {
            throw Error(Errc::invalid_query, "unknown variable " + var);
        }
    }
    for (const auto& var : bn.variables) {
        if (!q.evidence.count(var) && !q.marginal_vars.count(var)) {
            throw Error(Errc::invalid_query, "query says nothing about " + var);
        }
    }
}

inline Goal goal_of(const Query& q) {
    Goal g;
    for (const auto& [var, value] : q.evidence) {
        g.atoms.add({var, value ? Polarity::True : Polarity::False});
    }
    for (const auto& var : q.marginal_vars) {
        g.superpositions.add(var);
    }
    return g;
}

inline Query query_of(const Goal& g) {
    Query q;
    for (const auto& [atom, copies] : g.atoms) {
        if (copies > 1 || q.evidence.count(atom.var)) {
            throw Error(Errc::duplicate_variable, "goal mentions " + atom.var + " more than once");
        }
        q.evidence[atom.var] = atom.polarity == Polarity::True;
    }
    for (const auto& [var, copies] : g.superpositions) {
        if (copies > 1 || q.evidence.count(var)) {
            throw Error(Errc::duplicate_variable, "goal mentions " + var + " more than once");
        }
        q.marginal_vars.insert(var);
    }
    return q;
}

inline ExecutionResult query_marginal(const BayesNet& bn, const Query& q, ExecutionOptions options = {}) {
    check_query(bn, q);
    return execute_deterministic(compile(bn), goal_of(q), options);
}

inline ExecutionResult query_joint(const BayesNet& bn, const Assignment& evidence, ExecutionOptions options = {}) {
    return query_marginal(bn, Query{evidence, {}}, options);
}

// Brute force over the chain-rule factorization: sum over completions of the evidence of the
// product of CPT entries. Reads only the network tables.
inline Probability oracle_enumerate(const BayesNet& bn, const Query& q) {
    std::vector<std::string> free;
    for (const auto& v : bn.variables) {
        if (!q.evidence.count(v)) {
            free.push_back(v);
        }
    }
    Probability total = 0;
    Assignment world = q.evidence;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
        for (std::size_t i = 0; i < free.size(); ++i) {
            world[free[i]] = (bits >> i) & 1U;
        }
        Probability product = 1;
        for (const auto& v : bn.variables) {
            const CPT& cpt = bn.cpts.at(v);
            std::vector<bool> key;
            for (const auto& parent : cpt.parents) {
                key.push_back(world.at(parent));
            }
            const Row& row = cpt.rows.at(key);
            product *= world.at(v) ? row.p_true : row.p_false;
            if (product == 0) {
                break;
            }
        }
        total += product;
    }
    return total;
}

// Exact check of P(lhs, rhs) = P(lhs) P(rhs) over every value combination.
inline bool check_independence(const BayesNet& bn, const std::set<std::string>& lhs, const std::set<std::string>& rhs) {
    auto marginal_of = [&](const Assignment& fixed) {
        Query q{fixed, {}};
        return oracle_enumerate(bn, q);
    };
    std::vector<std::string> left(lhs.begin(), lhs.end());
    std::vector<std::string> right(rhs.begin(), rhs.end());
    for (std::uint64_t lb = 0; lb < (std::uint64_t{1} << left.size()); ++lb) {
        Assignment a;
        for (std::size_t i = 0; i < left.size(); ++i) {
            a[left[i]] = (lb >> i) & 1U;
        }
        Probability pa = marginal_of(a);
        for (std::uint64_t rb = 0; rb < (std::uint64_t{1} << right.size()); ++rb) {
            Assignment b;
            for (std::size_t i = 0; i < right.size(); ++i) {
                b[right[i]] = (rb >> i) & 1U;
            }
            Assignment both = a;
            both.insert(b.begin(), b.end());
            if (marginal_of(both) != pa * marginal_of(b)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace problo::bayes
