#pragma once

// Reference implementations and generators shared by the test suites. Nothing here calls
// into the engine, the scheduler or the library's own enumeration.

#include "problo/bayes.hpp"
#include "problo/engine.hpp"
#include "problo/kernel.hpp"
#include "problo/lo.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using problo::Probability;

// Kahn's algorithm: acyclic iff every vertex gets removed.
inline bool kahn_acyclic(const problo::lo::DirectedGraph& g) {
    std::map<std::string, std::size_t> indegree;
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& v : g.vertices) {
        indegree[v];
    }
    for (const auto& [from, to] : g.edges) {
        ++indegree[to];
        out[from].push_back(to);
    }
    std::deque<std::string> ready;
    for (const auto& [v, d] : indegree) {
        if (d == 0) {
            ready.push_back(v);
        }
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        std::string v = ready.front();
        ready.pop_front();
        ++removed;
        for (const auto& w : out[v]) {
            if (--indegree[w] == 0) {
                ready.push_back(w);
            }
        }
    }
    return removed == indegree.size();
}

// Full joint distribution indexed by bitmask over bn.variables (bit i = variable i is true),
// built by the chain rule.
inline std::vector<Probability> joint_table(const problo::bayes::BayesNet& bn) {
    const std::size_t n = bn.variables.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        index[bn.variables[i]] = i;
    }
    std::vector<Probability> table(std::size_t{1} << n, Probability(1));
    for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& cpt = bn.cpts.at(bn.variables[i]);
            std::vector<bool> key;
            for (const auto& p : cpt.parents) {
                key.push_back((mask >> index.at(p)) & 1U);
            }
            const auto& row = cpt.rows.at(key);
            table[mask] *= ((mask >> i) & 1U) ? row.p_true : row.p_false;
        }
    }
    return table;
}

// Probability that the evidence holds, summing the joint table.
inline Probability marginal(const problo::bayes::BayesNet& bn, const std::map<std::string, bool>& evidence) {
    auto table = joint_table(bn);
    Probability total = 0;
    for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
        bool match = true;
        for (std::size_t i = 0; i < bn.variables.size() && match; ++i) {
            auto it = evidence.find(bn.variables[i]);
            match = it == evidence.end() || it->second == static_cast<bool>((mask >> i) & 1U);
        }
        if (match) {
            total += table[mask];
        }
    }
    return total;
}

// Decimal probabilities with one or two digits, with 0 and 1 showing up regularly.
inline Probability random_probability(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 9);
    int k = kind(rng);
    if (k == 0) {
        return 0;
    }
    if (k == 1) {
        return 1;
    }
    std::uniform_int_distribution<int> hundredths(0, 100);
    return Probability(hundredths(rng), 100);
}

// Random network: variables in a random order, each picks up to max_parents parents among
// the earlier ones, so the graph is acyclic by construction.
inline problo::bayes::BayesNet random_network(std::mt19937_64& rng, std::size_t min_vars, std::size_t max_vars,
                                              std::size_t max_parents) {
    problo::bayes::BayesNet bn;
    bn.name = "random";
    std::uniform_int_distribution<std::size_t> count(min_vars, max_vars);
    std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
        bn.variables.push_back("V" + std::to_string(i));
    }
    std::vector<std::string> order = bn.variables;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> candidates(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i));
        std::shuffle(candidates.begin(), candidates.end(), rng);
        std::uniform_int_distribution<std::size_t> k(0, std::min(max_parents, candidates.size()));
        candidates.resize(k(rng));
        problo::bayes::CPT cpt;
        cpt.parents = candidates;
        for (const auto& p : cpt.parents) {
            bn.edges.emplace_back(p, order[i]);
        }
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cpt.parents.size()); ++bits) {
            std::vector<bool> key;
            for (std::size_t j = 0; j < cpt.parents.size(); ++j) {
                key.push_back((bits >> j) & 1U);
            }
            Probability p = random_probability(rng);
            cpt.rows[key] = {p, 1 - p};
        }
        bn.cpts[order[i]] = std::move(cpt);
    }
    return bn;
}

// Evidence on a random subset, the rest marginal; at most max_marginal marginal variables.
inline problo::bayes::Query random_query(std::mt19937_64& rng, const problo::bayes::BayesNet& bn,
                                         std::size_t max_marginal) {
    problo::bayes::Query q;
    std::vector<std::string> vars = bn.variables;
    std::shuffle(vars.begin(), vars.end(), rng);
    std::uniform_int_distribution<std::size_t> k(0, std::min(max_marginal, vars.size()));
    std::size_t marginals = k(rng);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i < marginals) {
            q.marginal_vars.insert(vars[i]);
        } else {
            q.evidence[vars[i]] = coin(rng);
        }
    }
    return q;
}

inline problo::lo::DirectedGraph random_digraph(std::mt19937_64& rng, std::size_t n, double density,
                                                bool self_loops = false) {
    problo::lo::DirectedGraph g;
    for (std::size_t i = 0; i < n; ++i) {
        g.add_vertex("v" + std::to_string(i));
    }
    std::bernoulli_distribution edge(density);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if ((i != j || self_loops) && edge(rng)) {
                g.edges.emplace_back(g.vertices[i], g.vertices[j]);
            }
        }
    }
    return g;
}

// Every labeled digraph on n vertices without parallel edges; self-loops optional.
inline std::vector<problo::lo::DirectedGraph> all_digraphs(std::size_t n, bool self_loops) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j || self_loops) {
                slots.emplace_back(i, j);
            }
        }
    }
    std::vector<problo::lo::DirectedGraph> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
        problo::lo::DirectedGraph g;
        for (std::size_t i = 0; i < n; ++i) {
            g.add_vertex(std::string(1, static_cast<char>('a' + i)));
        }
        for (std::size_t k = 0; k < slots.size(); ++k) {
            if ((mask >> k) & 1U) {
                g.edges.emplace_back(g.vertices[slots[k].first], g.vertices[slots[k].second]);
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

// Bipole with head and body sizes in [1,4] and [0,4], atoms drawn from a small alphabet.
inline problo::kernel::Bipole random_bipole(std::mt19937_64& rng, std::size_t alphabet = 5) {
    std::uniform_int_distribution<std::size_t> head_size(1, 4);
    std::uniform_int_distribution<std::size_t> body_size(0, 4);
    std::uniform_int_distribution<std::size_t> letter(0, alphabet - 1);
    problo::kernel::Bipole b;
    for (std::size_t i = head_size(rng); i > 0; --i) {
        b.head.add(std::string(1, static_cast<char>('a' + letter(rng))));
    }
    for (std::size_t i = body_size(rng); i > 0; --i) {
        b.body.add(std::string(1, static_cast<char>('a' + letter(rng))));
    }
    return b;
}

struct TraceCounts {
    std::size_t exp_family = 0;
    std::size_t bra = 0;
};

// Counted directly over the tree.
inline void count_nodes(const problo::TraceNode& n, TraceCounts& c) {
    (n.rule == problo::Rule::bra ? c.bra : c.exp_family)++;
    for (const auto& child : n.children) {
        count_nodes(child, c);
    }
}

inline TraceCounts count_nodes(const problo::Trace& t) {
    TraceCounts c;
    if (t.root) {
        count_nodes(*t.root, c);
    }
    return c;
}

// Replays every root-to-leaf branch from the initial goal and reports whether any state
// holds both polarities of a variable.
inline bool boolean_consistent_everywhere(const problo::Trace& t, const problo::Goal& initial) {
    if (!t.root) {
        return true;
    }
    bool ok = true;
    problo::replay_states(*t.root, initial, [&](const problo::Goal& g, const problo::TraceNode&) {
        for (const auto& [atom, copies] : g.atoms) {
            if (g.atoms.count({atom.var, problo::Polarity::True}) && g.atoms.count({atom.var, problo::Polarity::False})) {
                ok = false;
            }
        }
    });
    return ok;
}

// Checks the weight algebra of every node.
inline bool weights_consistent(const problo::TraceNode& n,
                               const std::map<std::string, problo::Probability>& method_prob) {
    if (n.rule == problo::Rule::bra) {
        if (n.children.size() != 2) {
            return false;
        }
        Probability sum = n.children[0].weight_out + n.children[1].weight_out;
        if (n.weight_out != sum || n.weight_in != sum) {
            return false;
        }
    } else {
        if (n.children.size() > 1) {
            return false;
        }
        Probability in = n.children.empty() ? Probability(1) : n.children[0].weight_out;
        auto it = method_prob.find(n.method);
        if (it == method_prob.end() || n.weight_in != in || n.weight_out != in * it->second) {
            return false;
        }
    }
    for (const auto& c : n.children) {
        if (!weights_consistent(c, method_prob)) {
            return false;
        }
    }
    return true;
}

inline std::map<std::string, Probability> method_probabilities(const problo::Program& p) {
    std::map<std::string, Probability> out;
    for (const auto& t : p.tables) {
        for (const auto& m : t.methods) {
            out[m.id] = m.prob;
        }
    }
    return out;
}

// Σ over root-to-leaf paths of the product of exp probabilities.
inline Probability path_sum(const problo::TraceNode& n, const std::map<std::string, Probability>& method_prob) {
    if (n.rule == problo::Rule::bra) {
        return path_sum(n.children[0], method_prob) + path_sum(n.children[1], method_prob);
    }
    Probability below = n.children.empty() ? Probability(1) : path_sum(n.children[0], method_prob);
    return below * method_prob.at(n.method);
}

} // namespace oracle
