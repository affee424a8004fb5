// Randomized properties across modules.

#include "problo/problo.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

using namespace problo;

namespace {

struct Case {
    bayes::BayesNet bn;
    bayes::Query query;
    Program program;
    ExecutionResult result;
};

std::vector<Case> random_cases(std::uint64_t seed, int count, std::size_t max_marginal = 4) {
    std::mt19937_64 rng(seed);
    std::vector<Case> out;
    for (int i = 0; i < count; ++i) {
        auto bn = oracle::random_network(rng, 1, 7, 3);
        auto q = oracle::random_query(rng, bn, max_marginal);
        Program p = bayes::compile(bn);
        auto r = execute_deterministic(p, bayes::goal_of(q));
        out.push_back({std::move(bn), std::move(q), std::move(p), std::move(r)});
    }
    return out;
}

std::string table_of(const std::string& method_id) { return method_id.substr(0, method_id.find('=')); }

// Every root-to-leaf path fires each table exactly once.
void tables_per_path(const TraceNode& n, std::multiset<std::string> used, std::vector<std::multiset<std::string>>& paths) {
    if (n.rule != Rule::bra) {
        used.insert(table_of(n.method));
    }
    if (n.children.empty()) {
        paths.push_back(used);
    }
    for (const auto& c : n.children) {
        tables_per_path(c, used, paths);
    }
}

} // namespace

TEST(Weights, NodeAlgebraAndPathSum) {
    for (const auto& c : random_cases(11, 300)) {
        ASSERT_TRUE(c.result.trace.root.has_value());
        auto probs = oracle::method_probabilities(c.program);
        EXPECT_TRUE(oracle::weights_consistent(*c.result.trace.root, probs));
        EXPECT_EQ(oracle::path_sum(*c.result.trace.root, probs), c.result.probability);
        EXPECT_EQ(c.result.trace.probability(), c.result.probability);
    }
}

TEST(Weights, ProbabilityInUnitInterval) {
    for (const auto& c : random_cases(12, 300)) {
        EXPECT_GE(c.result.probability, 0);
        EXPECT_LE(c.result.probability, 1);
    }
}

TEST(Tables, EachUsedOncePerBranch) {
    for (const auto& c : random_cases(13, 300)) {
        std::vector<std::multiset<std::string>> paths;
        tables_per_path(*c.result.trace.root, {}, paths);
        std::multiset<std::string> all(c.bn.variables.begin(), c.bn.variables.end());
        for (const auto& used : paths) {
            EXPECT_EQ(used, all);
        }
        EXPECT_EQ(paths.size(), oracle::count_nodes(c.result.trace).bra + 1);
    }
}

TEST(Tables, BranchesCoverMarginalVariables) {
    for (const auto& c : random_cases(14, 200)) {
        std::set<std::string> branched;
        std::function<void(const TraceNode&)> walk = [&](const TraceNode& n) {
            if (n.rule == Rule::bra) {
                branched.insert(n.branch_var);
            }
            for (const auto& ch : n.children) {
                walk(ch);
            }
        };
        walk(*c.result.trace.root);
        for (const auto& v : branched) {
            EXPECT_TRUE(c.query.marginal_vars.count(v)) << v;
        }
    }
}

TEST(Schedule, SeedIrrelevant) {
    for (const auto& c : random_cases(15, 100)) {
        for (std::uint64_t seed : {1u, 7u, 99u}) {
            auto r = execute_deterministic(c.program, bayes::goal_of(c.query), {seed});
            EXPECT_EQ(r.probability, c.result.probability);
            EXPECT_TRUE(oracle::boolean_consistent_everywhere(r.trace, bayes::goal_of(c.query)));
        }
    }
}

TEST(Schedule, SearchFindsTheSameTotal) {
    for (const auto& c : random_cases(16, 40, 2)) {
        if (c.bn.variables.size() > 5) {
            continue;
        }
        auto found = search_all(c.program, bayes::goal_of(c.query));
        ASSERT_FALSE(found.limit_exceeded);
        ASSERT_FALSE(found.results.empty());
        for (const auto& [trace, p] : found.results) {
            EXPECT_EQ(p, c.result.probability);
        }
    }
}

TEST(Semantics, JointMatchesChainRule) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        auto bn = oracle::random_network(rng, 1, 7, 3);
        auto table = oracle::joint_table(bn);
        std::uniform_int_distribution<std::uint64_t> pick(0, table.size() - 1);
        std::uint64_t bits = pick(rng);
        bayes::Assignment a;
        for (std::size_t v = 0; v < bn.variables.size(); ++v) {
            a[bn.variables[v]] = (bits >> v) & 1U;
        }
        EXPECT_EQ(bayes::query_joint(bn, a).probability, table[bits]);
    }
}

TEST(Semantics, AllUnknownIsCertain) {
    std::mt19937_64 rng(18);
    for (int i = 0; i < 50; ++i) {
        auto bn = oracle::random_network(rng, 1, 6, 3);
        bayes::Query q{{}, {bn.variables.begin(), bn.variables.end()}};
        EXPECT_EQ(bayes::query_marginal(bn, q).probability, 1);
    }
}

TEST(RoundTrip, NetworksPrograms) {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 100; ++i) {
        auto bn = oracle::random_network(rng, 1, 7, 3);
        auto back = lang::parse_bn(lang::render_bn(bn));
        ASSERT_TRUE(back.ok());
        EXPECT_EQ(*back.value, bn);

        Program p = bayes::compile(bn);
        auto plo = lang::parse_plo(lang::render_plo(p));
        ASSERT_TRUE(plo.ok());
        EXPECT_EQ(*plo.value, p);
    }
}

TEST(RoundTrip, TracesThroughJson) {
    for (const auto& c : random_cases(20, 100)) {
        auto back = lang::parse_trace_json(lang::render_trace(c.result.trace, lang::Format::json));
        ASSERT_TRUE(back.ok());
        EXPECT_EQ(*back.value, c.result.trace);
    }
}

TEST(Graphs, AcyclicityIgnoresNamesAndOrder) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        auto g = oracle::random_digraph(rng, 7, 0.2);
        bool expected = lo::decide_acyclic(g);
        lo::DirectedGraph h;
        auto rename = [](const std::string& v) { return "n_" + v; };
        std::vector<std::string> vs = g.vertices;
        std::shuffle(vs.begin(), vs.end(), rng);
        for (const auto& v : vs) {
            h.add_vertex(rename(v));
        }
        auto es = g.edges;
        std::shuffle(es.begin(), es.end(), rng);
        for (const auto& [a, b] : es) {
            h.add_edge(rename(a), rename(b));
        }
        EXPECT_EQ(lo::decide_acyclic(h), expected);
    }
}

TEST(Graphs, AddingAnEdgeNeverBreaksACycle) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 300; ++i) {
        auto g = oracle::random_digraph(rng, 6, 0.25);
        if (lo::decide_acyclic(g) || g.vertices.empty()) {
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, g.vertices.size() - 1);
        g.add_edge(g.vertices[pick(rng)], g.vertices[pick(rng)]);
        EXPECT_FALSE(lo::decide_acyclic(g));
    }
}
