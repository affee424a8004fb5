#pragma once

#include "problo/error.hpp"
#include "problo/kernel.hpp"
#include "problo/multiset.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

// Multiplicative LO: multi-head methods consumed once, executed as multiset rewriting.
namespace problo::lo {

using Atom = std::string;

struct LOMethod {
    Multiset<Atom> head;
    Multiset<Atom> body;

    kernel::Bipole bipole() const { return {head, body}; }

    // Tie-break order: smallest head (as a sorted word), then smallest body.
    friend bool operator<(const LOMethod& a, const LOMethod& b) {
        auto ha = a.head.elements();
        auto hb = b.head.elements();
        if (ha != hb) {
            return ha < hb;
        }
        return a.body.elements() < b.body.elements();
    }
    friend bool operator==(const LOMethod& a, const LOMethod& b) { return a.head == b.head && a.body == b.body; }
    friend bool operator!=(const LOMethod& a, const LOMethod& b) { return !(a == b); }
};

inline std::string join_atoms(const Multiset<Atom>& atoms) {
    std::string out;
    for (const auto& a : atoms.elements()) {
        if (!out.empty()) {
            out += ", ";
        }
        out += a;
    }
    return out;
}

inline std::string to_string(const LOMethod& m) {
    return join_atoms(m.head) + (m.body.empty() ? "." : " :- " + join_atoms(m.body) + ".");
}

struct LOState {
    Multiset<LOMethod> program;
    Multiset<Atom> goal;

    bool success() const { return program.empty() && goal.empty(); }

    friend bool operator==(const LOState& a, const LOState& b) { return a.program == b.program && a.goal == b.goal; }
    friend bool operator<(const LOState& a, const LOState& b) {
        if (a.program != b.program) {
            return a.program < b.program;
        }
        return a.goal < b.goal;
    }
};

enum class StepRule { exp, exp_mix, term };

inline const char* to_string(StepRule r) {
    switch (r) {
    case StepRule::exp: return "exp";
    case StepRule::exp_mix: return "exp-mix";
    case StepRule::term: return "term";
    }
    return "?";
}

struct LOStep {
    StepRule rule;
    LOMethod method;
    Multiset<Atom> consumed;
    Multiset<Atom> produced;
};

struct LOTrace {
    std::vector<LOStep> steps;
};

struct DirectedGraph {
    std::vector<std::string> vertices;
    // Ordered pairs; repeated pairs are parallel edges.
    std::vector<std::pair<std::string, std::string>> edges;

    bool has_vertex(const std::string& v) const {
        return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
    }

    void add_vertex(const std::string& v) {
        if (!has_vertex(v)) {
            vertices.push_back(v);
        }
    }

    void add_edge(const std::string& from, const std::string& to) {
        add_vertex(from);
        add_vertex(to);
        edges.emplace_back(from, to);
    }
};

// One method per vertex: head = (out-degree + 1) copies of the vertex atom, body = its parents.
inline std::vector<LOMethod> encode_graph(const DirectedGraph& g) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        index.emplace(g.vertices[i], i);
    }
    std::vector<LOMethod> methods(g.vertices.size());
    std::vector<std::size_t> out_degree(g.vertices.size(), 0);
    for (const auto& [from, to] : g.edges) {
        auto f = index.find(from);
        auto t = index.find(to);
        if (f == index.end() || t == index.end()) {
            throw Error(Errc::shape_mismatch, "edge endpoint is not a declared vertex");
        }
        ++out_degree[f->second];
        methods[t->second].body.add(from);
    }
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        methods[i].head.add(g.vertices[i], out_degree[i] + 1);
    }
    return methods;
}

// The initial state of the acyclicity check: the encoding plus one atom per vertex.
inline LOState encoded_state(const DirectedGraph& g) {
    LOState s;
    for (auto& m : encode_graph(g)) {
        s.program.add(m);
    }
    for (const auto& v : g.vertices) {
        s.goal.add(v);
    }
    return s;
}

// Bipole translation of a state: one formula per method, one atom per goal item.
inline kernel::Sequent state_sequent(const LOState& s) {
    kernel::Sequent out;
    for (const auto& [m, copies] : s.program) {
        out.add(m.bipole().formula(), copies);
    }
    for (const auto& [a, copies] : s.goal) {
        out.add(kernel::Formula::atom(a), copies);
    }
    return out;
}

inline StepRule classify(const LOMethod& m, const LOState& after) {
    if (after.success()) {
        return StepRule::term;
    }
    return m.body.empty() ? StepRule::exp_mix : StepRule::exp;
}

inline std::pair<LOState, LOStep> lo_step_traced(const LOState& s, const LOMethod& m) {
    if (s.program.count(m) == 0) {
        throw Error(Errc::method_not_in_program, to_string(m));
    }
    if (!s.goal.contains(m.head)) {
        throw Error(Errc::method_not_applicable, "head of " + to_string(m) + " is not contained in the goal");
    }
    LOState next = s;
    next.program.remove(m);
    next.goal -= m.head;
    next.goal += m.body;
    LOStep step{classify(m, next), m, m.head, m.body};
    return {std::move(next), std::move(step)};
}

inline LOState lo_step(const LOState& s, const LOMethod& m) { return lo_step_traced(s, m).first; }

inline LOState replay(LOState s, const LOTrace& trace) {
    for (const auto& step : trace.steps) {
        s = lo_step(s, step.method);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Saturation

enum class Schedule { lexicographic, fifo, random };

struct SaturationOptions {
    Schedule schedule = Schedule::lexicographic;
    std::uint64_t seed = 0;
};

struct SaturationResult {
    LOState final_state;
    LOTrace trace;
    bool success = false;
};

namespace detail {

// Applies applicable methods until none is left. Each method keeps a counter of missing
// head copies, updated only when an atom in its head changes count, so the total work
// on graph encodings is linear in the size of the encoding (with the fifo schedule).
class Saturator {
public:
    Saturator(const LOState& s, SaturationOptions options) : options_(options), rng_(options.seed) {
        for (const auto& [m, copies] : s.program) {
            for (std::size_t i = 0; i < copies; ++i) {
                methods_.push_back(&m);
            }
        }
        // Multiset iteration is already in tie-break order, so slot index is the rank.
        for (const auto& [a, copies] : s.goal) {
            goal_[a] = copies;
        }
        missing_.assign(methods_.size(), 0);
        used_.assign(methods_.size(), false);
        queued_.assign(methods_.size(), false);
        for (std::size_t slot = 0; slot < methods_.size(); ++slot) {
            for (const auto& [a, need] : methods_[slot]->head) {
                watchers_[a].push_back(slot);
            }
        }
        for (std::size_t slot = 0; slot < methods_.size(); ++slot) {
            refresh(slot);
        }
        remaining_ = methods_.size();
    }

    SaturationResult run() {
        SaturationResult result;
        while (auto slot = next()) {
            apply(*slot, result.trace);
        }
        for (std::size_t slot = 0; slot < methods_.size(); ++slot) {
            if (!used_[slot]) {
                result.final_state.program.add(*methods_[slot]);
            }
        }
        for (const auto& [a, copies] : goal_) {
            result.final_state.goal.add(a, copies);
        }
        result.success = result.final_state.success();
        return result;
    }

private:
    void refresh(std::size_t slot) {
        if (used_[slot]) {
            return;
        }
        std::size_t missing = 0;
        for (const auto& [a, need] : methods_[slot]->head) {
            auto it = goal_.find(a);
            std::size_t have = it == goal_.end() ? 0 : it->second;
            if (have < need) {
                missing += need - have;
            }
        }
        missing_[slot] = missing;
        if (missing == 0 && !queued_[slot]) {
            queued_[slot] = true;
            push(slot);
        }
    }

    void push(std::size_t slot) {
        switch (options_.schedule) {
        case Schedule::lexicographic: ordered_.insert(slot); break;
        case Schedule::fifo: fifo_.push_back(slot); break;
        case Schedule::random: pool_.push_back(slot); break;
        }
    }

    std::optional<std::size_t> pop() {
        switch (options_.schedule) {
        case Schedule::lexicographic:
            if (ordered_.empty()) {
                return std::nullopt;
            } else {
                std::size_t slot = *ordered_.begin();
                ordered_.erase(ordered_.begin());
                return slot;
            }
        case Schedule::fifo:
            if (fifo_.empty()) {
                return std::nullopt;
            } else {
                std::size_t slot = fifo_.front();
                fifo_.pop_front();
                return slot;
            }
        case Schedule::random:
            if (pool_.empty()) {
                return std::nullopt;
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
                std::size_t i = pick(rng_);
                std::size_t slot = pool_[i];
                pool_[i] = pool_.back();
                pool_.pop_back();
                return slot;
            }
        }
        return std::nullopt;
    }

    std::optional<std::size_t> next() {
        while (auto slot = pop()) {
            queued_[*slot] = false;
            if (!used_[*slot] && missing_[*slot] == 0) {
                return slot;
            }
        }
        return std::nullopt;
    }

    void change(const Atom& a, long delta) {
        auto& count = goal_[a];
        count = static_cast<std::size_t>(static_cast<long>(count) + delta);
        if (count == 0) {
            goal_.erase(a);
        }
        if (auto it = watchers_.find(a); it != watchers_.end()) {
            for (std::size_t slot : it->second) {
                refresh(slot);
            }
        }
    }

    void apply(std::size_t slot, LOTrace& trace) {
        const LOMethod& m = *methods_[slot];
        used_[slot] = true;
        --remaining_;
        for (const auto& [a, copies] : m.head) {
            change(a, -static_cast<long>(copies));
        }
        for (const auto& [a, copies] : m.body) {
            change(a, static_cast<long>(copies));
        }
        StepRule rule = m.body.empty() ? StepRule::exp_mix : StepRule::exp;
        if (remaining_ == 0 && goal_.empty()) {
            rule = StepRule::term;
        }
        trace.steps.push_back({rule, m, m.head, m.body});
    }

    SaturationOptions options_;
    std::mt19937_64 rng_;
    std::vector<const LOMethod*> methods_;
    std::unordered_map<Atom, std::size_t> goal_;
    std::unordered_map<Atom, std::vector<std::size_t>> watchers_;
    std::vector<std::size_t> missing_;
    std::vector<bool> used_;
    std::vector<bool> queued_;
    std::set<std::size_t> ordered_;
    std::deque<std::size_t> fifo_;
    std::vector<std::size_t> pool_;
    std::size_t remaining_ = 0;
};

} // namespace detail

// Never fails: a stuck state is returned with success == false.
inline SaturationResult lo_run_saturating(const LOState& s, SaturationOptions options = {}) {
    return detail::Saturator(s, options).run();
}

inline SaturationResult acyclicity_run(const DirectedGraph& g, SaturationOptions options = {Schedule::fifo, 0}) {
    return lo_run_saturating(encoded_state(g), options);
}

// True iff the graph has no directed cycle. O(|V| + |E|).
inline bool decide_acyclic(const DirectedGraph& g) { return acyclicity_run(g).success; }

// ---------------------------------------------------------------------------
// Backtracking search

struct LOSearchResult {
    std::vector<LOTrace> traces;
    bool limit_exceeded = false;
};

namespace detail {

class LOSearcher {
public:
    explicit LOSearcher(std::size_t depth_limit) : depth_limit_(depth_limit) {}

    LOSearchResult run(const LOState& s) {
        std::vector<LOStep> path;
        explore(s, path);
        return std::move(result_);
    }

private:
    // Returns true if the subtree was explored without hitting the depth limit.
    bool explore(const LOState& s, std::vector<LOStep>& path) {
        if (s.success()) {
            record(path);
            return true;
        }
        if (s.program.empty() || s.goal.empty()) {
            return true;
        }
        // Every completion from a revisited state uses the same methods as before,
        // so it could only add traces that differ by step order.
        if (done_.count(s)) {
            return true;
        }
        if (path.size() >= depth_limit_) {
            result_.limit_exceeded = true;
            return false;
        }
        bool complete = true;
        for (const auto& [m, copies] : s.program) {
            if (!s.goal.contains(m.head)) {
                continue;
            }
            auto [next, step] = lo_step_traced(s, m);
            path.push_back(std::move(step));
            complete = explore(next, path) && complete;
            path.pop_back();
        }
        if (complete) {
            done_.insert(s);
        }
        return complete;
    }

    void record(const std::vector<LOStep>& path) {
        std::vector<LOMethod> used;
        for (const auto& step : path) {
            used.push_back(step.method);
        }
        std::sort(used.begin(), used.end());
        if (seen_.insert(used).second) {
            result_.traces.push_back(LOTrace{path});
        }
    }

    std::size_t depth_limit_;
    LOSearchResult result_;
    std::set<LOState> done_;
    std::set<std::vector<LOMethod>> seen_;
};

} // namespace detail

// All successful traces (up to step reordering), in deterministic order.
inline LOSearchResult lo_search(const LOState& s, std::size_t depth_limit) {
    return detail::LOSearcher(depth_limit).run(s);
}

} // namespace problo::lo
