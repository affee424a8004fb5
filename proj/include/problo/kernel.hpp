#pragma once

#include "problo/error.hpp"
#include "problo/multiset.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// MALL with mix: formulas in negation normal form, multiset sequents, derivation
// checking and a bounded exhaustive prover.
namespace problo::kernel {

enum class Connective { atom, neg_atom, tensor, par, with, plus };

class Formula {
public:
    static Formula atom(std::string name) { return Formula(make_leaf(Connective::atom, std::move(name))); }
    static Formula neg(std::string name) { return Formula(make_leaf(Connective::neg_atom, std::move(name))); }
    static Formula tensor(Formula a, Formula b) { return binary(Connective::tensor, std::move(a), std::move(b)); }
    static Formula par(Formula a, Formula b) { return binary(Connective::par, std::move(a), std::move(b)); }
    static Formula with(Formula a, Formula b) { return binary(Connective::with, std::move(a), std::move(b)); }
    static Formula plus(Formula a, Formula b) { return binary(Connective::plus, std::move(a), std::move(b)); }

    Connective kind() const { return node_->kind; }
    bool is_literal() const { return kind() == Connective::atom || kind() == Connective::neg_atom; }
    bool is_binary() const { return !is_literal(); }

    // Precondition: is_literal().
    const std::string& name() const { return node_->name; }
    // Precondition: is_binary().
    const Formula& left() const { return *node_->left; }
    const Formula& right() const { return *node_->right; }

    std::size_t atom_count() const { return node_->atoms; }
    bool additive_free() const { return node_->additive_free; }
    // Per atom name: positive occurrences minus negative occurrences.
    const std::map<std::string, int>& charge() const { return node_->charge; }

    friend int compare(const Formula& a, const Formula& b) {
        if (a.node_ == b.node_) {
            return 0;
        }
        if (a.kind() != b.kind()) {
            return a.kind() < b.kind() ? -1 : 1;
        }
        if (a.is_literal()) {
            return a.name().compare(b.name());
        }
        if (int c = compare(a.left(), b.left()); c != 0) {
            return c;
        }
        return compare(a.right(), b.right());
    }

    friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Formula& a, const Formula& b) { return compare(a, b) != 0; }
    friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

private:
    struct Node {
        Connective kind;
        std::string name;
        std::shared_ptr<const Formula> left;
        std::shared_ptr<const Formula> right;
        std::size_t atoms = 1;
        bool additive_free = true;
        std::map<std::string, int> charge;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const Node> make_leaf(Connective kind, std::string name) {
        if (name.empty()) {
            throw Error(Errc::parse_error, "atom names must be non-empty");
        }
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->name = std::move(name);
        node->charge[node->name] = kind == Connective::atom ? 1 : -1;
        return node;
    }

    static Formula binary(Connective kind, Formula a, Formula b) {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->atoms = a.atom_count() + b.atom_count();
        node->additive_free = a.additive_free() && b.additive_free()
                              && kind != Connective::with && kind != Connective::plus;
        node->charge = a.charge();
        for (const auto& [name, value] : b.charge()) {
            if ((node->charge[name] += value) == 0) {
                node->charge.erase(name);
            }
        }
        node->left = std::make_shared<const Formula>(std::move(a));
        node->right = std::make_shared<const Formula>(std::move(b));
        return Formula(std::move(node));
    }

    std::shared_ptr<const Node> node_;
};

using Sequent = Multiset<Formula>;

// De Morgan dual.
inline Formula negate(const Formula& f) {
    switch (f.kind()) {
    case Connective::atom: return Formula::neg(f.name());
    case Connective::neg_atom: return Formula::atom(f.name());
    case Connective::tensor: return Formula::par(negate(f.left()), negate(f.right()));
    case Connective::par: return Formula::tensor(negate(f.left()), negate(f.right()));
    case Connective::with: return Formula::plus(negate(f.left()), negate(f.right()));
    case Connective::plus: return Formula::with(negate(f.left()), negate(f.right()));
    }
    return f;
}

inline int precedence(Connective c) {
    switch (c) {
    case Connective::plus: return 1;
    case Connective::par: return 2;
    case Connective::with: return 3;
    case Connective::tensor: return 4;
    default: return 5;
    }
}

inline const char* symbol(Connective c) {
    switch (c) {
    case Connective::tensor: return "*";
    case Connective::par: return "|";
    case Connective::with: return "&";
    case Connective::plus: return "+";
    default: return "";
    }
}

// Binary connectives are right-associative; `*` binds tightest, then `&`, `|`, `+`.
inline std::string to_string(const Formula& f) {
    if (f.kind() == Connective::atom) {
        return f.name();
    }
    if (f.kind() == Connective::neg_atom) {
        return "~" + f.name();
    }
    int own = precedence(f.kind());
    std::string lhs = to_string(f.left());
    std::string rhs = to_string(f.right());
    if (precedence(f.left().kind()) <= own) {
        lhs = "(" + lhs + ")";
    }
    if (precedence(f.right().kind()) < own) {
        rhs = "(" + rhs + ")";
    }
    return lhs + " " + symbol(f.kind()) + " " + rhs;
}

inline std::string to_string(const Sequent& s) {
    std::string out = "|-";
    bool first = true;
    for (const auto& f : s.elements()) {
        out += first ? " " : ", ";
        out += to_string(f);
        first = false;
    }
    return out;
}

inline std::size_t atom_count(const Sequent& s) {
    std::size_t total = 0;
    for (const auto& [f, copies] : s) {
        total += f.atom_count() * copies;
    }
    return total;
}

// Right-nested chain f1 op (f2 op (... op fn)). Precondition: non-empty.
inline Formula right_nested(Connective op, const std::vector<Formula>& parts) {
    Formula acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) {
        switch (op) {
        case Connective::tensor: acc = Formula::tensor(parts[i], acc); break;
        case Connective::par: acc = Formula::par(parts[i], acc); break;
        case Connective::with: acc = Formula::with(parts[i], acc); break;
        case Connective::plus: acc = Formula::plus(parts[i], acc); break;
        default: throw Error(Errc::shape_mismatch, "right_nested needs a binary connective");
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Derivations

// `hyp` marks an open premise of a derivation schema; it is not an inference rule.
enum class Rule { ax, tensor, par, with, plus1, plus2, mix, hyp };

inline const char* to_string(Rule r) {
    switch (r) {
    case Rule::ax: return "AX";
    case Rule::tensor: return "tensor";
    case Rule::par: return "par";
    case Rule::with: return "with";
    case Rule::plus1: return "plus1";
    case Rule::plus2: return "plus2";
    case Rule::mix: return "mix";
    case Rule::hyp: return "hyp";
    }
    return "?";
}

inline std::size_t arity(Rule r) {
    switch (r) {
    case Rule::ax:
    case Rule::hyp: return 0;
    case Rule::par:
    case Rule::plus1:
    case Rule::plus2: return 1;
    case Rule::tensor:
    case Rule::with:
    case Rule::mix: return 2;
    }
    return 0;
}

struct Derivation {
    Sequent conclusion;
    Rule rule = Rule::hyp;
    std::optional<Formula> principal;
    std::vector<Derivation> premises;

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& p : premises) {
            n += p.size();
        }
        return n;
    }
};

inline Derivation make_hyp(Sequent s) { return {std::move(s), Rule::hyp, std::nullopt, {}}; }

inline Derivation make_ax(const std::string& atom) {
    return {Sequent{Formula::atom(atom), Formula::neg(atom)}, Rule::ax, Formula::atom(atom), {}};
}

inline Derivation make_mix(Derivation a, Derivation b) {
    Sequent conclusion = a.conclusion + b.conclusion;
    return {std::move(conclusion), Rule::mix, std::nullopt, {std::move(a), std::move(b)}};
}

struct ValidityReport {
    bool valid = true;
    // Premise indices from the root to the offending node.
    std::vector<std::size_t> path;
    std::optional<Rule> rule;
    std::string message;
    std::size_t open_leaves = 0;

    bool closed() const { return valid && open_leaves == 0; }
};

namespace detail {

inline bool check_node(const Derivation& d, std::string& why) {
    if (d.premises.size() != arity(d.rule)) {
        why = "arity mismatch: expected " + std::to_string(arity(d.rule)) + " premises";
        return false;
    }
    if (d.rule == Rule::hyp) {
        return true;
    }
    if (d.rule == Rule::ax) {
        if (d.conclusion.size() != 2 || d.conclusion.distinct() != 2) {
            why = "axiom conclusion must be exactly {a, ~a}";
            return false;
        }
        auto elems = d.conclusion.elements();
        const Formula& x = elems[0];
        const Formula& y = elems[1];
        if (!x.is_literal() || !y.is_literal() || x.name() != y.name() || x.kind() == y.kind()) {
            why = "axiom conclusion must be exactly {a, ~a}";
            return false;
        }
        return true;
    }
    if (d.rule == Rule::mix) {
        if (d.premises[0].conclusion + d.premises[1].conclusion != d.conclusion) {
            why = "mix premises do not partition the conclusion";
            return false;
        }
        return true;
    }
    if (!d.principal) {
        why = "missing principal formula";
        return false;
    }
    const Formula& f = *d.principal;
    if (d.conclusion.count(f) == 0) {
        why = "principal formula not in conclusion";
        return false;
    }
    Sequent context = d.conclusion;
    context.remove(f);
    auto expect_kind = [&](Connective c) {
        if (f.kind() != c) {
            why = std::string("principal formula is not a ") + symbol(c) + " formula";
            return false;
        }
        return true;
    };
    switch (d.rule) {
    case Rule::par: {
        if (!expect_kind(Connective::par)) {
            return false;
        }
        if (d.premises[0].conclusion != context + Sequent{f.left(), f.right()}) {
            why = "par premise must be the context with both subformulas";
            return false;
        }
        return true;
    }
    case Rule::tensor: {
        if (!expect_kind(Connective::tensor)) {
            return false;
        }
        Sequent lhs = d.premises[0].conclusion;
        Sequent rhs = d.premises[1].conclusion;
        if (!lhs.remove(f.left()) || !rhs.remove(f.right())) {
            why = "tensor premises must contain the left and right subformulas";
            return false;
        }
        if (lhs + rhs != context) {
            why = "context-split: tensor premise contexts do not partition the conclusion context";
            return false;
        }
        return true;
    }
    case Rule::with: {
        if (!expect_kind(Connective::with)) {
            return false;
        }
        if (d.premises[0].conclusion != context + Sequent{f.left()}
            || d.premises[1].conclusion != context + Sequent{f.right()}) {
            why = "with premises must each be the full context with one subformula";
            return false;
        }
        return true;
    }
    case Rule::plus1:
    case Rule::plus2: {
        if (!expect_kind(Connective::plus)) {
            return false;
        }
        const Formula& chosen = d.rule == Rule::plus1 ? f.left() : f.right();
        if (d.premises[0].conclusion != context + Sequent{chosen}) {
            why = "plus premise must be the context with the selected subformula";
            return false;
        }
        return true;
    }
    default: break;
    }
    why = "unknown rule";
    return false;
}

inline void check_rec(const Derivation& d, std::vector<std::size_t>& path, ValidityReport& report) {
    if (!report.valid) {
        return;
    }
    std::string why;
    if (!check_node(d, why)) {
        report.valid = false;
        report.path = path;
        report.rule = d.rule;
        report.message = why;
        return;
    }
    if (d.rule == Rule::hyp) {
        ++report.open_leaves;
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        path.push_back(i);
        check_rec(d.premises[i], path, report);
        path.pop_back();
    }
}

} // namespace detail

inline ValidityReport check_derivation(const Derivation& d) {
    ValidityReport report;
    std::vector<std::size_t> path;
    detail::check_rec(d, path, report);
    return report;
}

// ---------------------------------------------------------------------------
// Bounded exhaustive prover

namespace detail {

class Prover {
public:
    std::optional<Derivation> run(const Sequent& goal) {
        if (!search(goal)) {
            return std::nullopt;
        }
        return build(goal);
    }

private:
    struct Step {
        Rule rule;
        Formula principal;
        std::vector<Sequent> premises;
    };

    static bool all_literals(const Sequent& s) {
        for (const auto& [f, copies] : s) {
            if (!f.is_literal()) {
                return false;
            }
        }
        return true;
    }

    static bool additive_free(const Sequent& s) {
        for (const auto& [f, copies] : s) {
            if (!f.additive_free()) {
                return false;
            }
        }
        return true;
    }

    static std::map<std::string, long> charge(const Sequent& s) {
        std::map<std::string, long> total;
        for (const auto& [f, copies] : s) {
            for (const auto& [name, value] : f.charge()) {
                total[name] += static_cast<long>(value) * static_cast<long>(copies);
            }
        }
        for (auto it = total.begin(); it != total.end();) {
            it = it->second == 0 ? total.erase(it) : std::next(it);
        }
        return total;
    }

    // A multiset of literals is provable iff it is non-empty and every atom is matched
    // by its dual (mix of axioms).
    static bool literals_provable(const Sequent& s) { return !s.empty() && charge(s).empty(); }

    bool search(const Sequent& s) {
        if (auto it = memo_.find(s); it != memo_.end()) {
            return it->second.has_value();
        }
        std::optional<Step> step = expand(s);
        bool ok = step.has_value() || (all_literals(s) && literals_provable(s));
        if (!ok) {
            memo_.emplace(s, std::nullopt);
        } else if (step) {
            memo_.emplace(s, std::move(step));
        } else {
            memo_.emplace(s, Step{Rule::ax, Formula::atom("_"), {}});
        }
        return ok;
    }

    std::optional<Step> expand(const Sequent& s) {
        if (s.empty() || all_literals(s)) {
            return std::nullopt;
        }
        bool mll = additive_free(s);
        if (mll && !charge(s).empty()) {
            return std::nullopt;
        }
        // Par and with are invertible: apply the first one eagerly.
        for (const auto& [f, copies] : s) {
            if (f.kind() == Connective::par) {
                Sequent premise = s;
                premise.remove(f);
                premise.add(f.left());
                premise.add(f.right());
                if (search(premise)) {
                    return Step{Rule::par, f, {premise}};
                }
                return std::nullopt;
            }
            if (f.kind() == Connective::with) {
                Sequent context = s;
                context.remove(f);
                Sequent a = context + Sequent{f.left()};
                Sequent b = context + Sequent{f.right()};
                if (search(a) && search(b)) {
                    return Step{Rule::with, f, {a, b}};
                }
                return std::nullopt;
            }
        }
        // Mix permutes above every logical rule, so it is only needed on literal-only
        // sequents; the remaining choices are tensor splits and plus selections.
        for (const auto& [f, copies] : s) {
            if (f.kind() == Connective::plus) {
                Sequent context = s;
                context.remove(f);
                Sequent a = context + Sequent{f.left()};
                if (search(a)) {
                    return Step{Rule::plus1, f, {a}};
                }
                Sequent b = context + Sequent{f.right()};
                if (search(b)) {
                    return Step{Rule::plus2, f, {b}};
                }
            } else if (f.kind() == Connective::tensor) {
                Sequent context = s;
                context.remove(f);
                if (auto split = split_tensor(f, context, mll)) {
                    return split;
                }
            }
        }
        return std::nullopt;
    }

    std::optional<Step> split_tensor(const Formula& f, const Sequent& context, bool mll) {
        std::vector<std::pair<Formula, std::size_t>> items(context.begin(), context.end());
        std::vector<std::size_t> chosen(items.size(), 0);
        std::map<std::string, long> target;
        if (mll) {
            for (const auto& [name, value] : f.left().charge()) {
                target[name] = -value;
            }
        }
        std::optional<Step> found;
        // Enumerate sub-multisets of the context for the left premise.
        auto recurse = [&](auto&& self, std::size_t index, std::map<std::string, long>& acc) -> bool {
            if (index == items.size()) {
                if (mll) {
                    for (auto it = acc.begin(); it != acc.end();) {
                        it = it->second == 0 ? acc.erase(it) : std::next(it);
                    }
                    if (acc != target) {
                        return false;
                    }
                }
                Sequent lhs{f.left()};
                Sequent rhs{f.right()};
                for (std::size_t i = 0; i < items.size(); ++i) {
                    lhs.add(items[i].first, chosen[i]);
                    rhs.add(items[i].first, items[i].second - chosen[i]);
                }
                if (search(lhs) && search(rhs)) {
                    found = Step{Rule::tensor, f, {lhs, rhs}};
                    return true;
                }
                return false;
            }
            for (std::size_t k = 0; k <= items[index].second; ++k) {
                chosen[index] = k;
                std::map<std::string, long> next = acc;
                if (mll) {
                    for (const auto& [name, value] : items[index].first.charge()) {
                        next[name] += static_cast<long>(value) * static_cast<long>(k);
                    }
                }
                if (self(self, index + 1, next)) {
                    return true;
                }
            }
            return false;
        };
        std::map<std::string, long> acc;
        recurse(recurse, 0, acc);
        return found;
    }

    static Derivation build_literals(const Sequent& s) {
        // Pair each atom with one dual, combine the axioms with mix.
        std::vector<Derivation> axioms;
        for (const auto& [f, copies] : s) {
            if (f.kind() == Connective::atom) {
                for (std::size_t i = 0; i < copies; ++i) {
                    axioms.push_back(make_ax(f.name()));
                }
            }
        }
        Derivation acc = std::move(axioms.back());
        axioms.pop_back();
        while (!axioms.empty()) {
            acc = make_mix(std::move(axioms.back()), std::move(acc));
            axioms.pop_back();
        }
        return acc;
    }

    Derivation build(const Sequent& s) const {
        if (all_literals(s)) {
            return build_literals(s);
        }
        const Step& step = *memo_.at(s);
        Derivation d{s, step.rule, step.principal, {}};
        for (const auto& premise : step.premises) {
            d.premises.push_back(build(premise));
        }
        return d;
    }

    std::map<Sequent, std::optional<Step>> memo_;
};

} // namespace detail

// Decides provability in MALL+mix, returning a derivation when one exists.
// Throws Errc::cap_exceeded when the sequent has more than `max_atoms` atom occurrences.
inline std::optional<Derivation> prove_bounded(const Sequent& s, std::size_t max_atoms = 16) {
    if (atom_count(s) > max_atoms) {
        throw Error(Errc::cap_exceeded, "sequent has " + std::to_string(atom_count(s))
                                            + " atom occurrences, cap is " + std::to_string(max_atoms));
    }
    detail::Prover prover;
    return prover.run(s);
}

// ---------------------------------------------------------------------------
// Bipoles and synthetic rules

struct Bipole {
    Multiset<std::string> head;
    Multiset<std::string> body;

    bool degenerate() const { return body.empty(); }

    // Tensor of negated head atoms.
    Formula positive_monopole() const {
        if (head.empty()) {
            throw Error(Errc::shape_mismatch, "bipole head must be non-empty");
        }
        std::vector<Formula> parts;
        for (const auto& h : head.elements()) {
            parts.push_back(Formula::neg(h));
        }
        return right_nested(Connective::tensor, parts);
    }

    // Par of body atoms. Precondition: !degenerate().
    Formula negative_monopole() const {
        std::vector<Formula> parts;
        for (const auto& b : body.elements()) {
            parts.push_back(Formula::atom(b));
        }
        return right_nested(Connective::par, parts);
    }

    Formula formula() const {
        if (degenerate()) {
            return positive_monopole();
        }
        return Formula::tensor(positive_monopole(), negative_monopole());
    }

    Sequent head_atoms() const {
        Sequent s;
        for (const auto& [h, copies] : head) {
            s.add(Formula::atom(h), copies);
        }
        return s;
    }

    friend bool operator==(const Bipole& a, const Bipole& b) { return a.head == b.head && a.body == b.body; }
};

namespace detail {

// |- ~h1 * (... * ~hn), h1, ..., hn by tensors over axioms.
inline Derivation positive_phase(const std::vector<std::string>& heads, std::size_t from = 0) {
    if (from + 1 == heads.size()) {
        return make_ax(heads[from]);
    }
    std::vector<Formula> parts;
    Sequent conclusion;
    for (std::size_t i = from; i < heads.size(); ++i) {
        parts.push_back(Formula::neg(heads[i]));
        conclusion.add(Formula::atom(heads[i]));
    }
    Formula principal = right_nested(Connective::tensor, parts);
    conclusion.add(principal);
    Derivation d{conclusion, Rule::tensor, principal, {}};
    d.premises.push_back(make_ax(heads[from]));
    d.premises.push_back(positive_phase(heads, from + 1));
    return d;
}

// |- ctx, b1 | (... | bm) by pars down to the open premise |- ctx, b1, ..., bm.
inline Derivation negative_phase(const Sequent& context, const std::vector<std::string>& body, std::size_t from = 0) {
    if (from + 1 == body.size()) {
        return make_hyp(context + Sequent{Formula::atom(body[from])});
    }
    std::vector<Formula> parts;
    for (std::size_t i = from; i < body.size(); ++i) {
        parts.push_back(Formula::atom(body[i]));
    }
    Formula principal = right_nested(Connective::par, parts);
    Sequent premise_context = context;
    premise_context.add(Formula::atom(body[from]));
    Derivation d{context + Sequent{principal}, Rule::par, principal, {}};
    d.premises.push_back(negative_phase(premise_context, body, from + 1));
    return d;
}

} // namespace detail

// Open derivation of the synthetic rule of `b` with context `context`:
//   non-degenerate:      |- ctx, P * N, h1..hn   from   |- ctx, b1..bm
//   degenerate, leaf:    |- P, h1..hn            (closed; requires empty context)
//   degenerate, inner:   |- ctx, P, h1..hn       from   |- ctx   (via mix)
inline Derivation synthetic_rule_derivation(const Bipole& b, const Sequent& context, bool degenerate_leaf) {
    if (b.head.empty()) {
        throw Error(Errc::shape_mismatch, "bipole head must be non-empty");
    }
    std::vector<std::string> heads = b.head.elements();
    if (degenerate_leaf) {
        if (!b.degenerate()) {
            throw Error(Errc::shape_mismatch, "leaf schema requires an empty body");
        }
        if (!context.empty()) {
            throw Error(Errc::shape_mismatch, "leaf schema requires an empty context");
        }
        return detail::positive_phase(heads);
    }
    if (b.degenerate()) {
        if (context.empty()) {
            throw Error(Errc::shape_mismatch, "degenerate bipole with empty context must use the leaf schema");
        }
        return make_mix(make_hyp(context), detail::positive_phase(heads));
    }
    Formula principal = b.formula();
    Sequent conclusion = context + b.head_atoms();
    conclusion.add(principal);
    Derivation d{conclusion, Rule::tensor, principal, {}};
    d.premises.push_back(detail::positive_phase(heads));
    d.premises.push_back(detail::negative_phase(context, b.body.elements()));
    return d;
}

// Right-nested additive disjunction of the alternatives' bipole formulas.
inline Formula table_formula(const std::vector<Bipole>& alternatives) {
    std::vector<Formula> parts;
    for (const auto& b : alternatives) {
        parts.push_back(b.formula());
    }
    return right_nested(Connective::plus, parts);
}

// Selects alternative `chosen_index` (1-based) by plus steps, then applies its synthetic rule.
inline Derivation table_rule_derivation(const std::vector<Bipole>& alternatives, std::size_t chosen_index,
                                        const Sequent& context) {
    if (alternatives.empty() || chosen_index < 1 || chosen_index > alternatives.size()) {
        throw Error(Errc::index_out_of_range, "alternative index " + std::to_string(chosen_index) + " out of range");
    }
    for (const auto& b : alternatives) {
        if (b.head != alternatives.front().head) {
            throw Error(Errc::heads_not_uniform, "table alternatives must share the same head");
        }
    }
    const Bipole& chosen = alternatives[chosen_index - 1];
    Derivation top = synthetic_rule_derivation(chosen, context, chosen.degenerate() && context.empty());

    std::vector<Formula> parts;
    for (const auto& b : alternatives) {
        parts.push_back(b.formula());
    }
    Sequent base = context + chosen.head_atoms();
    auto suffix = [&](std::size_t from) {
        return right_nested(Connective::plus, std::vector<Formula>(parts.begin() + static_cast<std::ptrdiff_t>(from),
                                                                   parts.end()));
    };
    auto wrap = [&](Derivation premise, Rule rule, std::size_t level) {
        Formula principal = suffix(level);
        Derivation d{base + Sequent{principal}, rule, principal, {}};
        d.premises.push_back(std::move(premise));
        return d;
    };
    // Innermost step first: plus1 picks the chosen alternative (the last one needs none),
    // then one plus2 per alternative skipped on the way down the right spine.
    std::size_t index = chosen_index - 1;
    Derivation acc = std::move(top);
    if (index + 1 < alternatives.size()) {
        acc = wrap(std::move(acc), Rule::plus1, index);
    }
    for (std::size_t level = index; level-- > 0;) {
        acc = wrap(std::move(acc), Rule::plus2, level);
    }
    return acc;
}

} // namespace problo::kernel
