#pragma once

#include "problo/bayes.hpp"
#include "problo/engine.hpp"
#include "problo/kernel.hpp"
#include "problo/lang/lexer.hpp"
#include "problo/lo.hpp"
#include "problo/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace problo::lang {

namespace detail {

inline std::vector<Token> lex(std::string_view text, const std::string& file, std::vector<Diagnostic>& diagnostics,
                              bool newlines = false) {
    Lexer lexer(text, file, newlines);
    return lexer.tokenize(diagnostics);
}

inline Probability read_probability(TokenStream& ts) {
    if (ts.peek().kind != Tok::number) {
        ts.fail("expected a probability" + ts.found());
    }
    const Token& t = ts.next();
    auto p = parse_probability(t.text);
    if (!p) {
        ts.fail_at(t.span, "malformed number '" + t.text + "'");
    }
    return *p;
}

inline Polarity read_polarity(TokenStream& ts) {
    if (ts.is_word("t")) {
        ts.next();
        return Polarity::True;
    }
    if (ts.is_word("f")) {
        ts.next();
        return Polarity::False;
    }
    ts.fail("expected 't' or 'f'" + ts.found());
}

// `Var=t` or `Var=f`.
inline std::pair<BoolAtom, SourceSpan> read_atom(TokenStream& ts) {
    const Token& name = ts.expect_ident("a variable name");
    SourceSpan span = name.span;
    std::string var = name.text;
    ts.expect("=");
    Polarity pol = read_polarity(ts);
    span.length = var.size() + 2;
    return {BoolAtom{var, pol}, span};
}

template <class T, class Body>
ParseResult<T> run_parser(std::vector<Diagnostic> diagnostics, std::vector<Token> tokens, Body body) {
    ParseResult<T> result;
    bool lex_failed = !diagnostics.empty();
    TokenStream ts(std::move(tokens), diagnostics);
    try {
        T value = body(ts);
        if (!lex_failed) {
            result.value = std::move(value);
        }
    } catch (const TokenStream::Abort&) {
    }
    result.diagnostics = std::move(diagnostics);
    return result;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Networks

inline ParseResult<bayes::BayesNet> parse_bn(std::string_view text, const std::string& file = "") {
    std::vector<Diagnostic> diagnostics;
    auto tokens = detail::lex(text, file, diagnostics);
    return detail::run_parser<bayes::BayesNet>(std::move(diagnostics), std::move(tokens), [&](TokenStream& ts) {
        bayes::BayesNet bn;
        if (ts.at_end()) {
            ts.fail("missing network declaration");
        }
        ts.expect_word("network");
        bn.name = ts.expect_ident("a network name").text;
        ts.expect("{");
        std::map<std::string, SourceSpan> declared;
        std::set<std::pair<std::string, std::string>> edge_set;
        std::map<std::string, SourceSpan> cpt_spans;
        while (!ts.is("}")) {
            if (ts.at_end()) {
                ts.fail("expected '}' to close the network" + ts.found());
            }
            if (ts.is_word("var")) {
                ts.next();
                do {
                    const Token& name = ts.expect_ident("a variable name");
                    if (declared.count(name.text)) {
                        ts.note(name.span, "variable " + name.text + " declared twice");
                    } else {
                        declared.emplace(name.text, name.span);
                        bn.variables.push_back(name.text);
                    }
                } while (ts.accept(","));
                ts.expect(";");
            } else if (ts.is_word("edge")) {
                ts.next();
                const Token from = ts.expect_ident("a variable name");
                ts.expect("->");
                const Token to = ts.expect_ident("a variable name");
                ts.expect(";");
                bool known = true;
                for (const Token* end : {&from, &to}) {
                    if (!declared.count(end->text)) {
                        ts.note(end->span, "edge endpoint " + end->text + " is not a declared variable");
                        known = false;
                    }
                }
                if (!edge_set.insert({from.text, to.text}).second) {
                    ts.note(from.span, "edge " + from.text + " -> " + to.text + " declared twice");
                } else if (known) {
                    bn.edges.emplace_back(from.text, to.text);
                }
            } else if (ts.is_word("cpt")) {
                ts.next();
                const Token var = ts.expect_ident("a variable name");
                bayes::CPT cpt;
                if (ts.accept("|")) {
                    do {
                        cpt.parents.push_back(ts.expect_ident("a parent name").text);
                    } while (ts.accept(","));
                }
                ts.expect("{");
                while (!ts.is("}")) {
                    SourceSpan row_span = ts.peek().span;
                    std::vector<bool> key;
                    while (ts.is_word("t") || ts.is_word("f")) {
                        key.push_back(ts.next().text == "t");
                    }
                    if (!key.empty() || !cpt.parents.empty()) {
                        ts.expect(":");
                    } else {
                        ts.accept(":");
                    }
                    Probability p_true = detail::read_probability(ts);
                    ts.expect(",");
                    Probability p_false = detail::read_probability(ts);
                    ts.expect(";");
                    if (key.size() != cpt.parents.size()) {
                        ts.note(row_span, "row gives " + std::to_string(key.size()) + " parent values, expected "
                                              + std::to_string(cpt.parents.size()));
                        continue;
                    }
                    if (cpt.rows.count(key)) {
                        ts.note(row_span, "row " + bayes::row_label(cpt, key) + " given twice");
                        continue;
                    }
                    if (!is_probability(p_true) || !is_probability(p_false)) {
                        ts.note(row_span, "row " + bayes::row_label(cpt, key) + " has a value outside [0,1]");
                    }
                    if (p_true + p_false != 1) {
                        ts.note(row_span, "row " + bayes::row_label(cpt, key) + " sums to "
                                              + to_decimal_string(p_true + p_false) + ", not 1");
                    }
                    cpt.rows.emplace(std::move(key), bayes::Row{p_true, p_false});
                }
                ts.expect("}");
                if (!declared.count(var.text)) {
                    ts.note(var.span, "table for undeclared variable " + var.text);
                }
                if (cpt_spans.count(var.text)) {
                    ts.note(var.span, "second table for " + var.text);
                    continue;
                }
                cpt_spans.emplace(var.text, var.span);
                bn.cpts.emplace(var.text, std::move(cpt));
            } else {
                ts.fail("expected 'var', 'edge', 'cpt' or '}'" + ts.found());
            }
        }
        SourceSpan close = ts.expect("}").span;
        if (!ts.at_end()) {
            ts.fail("unexpected input after the network" + ts.found());
        }
        for (const auto& var : bn.variables) {
            auto it = bn.cpts.find(var);
            if (it == bn.cpts.end()) {
                ts.note(declared.at(var), "variable " + var + " has no table");
                continue;
            }
            const auto& cpt = it->second;
            std::set<std::string> listed(cpt.parents.begin(), cpt.parents.end());
            if (listed != bn.parents(var) || listed.size() != cpt.parents.size()) {
                ts.note(cpt_spans.at(var), "table parents of " + var + " differ from its incoming edges");
            }
            std::size_t expected = std::size_t{1} << cpt.parents.size();
            if (cpt.rows.size() != expected) {
                ts.note(cpt_spans.at(var), "table for " + var + " has " + std::to_string(cpt.rows.size())
                                               + " rows, expected " + std::to_string(expected));
            }
        }
        (void)close;
        return bn;
    });
}

// ---------------------------------------------------------------------------
// Programs

inline ParseResult<Program> parse_plo(std::string_view text, const std::string& file = "") {
    std::vector<Diagnostic> diagnostics;
    auto tokens = detail::lex(text, file, diagnostics);
    return detail::run_parser<Program>(std::move(diagnostics), std::move(tokens), [&](TokenStream& ts) {
        Program program;
        std::set<std::string> seen_tables;
        while (!ts.at_end()) {
            if (ts.is_word("table")) {
                ts.next();
                const Token var = ts.expect_ident("a variable name");
                ts.expect(";");
                if (!seen_tables.insert(var.text).second) {
                    ts.note(var.span, "table " + var.text + " declared twice");
                }
                program.tables.push_back({var.text, {}});
                continue;
            }
            SourceSpan start = ts.peek().span;
            Probability prob = detail::read_probability(ts);
            ts.expect("::");
            std::vector<std::pair<BoolAtom, SourceSpan>> head;
            do {
                head.push_back(detail::read_atom(ts));
            } while (ts.accept(","));
            AtomBag body;
            if (ts.accept(":-")) {
                do {
                    body.add(detail::read_atom(ts).first);
                } while (ts.accept(","));
            }
            ts.expect(".");
            for (const auto& [atom, span] : head) {
                if (atom != head.front().first) {
                    ts.fail_at(span, "head atoms of one method must be identical, found " + to_string(head.front().first)
                                         + " and " + to_string(atom));
                }
            }
            if (program.tables.empty()) {
                ts.fail_at(start, "method before any 'table' directive");
            }
            Table& table = program.tables.back();
            const BoolAtom& h = head.front().first;
            if (h.var != table.var) {
                ts.fail_at(head.front().second, "head " + to_string(h) + " is outside table " + table.var);
            }
            if (!is_probability(prob)) {
                ts.note(start, "probability " + to_decimal_string(prob) + " is outside [0,1]");
            }
            table.methods.push_back({method_label(h, body), h, head.size(), std::move(body), prob});
        }
        return program;
    });
}

// ---------------------------------------------------------------------------
// Goals: `C=t, R=t, S=?`

inline ParseResult<Goal> parse_goal(std::string_view text, const std::string& file = "") {
    std::vector<Diagnostic> diagnostics;
    auto tokens = detail::lex(text, file, diagnostics);
    return detail::run_parser<Goal>(std::move(diagnostics), std::move(tokens), [&](TokenStream& ts) {
        Goal goal;
        if (ts.at_end()) {
            return goal;
        }
        do {
            const Token& name = ts.expect_ident("a variable name");
            std::string var = name.text;
            ts.expect("=");
            if (ts.accept("?")) {
                goal.superpositions.add(var);
            } else {
                goal.atoms.add({var, detail::read_polarity(ts)});
            }
        } while (ts.accept(","));
        if (!ts.at_end()) {
            ts.fail("expected ',' between goal items" + ts.found());
        }
        return goal;
    });
}

// ---------------------------------------------------------------------------
// Graphs: `vertex NAME` and `edge NAME NAME`, one per line.

inline ParseResult<lo::DirectedGraph> parse_graph(std::string_view text, const std::string& file = "") {
    std::vector<Diagnostic> diagnostics;
    auto tokens = detail::lex(text, file, diagnostics, true);
    return detail::run_parser<lo::DirectedGraph>(std::move(diagnostics), std::move(tokens), [&](TokenStream& ts) {
        lo::DirectedGraph g;
        std::unordered_set<std::string> known;
        auto touch = [&](const std::string& v) {
            if (known.insert(v).second) {
                g.vertices.push_back(v);
            }
        };
        while (!ts.at_end()) {
            if (ts.peek().kind == Tok::newline) {
                ts.next();
                continue;
            }
            if (ts.is_word("vertex")) {
                ts.next();
                const Token& v = ts.expect_ident("a vertex name");
                if (known.count(v.text)) {
                    ts.warn(v.span, "vertex " + v.text + " declared twice");
                }
                touch(v.text);
            } else if (ts.is_word("edge")) {
                ts.next();
                std::string from = ts.expect_ident("a vertex name").text;
                std::string to = ts.expect_ident("a vertex name").text;
                touch(from);
                touch(to);
                g.edges.emplace_back(std::move(from), std::move(to));
            } else {
                ts.fail("expected 'vertex' or 'edge'" + ts.found());
            }
            if (!ts.at_end() && ts.peek().kind != Tok::newline) {
                ts.fail("expected end of line" + ts.found());
            }
        }
        return g;
    });
}

// ---------------------------------------------------------------------------
// Sequents: `|- ~a * (b | c), ~b, a`. Binding, tightest first: * & | +, all right-associative.

namespace detail {

inline kernel::Formula read_formula(TokenStream& ts, int level);

inline kernel::Formula read_primary(TokenStream& ts) {
    if (ts.accept("(")) {
        kernel::Formula f = read_formula(ts, 1);
        ts.expect(")");
        return f;
    }
    if (ts.accept("~")) {
        return kernel::negate(read_primary(ts));
    }
    return kernel::Formula::atom(ts.expect_ident("an atom").text);
}

inline kernel::Formula read_formula(TokenStream& ts, int level) {
    static constexpr std::pair<const char*, kernel::Connective> ops[] = {
        {"+", kernel::Connective::plus},
        {"|", kernel::Connective::par},
        {"&", kernel::Connective::with},
        {"*", kernel::Connective::tensor},
    };
    if (level > 4) {
        return read_primary(ts);
    }
    kernel::Formula lhs = read_formula(ts, level + 1);
    const auto& [symbol, op] = ops[level - 1];
    if (ts.accept(symbol)) {
        kernel::Formula rhs = read_formula(ts, level);
        switch (op) {
        case kernel::Connective::plus: return kernel::Formula::plus(lhs, rhs);
        case kernel::Connective::par: return kernel::Formula::par(lhs, rhs);
        case kernel::Connective::with: return kernel::Formula::with(lhs, rhs);
        default: return kernel::Formula::tensor(lhs, rhs);
        }
    }
    return lhs;
}

} // namespace detail

inline ParseResult<kernel::Sequent> parse_sequent(std::string_view text, const std::string& file = "") {
    std::vector<Diagnostic> diagnostics;
    auto tokens = detail::lex(text, file, diagnostics);
    return detail::run_parser<kernel::Sequent>(std::move(diagnostics), std::move(tokens), [&](TokenStream& ts) {
        kernel::Sequent s;
        ts.accept("|-");
        if (ts.at_end()) {
            return s;
        }
        do {
            s.add(detail::read_formula(ts, 1));
        } while (ts.accept(","));
        if (!ts.at_end()) {
            ts.fail("expected ',' or end of sequent" + ts.found());
        }
        return s;
    });
}

} // namespace problo::lang
