#pragma once

#include "problo/bayes.hpp"
#include "problo/engine.hpp"
#include "problo/kernel.hpp"
#include "problo/lang/lexer.hpp"
#include "problo/rational.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace problo::lang {

enum class Format { text, json };

// ---------------------------------------------------------------------------
// Networks and programs

inline std::string render_bn(const bayes::BayesNet& bn) {
    std::ostringstream out;
    out << "network " << bn.name << " {\n";
    if (!bn.variables.empty()) {
        out << "  var ";
        for (std::size_t i = 0; i < bn.variables.size(); ++i) {
            out << (i ? ", " : "") << bn.variables[i];
        }
        out << ";\n";
    }
    for (const auto& [from, to] : bn.edges) {
        out << "  edge " << from << " -> " << to << ";\n";
    }
    std::vector<std::string> order = bn.variables;
    for (const auto& [var, cpt] : bn.cpts) {
        if (!bn.has_variable(var)) {
            order.push_back(var);
        }
    }
    for (const auto& var : order) {
        auto it = bn.cpts.find(var);
        if (it == bn.cpts.end()) {
            continue;
        }
        const auto& cpt = it->second;
        out << "  cpt " << var;
        for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
            out << (i ? ", " : " | ") << cpt.parents[i];
        }
        out << " {\n";
        for (const auto& [key, row] : cpt.rows) {
            out << "    ";
            for (bool b : key) {
                out << (b ? "t " : "f ");
            }
            if (!key.empty()) {
                out << ": ";
            }
            out << to_decimal_string(row.p_true) << ", " << to_decimal_string(row.p_false) << ";\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

inline std::string render_method(const SimpleMethod& m) {
    std::string out = to_decimal_string(m.prob) + " :: ";
    for (std::size_t i = 0; i < m.head_multiplicity; ++i) {
        out += (i ? ", " : "") + to_string(m.head);
    }
    if (!m.body.empty()) {
        out += " :- ";
        bool first = true;
        for (const auto& atom : m.body.elements()) {
            out += (first ? "" : ", ") + to_string(atom);
            first = false;
        }
    }
    return out + ".";
}

inline std::string render_plo(const Program& p) {
    std::string out;
    for (const auto& t : p.tables) {
        out += "table " + t.var + ";\n";
        for (const auto& m : t.methods) {
            out += render_method(m) + "\n";
        }
    }
    return out;
}

inline nlohmann::json atoms_json(const AtomBag& bag) {
    auto out = nlohmann::json::array();
    for (const auto& atom : bag.elements()) {
        out.push_back(to_string(atom));
    }
    return out;
}

inline nlohmann::json program_json(const Program& p) {
    auto tables = nlohmann::json::array();
    for (const auto& t : p.tables) {
        auto methods = nlohmann::json::array();
        for (const auto& m : t.methods) {
            methods.push_back({{"id", m.id},
                               {"head", to_string(m.head)},
                               {"multiplicity", m.head_multiplicity},
                               {"body", atoms_json(m.body)},
                               {"prob", to_decimal_string(m.prob)}});
        }
        tables.push_back({{"var", t.var}, {"methods", std::move(methods)}});
    }
    return {{"tables", std::move(tables)}};
}

// ---------------------------------------------------------------------------
// Traces

inline nlohmann::json trace_node_json(const TraceNode& n) {
    nlohmann::json j;
    j["rule"] = to_string(n.rule);
    if (n.rule == Rule::bra) {
        j["branchVar"] = n.branch_var;
    } else {
        j["method"] = n.method;
    }
    j["consumed"] = atoms_json(n.consumed);
    j["produced"] = atoms_json(n.produced);
    j["weightIn"] = to_decimal_string(n.weight_in);
    j["weightOut"] = to_decimal_string(n.weight_out);
    if (n.zero_probability) {
        j["zeroProbability"] = true;
    }
    auto children = nlohmann::json::array();
    for (const auto& c : n.children) {
        children.push_back(trace_node_json(c));
    }
    j["children"] = std::move(children);
    return j;
}

// The empty derivation renders as `null`.
inline nlohmann::json trace_json(const Trace& t) { return t.root ? trace_node_json(*t.root) : nlohmann::json(nullptr); }

namespace detail {

inline std::string atoms_text(const AtomBag& bag) {
    std::string out;
    for (const auto& [atom, copies] : bag) {
        out += (out.empty() ? "" : ", ") + to_string(atom);
        if (copies > 1) {
            out += " x" + std::to_string(copies);
        }
    }
    return "{" + out + "}";
}

// Premises above conclusions, so the root comes last.
inline void render_node_text(const TraceNode& n, std::size_t depth, std::string& out) {
    for (const auto& c : n.children) {
        render_node_text(c, depth + 1, out);
    }
    out += std::string(depth * 2, ' ');
    if (n.rule == Rule::bra) {
        out += "bra " + n.branch_var + "  " + to_decimal_string(n.children.at(0).weight_out) + " + "
               + to_decimal_string(n.children.at(1).weight_out) + " = " + to_decimal_string(n.weight_out);
    } else {
        out += std::string(to_string(n.rule)) + " " + n.method + "  " + atoms_text(n.consumed) + " => "
               + atoms_text(n.produced) + "  " + to_decimal_string(n.weight_in) + " -> "
               + to_decimal_string(n.weight_out);
        if (n.zero_probability) {
            out += "  (zero probability)";
        }
    }
    out += "\n";
}

} // namespace detail

inline std::string render_trace(const Trace& t, Format format) {
    if (format == Format::json) {
        return trace_json(t).dump(2) + "\n";
    }
    if (!t.root) {
        return "(empty derivation) 1\n";
    }
    std::string out;
    detail::render_node_text(*t.root, 0, out);
    return out;
}

namespace detail {

struct JsonError {
    std::string message;
};

inline AtomBag atoms_from_json(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_array()) {
        throw JsonError{std::string("field '") + field + "' must be an array"};
    }
    AtomBag bag;
    for (const auto& item : j.at(field)) {
        if (!item.is_string()) {
            throw JsonError{std::string("field '") + field + "' must hold atom strings"};
        }
        std::string s = item.get<std::string>();
        auto eq = s.rfind('=');
        if (eq == std::string::npos || eq + 2 != s.size() || (s.back() != 't' && s.back() != 'f') || eq == 0) {
            throw JsonError{"malformed atom '" + s + "'"};
        }
        bag.add({s.substr(0, eq), s.back() == 't' ? Polarity::True : Polarity::False});
    }
    return bag;
}

inline Probability weight_from_json(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        throw JsonError{std::string("field '") + field + "' must be a decimal string"};
    }
    auto p = parse_probability(j.at(field).get<std::string>());
    if (!p) {
        throw JsonError{std::string("field '") + field + "' is not a number"};
    }
    return *p;
}

inline std::string string_field(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        throw JsonError{std::string("field '") + field + "' must be a string"};
    }
    return j.at(field).get<std::string>();
}

inline TraceNode trace_node_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw JsonError{"trace node must be an object"};
    }
    TraceNode n;
    auto rule = parse_rule(string_field(j, "rule"));
    if (!rule) {
        throw JsonError{"unknown rule '" + string_field(j, "rule") + "'"};
    }
    n.rule = *rule;
    if (n.rule == Rule::bra) {
        n.branch_var = string_field(j, "branchVar");
    } else {
        n.method = string_field(j, "method");
    }
    n.consumed = atoms_from_json(j, "consumed");
    n.produced = atoms_from_json(j, "produced");
    n.weight_in = weight_from_json(j, "weightIn");
    n.weight_out = weight_from_json(j, "weightOut");
    n.zero_probability = j.value("zeroProbability", false);
    if (!j.contains("children") || !j.at("children").is_array()) {
        throw JsonError{"field 'children' must be an array"};
    }
    for (const auto& c : j.at("children")) {
        n.children.push_back(trace_node_from_json(c));
    }
    return n;
}

inline SourceSpan span_at_byte(std::string_view text, std::size_t byte, const std::string& file) {
    SourceSpan span{file, 1, 1, 1};
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++span.line;
            span.column = 1;
        } else {
            ++span.column;
        }
    }
    return span;
}

} // namespace detail

inline ParseResult<Trace> parse_trace_json(std::string_view text, const std::string& file = "") {
    ParseResult<Trace> result;
    try {
        auto j = nlohmann::json::parse(text);
        Trace t;
        if (!j.is_null()) {
            t.root = detail::trace_node_from_json(j);
        }
        result.value = std::move(t);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        result.diagnostics.push_back({Severity::error, Stage::syntax, "invalid JSON", detail::span_at_byte(text, byte, file)});
    } catch (const detail::JsonError& e) {
        result.diagnostics.push_back({Severity::error, Stage::syntax, e.message, SourceSpan{file, 1, 1, 1}});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Derivations

inline nlohmann::json derivation_json(const kernel::Derivation& d) {
    nlohmann::json j;
    j["rule"] = kernel::to_string(d.rule);
    j["conclusion"] = kernel::to_string(d.conclusion);
    if (d.principal) {
        j["principal"] = kernel::to_string(*d.principal);
    }
    auto children = nlohmann::json::array();
    for (const auto& p : d.premises) {
        children.push_back(derivation_json(p));
    }
    j["children"] = std::move(children);
    return j;
}

namespace detail {

inline void render_derivation_text(const kernel::Derivation& d, std::size_t depth, std::string& out) {
    out += std::string(depth * 2, ' ') + kernel::to_string(d.rule) + "  " + kernel::to_string(d.conclusion) + "\n";
    for (const auto& p : d.premises) {
        render_derivation_text(p, depth + 1, out);
    }
}

} // namespace detail

inline std::string render_derivation(const kernel::Derivation& d, Format format) {
    if (format == Format::json) {
        return derivation_json(d).dump(2) + "\n";
    }
    std::string out;
    detail::render_derivation_text(d, 0, out);
    return out;
}

} // namespace problo::lang
