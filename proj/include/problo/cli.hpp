#pragma once

#include "problo/bayes.hpp"
#include "problo/engine.hpp"
#include "problo/kernel.hpp"
#include "problo/lang/parse.hpp"
#include "problo/lang/render.hpp"
#include "problo/lo.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace problo::cli {

// Exit codes.
inline constexpr int ok = 0;
inline constexpr int rejected = 1;   // invalid input, unprovable, cyclic, oracle mismatch
inline constexpr int io_error = 2;   // unreadable file, syntax error, bad usage

struct CliConfig {
    std::string subcommand;
    std::string input;
    std::string goal;
    std::string given;
    std::string output;
    lang::Format format = lang::Format::text;
    bool trace = false;
    bool oracle = false;
    bool search = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> limit;
};

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline nlohmann::json diagnostics_json(const std::vector<lang::Diagnostic>& ds) {
    auto out = nlohmann::json::array();
    for (const auto& d : ds) {
        out.push_back({{"severity", d.severity == lang::Severity::error ? "error" : "warning"},
                       {"message", d.message},
                       {"file", d.span.file},
                       {"line", d.span.line},
                       {"column", d.span.column},
                       {"length", d.span.length}});
    }
    return out;
}

inline void print_diagnostics(const std::vector<lang::Diagnostic>& ds, std::ostream& err) {
    for (const auto& d : ds) {
        err << lang::format(d) << "\n";
    }
}

inline bool has_syntax_error(const std::vector<lang::Diagnostic>& ds) {
    for (const auto& d : ds) {
        if (d.severity == lang::Severity::error && d.stage == lang::Stage::syntax) {
            return true;
        }
    }
    return false;
}

// A program to run, plus the network it came from when there is one.
struct Loaded {
    Program program;
    std::optional<bayes::BayesNet> network;
};

class Session {
public:
    Session(const CliConfig& config, std::ostream& out, std::ostream& err) : config_(config), out_(out), err_(err) {}

    int dispatch() {
        try {
            if (config_.subcommand == "check") return check();
            if (config_.subcommand == "compile") return compile();
            if (config_.subcommand == "query") return query();
            if (config_.subcommand == "acyclic") return acyclic();
            if (config_.subcommand == "prove") return prove();
            err_ << "error: unknown subcommand\n";
            return io_error;
        } catch (const Error& e) {
            err_ << "error: " << e.what() << "\n";
            return e.code() == Errc::cap_exceeded || e.code() == Errc::parse_error ? io_error : rejected;
        }
    }

private:
    bool json() const { return config_.format == lang::Format::json; }

    std::optional<std::string> read(const std::string& path) {
        auto text = read_file(path);
        if (!text) {
            err_ << "error: cannot read " << path << "\n";
        }
        return text;
    }

    // ---- check
    int check() {
        auto text = read(config_.input);
        if (!text) {
            return io_error;
        }
        std::vector<lang::Diagnostic> diagnostics;
        std::vector<std::string> semantic;
        bool syntax_failed = false;
        if (ends_with(config_.input, ".bn")) {
            auto parsed = lang::parse_bn(*text, config_.input);
            diagnostics = parsed.diagnostics;
            syntax_failed = has_syntax_error(diagnostics);
            if (!syntax_failed && !parsed.has_errors()) {
                for (const auto& d : bayes::validate_network(*parsed.value).diagnostics) {
                    semantic.push_back((d.variable.empty() ? "" : d.variable + ": ") + d.message);
                }
            }
        } else if (ends_with(config_.input, ".plo")) {
            auto parsed = lang::parse_plo(*text, config_.input);
            diagnostics = parsed.diagnostics;
            syntax_failed = has_syntax_error(diagnostics);
            if (!syntax_failed && !parsed.has_errors()) {
                for (const auto& d : validate_program(*parsed.value).diagnostics) {
                    semantic.push_back(d.table + (d.conditional.empty() ? "" : " [" + d.conditional + "]") + ": "
                                       + d.message);
                }
            }
        } else {
            err_ << "error: " << config_.input << ": expected a .bn or .plo file\n";
            return io_error;
        }
        bool valid = !syntax_failed && semantic.empty();
        for (const auto& d : diagnostics) {
            valid = valid && d.severity != lang::Severity::error;
        }
        if (json()) {
            auto j = nlohmann::json{{"file", config_.input},
                                    {"valid", valid},
                                    {"diagnostics", diagnostics_json(diagnostics)},
                                    {"violations", semantic}};
            out_ << j.dump(2) << "\n";
        } else {
            out_ << (valid ? "valid" : "invalid") << "\n";
        }
        print_diagnostics(diagnostics, err_);
        for (const auto& msg : semantic) {
            err_ << config_.input << ": error: " << msg << "\n";
        }
        if (syntax_failed) {
            return io_error;
        }
        return valid ? ok : rejected;
    }

    // Parses and validates a .bn or .plo input. Returns an exit code on failure.
    std::variant<Loaded, int> load(const std::string& path) {
        auto text = read(path);
        if (!text) {
            return io_error;
        }
        if (ends_with(path, ".bn")) {
            auto parsed = lang::parse_bn(*text, path);
            print_diagnostics(parsed.diagnostics, err_);
            if (has_syntax_error(parsed.diagnostics)) {
                return io_error;
            }
            if (parsed.has_errors()) {
                return rejected;
            }
            auto report = bayes::validate_network(*parsed.value);
            if (!report.valid()) {
                for (const auto& d : report.diagnostics) {
                    err_ << path << ": error: " << (d.variable.empty() ? "" : d.variable + ": ") << d.message << "\n";
                }
                return rejected;
            }
            return Loaded{bayes::compile(*parsed.value), *parsed.value};
        }
        if (ends_with(path, ".plo")) {
            auto parsed = lang::parse_plo(*text, path);
            print_diagnostics(parsed.diagnostics, err_);
            if (has_syntax_error(parsed.diagnostics)) {
                return io_error;
            }
            if (parsed.has_errors()) {
                return rejected;
            }
            auto report = validate_program(*parsed.value);
            if (!report.valid()) {
                for (const auto& d : report.diagnostics) {
                    err_ << path << ": error: " << d.table << ": " << d.message << "\n";
                }
                return rejected;
            }
            return Loaded{*parsed.value, std::nullopt};
        }
        err_ << "error: " << path << ": expected a .bn or .plo file\n";
        return io_error;
    }

    // ---- compile
    int compile() {
        if (!ends_with(config_.input, ".bn")) {
            err_ << "error: compile expects a .bn file\n";
            return io_error;
        }
        auto loaded = load(config_.input);
        if (auto* code = std::get_if<int>(&loaded)) {
            return *code;
        }
        const Program& program = std::get<Loaded>(loaded).program;
        std::string text = json() ? lang::program_json(program).dump(2) + "\n" : lang::render_plo(program);
        if (config_.output.empty()) {
            out_ << text;
            return ok;
        }
        std::ofstream file(config_.output, std::ios::binary);
        if (!(file << text)) {
            err_ << "error: cannot write " << config_.output << "\n";
            return io_error;
        }
        return ok;
    }

    // ---- query
    std::optional<Goal> goal_from(const std::string& text, const char* what) {
        auto parsed = lang::parse_goal(text, what);
        if (!parsed.ok()) {
            print_diagnostics(parsed.diagnostics, err_);
            return std::nullopt;
        }
        return *parsed.value;
    }

    static void fill_missing(const Program& p, Goal& g) {
        for (const auto& t : p.tables) {
            if (!g.superpositions.count(t.var) && !g.atoms.count({t.var, Polarity::True})
                && !g.atoms.count({t.var, Polarity::False})) {
                g.superpositions.add(t.var);
            }
        }
    }

    int query() {
        auto loaded_or = load(config_.input);
        if (auto* code = std::get_if<int>(&loaded_or)) {
            return *code;
        }
        Loaded& loaded = std::get<Loaded>(loaded_or);
        auto goal = goal_from(config_.goal, "goal");
        if (!goal) {
            return io_error;
        }
        std::optional<Goal> given;
        if (!config_.given.empty()) {
            given = goal_from(config_.given, "given");
            if (!given) {
                return io_error;
            }
            // P(goal | given) = P(goal, given) / P(given); unmentioned variables are summed out.
            goal->atoms += given->atoms;
            goal->superpositions += given->superpositions;
            fill_missing(loaded.program, *goal);
            fill_missing(loaded.program, *given);
        }
        if (config_.search) {
            return search(loaded.program, *goal);
        }
        ExecutionOptions options{config_.seed};
        ExecutionResult numerator = execute_deterministic(loaded.program, *goal, options);
        Probability result = numerator.probability;
        if (given) {
            Probability denominator = execute_deterministic(loaded.program, *given, options).probability;
            if (denominator == 0) {
                err_ << "error: " << to_string(Errc::zero_denominator) << ": the given evidence has probability 0\n";
                return rejected;
            }
            result = numerator.probability / denominator;
        }
        std::optional<Probability> oracle;
        if (config_.oracle) {
            bayes::BayesNet bn = loaded.network ? *loaded.network : bayes::network_from_program(loaded.program);
            oracle = bayes::oracle_enumerate(bn, bayes::query_of(*goal));
            if (given) {
                Probability denominator = bayes::oracle_enumerate(bn, bayes::query_of(*given));
                *oracle = denominator == 0 ? Probability(0) : *oracle / denominator;
            }
        }
        bool agrees = !oracle || *oracle == result;
        if (json()) {
            nlohmann::json j{{"probability", to_decimal_string(result)}, {"fraction", to_fraction_string(result)}};
            if (config_.trace) {
                j["trace"] = lang::trace_json(numerator.trace);
            }
            if (oracle) {
                j["oracle"] = {{"probability", to_decimal_string(*oracle)}, {"agrees", agrees}};
            }
            out_ << j.dump(2) << "\n";
        } else {
            out_ << to_decimal_string(result) << "\n";
            if (config_.trace) {
                out_ << lang::render_trace(numerator.trace, lang::Format::text);
            }
            if (oracle) {
                out_ << "oracle " << to_decimal_string(*oracle) << (agrees ? " agrees" : " DISAGREES") << "\n";
            }
        }
        if (!agrees) {
            err_ << "error: engine and oracle disagree\n";
            return rejected;
        }
        return ok;
    }

    int search(const Program& program, const Goal& goal) {
        SearchLimits limits;
        if (config_.limit) {
            limits.max_depth = *config_.limit;
        }
        SearchResult found = search_all(program, goal, limits);
        if (json()) {
            auto results = nlohmann::json::array();
            for (const auto& [trace, p] : found.results) {
                nlohmann::json r{{"probability", to_decimal_string(p)}};
                if (config_.trace) {
                    r["trace"] = lang::trace_json(trace);
                }
                results.push_back(std::move(r));
            }
            out_ << nlohmann::json{{"results", results}, {"limitExceeded", found.limit_exceeded}}.dump(2) << "\n";
        } else {
            out_ << found.results.size() << " derivation(s)" << (found.limit_exceeded ? ", limit exceeded" : "") << "\n";
            for (const auto& [trace, p] : found.results) {
                out_ << to_decimal_string(p) << "\n";
                if (config_.trace) {
                    out_ << lang::render_trace(trace, lang::Format::text);
                }
            }
        }
        return found.results.empty() ? rejected : ok;
    }

    // ---- acyclic
    int acyclic() {
        auto text = read(config_.input);
        if (!text) {
            return io_error;
        }
        lo::DirectedGraph graph;
        if (ends_with(config_.input, ".bn")) {
            auto parsed = lang::parse_bn(*text, config_.input);
            print_diagnostics(parsed.diagnostics, err_);
            if (has_syntax_error(parsed.diagnostics)) {
                return io_error;
            }
            graph = parsed.value->graph();
        } else {
            auto parsed = lang::parse_graph(*text, config_.input);
            print_diagnostics(parsed.diagnostics, err_);
            if (!parsed.value) {
                return io_error;
            }
            graph = std::move(*parsed.value);
        }
        lo::SaturationOptions options{lo::Schedule::fifo, 0};
        if (config_.seed) {
            options = {lo::Schedule::random, *config_.seed};
        }
        auto run = lo::acyclicity_run(graph, options);
        std::vector<std::string> stuck;
        for (const auto& [m, copies] : run.final_state.program) {
            stuck.push_back(lo::to_string(m));
        }
        if (json()) {
            nlohmann::json j{{"acyclic", run.success}, {"steps", run.trace.steps.size()}};
            if (config_.trace) {
                j["stuck"] = stuck;
            }
            out_ << j.dump(2) << "\n";
        } else {
            out_ << (run.success ? "acyclic" : "cyclic") << "\n";
            if (config_.trace) {
                for (const auto& step : run.trace.steps) {
                    out_ << "  " << lo::to_string(step.rule) << " " << lo::to_string(step.method) << "\n";
                }
                for (const auto& m : stuck) {
                    out_ << "  stuck " << m << "\n";
                }
            }
        }
        return run.success ? ok : rejected;
    }

    // ---- prove
    int prove() {
        auto parsed = lang::parse_sequent(config_.input, "sequent");
        if (!parsed.ok()) {
            print_diagnostics(parsed.diagnostics, err_);
            return io_error;
        }
        std::size_t cap = config_.limit.value_or(16);
        auto proof = kernel::prove_bounded(*parsed.value, cap);
        if (!proof) {
            out_ << (json() ? "{\n  \"provable\": false\n}\n" : "unprovable\n");
            return rejected;
        }
        if (json()) {
            out_ << nlohmann::json{{"provable", true}, {"derivation", lang::derivation_json(*proof)}}.dump(2) << "\n";
        } else {
            out_ << lang::render_derivation(*proof, lang::Format::text);
        }
        return ok;
    }

    const CliConfig& config_;
    std::ostream& out_;
    std::ostream& err_;
};

} // namespace detail

inline int execute(const CliConfig& config, std::ostream& out, std::ostream& err) {
    return detail::Session(config, out, err).dispatch();
}

// argv-style entry point. Global flags are accepted before or after the subcommand.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CliConfig config;
    CLI::App app{"Probabilistic linear-logic programming engine", "problo"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--trace", config.trace, "Print derivations and witnesses");
    app.add_flag("--oracle", config.oracle, "Cross-check queries by enumeration");
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Randomize scheduling tie-breaks");
    std::size_t limit = 0;
    auto* limit_opt = app.add_option("--limit", limit, "Prover atom cap, or search depth")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "Parse and validate a .bn or .plo file");
    check->add_option("file", config.input)->required();
    auto* compile = app.add_subcommand("compile", "Compile a .bn network to a .plo program");
    compile->add_option("file", config.input)->required();
    compile->add_option("-o,--output", config.output, "Write to a file instead of standard output");
    auto* query = app.add_subcommand("query", "Evaluate a goal against a .bn or .plo file");
    query->add_option("file", config.input)->required();
    query->add_option("goal", config.goal, "e.g. \"C=t,R=t,S=?\"")->required();
    query->add_option("--given", config.given, "Condition on this evidence");
    query->add_flag("--search", config.search, "Enumerate all derivations instead of the scheduler");
    auto* acyclic = app.add_subcommand("acyclic", "Decide acyclicity of a .graph or .bn dependency graph");
    acyclic->add_option("file", config.input)->required();
    auto* prove = app.add_subcommand("prove", "Search for a MALL+mix proof of a sequent");
    prove->add_option("sequent", config.input)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return io_error;
    }
    for (auto* sub : app.get_subcommands()) {
        config.subcommand = sub->get_name();
    }
    config.format = format == "json" ? lang::Format::json : lang::Format::text;
    if (seed_opt->count() > 0) {
        config.seed = seed;
    }
    if (limit_opt->count() > 0) {
        config.limit = limit;
    }
    return execute(config, out, err);
}

} // namespace problo::cli
