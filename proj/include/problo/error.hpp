#pragma once

#include <stdexcept>
#include <string>

namespace problo {

enum class Errc {
    cap_exceeded,
    shape_mismatch,
    heads_not_uniform,
    index_out_of_range,
    method_not_applicable,
    method_not_in_program,
    head_not_available,
    table_not_in_program,
    no_superposition,
    duplicate_variable,
    malformed_goal,
    stuck,
    invalid_program,
    invalid_network,
    invalid_query,
    zero_denominator,
    parse_error,
};

inline const char* to_string(Errc code) {
    switch (code) {
    case Errc::cap_exceeded: return "cap-exceeded";
    case Errc::shape_mismatch: return "shape-mismatch";
    case Errc::heads_not_uniform: return "heads-not-uniform";
    case Errc::index_out_of_range: return "index-out-of-range";
    case Errc::method_not_applicable: return "method-not-applicable";
    case Errc::method_not_in_program: return "method-not-in-program";
    case Errc::head_not_available: return "head-not-available";
    case Errc::table_not_in_program: return "table-not-in-program";
    case Errc::no_superposition: return "no-superposition-for-var";
    case Errc::duplicate_variable: return "duplicate-variable";
    case Errc::malformed_goal: return "malformed-goal";
    case Errc::stuck: return "stuck";
    case Errc::invalid_program: return "invalid-program";
    case Errc::invalid_network: return "invalid-network";
    case Errc::invalid_query: return "invalid-query";
    case Errc::zero_denominator: return "zero-denominator";
    case Errc::parse_error: return "parse-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(problo::to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace problo
