#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace problo {

// Exact probabilities. Every value the engine reports is a reduced fraction.
using Probability = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline std::optional<BigInt> parse_digits(std::string_view digits) {
    if (digits.empty()) {
        return std::nullopt;
    }
    BigInt value = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return std::nullopt;
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

inline BigInt pow10(unsigned exponent) {
    BigInt result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        result *= 10;
    }
    return result;
}

} // namespace detail

// Accepts `12`, `0.25`, `.5`, `3/4`. Decimal literals convert exactly in base 10.
inline std::optional<Probability> parse_probability(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = detail::parse_digits(text.substr(0, slash));
        auto den = detail::parse_digits(text.substr(slash + 1));
        if (!num || !den || *den == 0) {
            return std::nullopt;
        }
        return Probability(*num, *den);
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        auto whole = detail::parse_digits(text);
        if (!whole) {
            return std::nullopt;
        }
        return Probability(*whole);
    }
    std::string_view whole_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    if (whole_part.empty() && frac_part.empty()) {
        return std::nullopt;
    }
    BigInt whole = 0;
    if (!whole_part.empty()) {
        auto parsed = detail::parse_digits(whole_part);
        if (!parsed) {
            return std::nullopt;
        }
        whole = *parsed;
    }
    BigInt frac = 0;
    if (!frac_part.empty()) {
        auto parsed = detail::parse_digits(frac_part);
        if (!parsed) {
            return std::nullopt;
        }
        frac = *parsed;
    }
    BigInt scale = detail::pow10(static_cast<unsigned>(frac_part.size()));
    return Probability(whole * scale + frac, scale);
}

// Number of fractional decimal digits needed, or nullopt when the expansion is infinite.
inline std::optional<unsigned> decimal_digits(const Probability& value) {
    BigInt den = boost::multiprecision::denominator(value);
    unsigned twos = 0;
    unsigned fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1) {
        return std::nullopt;
    }
    return std::max(twos, fives);
}

// Exact decimal when the expansion terminates, `num/den` otherwise.
inline std::string to_decimal_string(const Probability& value) {
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    auto digits = decimal_digits(value);
    if (!digits) {
        return num.str() + "/" + den.str();
    }
    std::string sign;
    if (num < 0) {
        sign = "-";
        num = -num;
    }
    BigInt scaled = num * detail::pow10(*digits) / den;
    std::string text = scaled.str();
    if (*digits == 0) {
        return sign + text;
    }
    if (text.size() <= *digits) {
        text.insert(0, *digits - text.size() + 1, '0');
    }
    text.insert(text.size() - *digits, ".");
    return sign + text;
}

inline std::string to_fraction_string(const Probability& value) {
    BigInt num = boost::multiprecision::numerator(value);
    BigInt den = boost::multiprecision::denominator(value);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

inline bool is_probability(const Probability& value) {
    return value >= 0 && value <= 1;
}

} // namespace problo
