#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace problo::lang {

// 1-based line and column.
struct SourceSpan {
    std::string file;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;
};

enum class Severity { error, warning };

// Syntax diagnostics mean no value could be built; semantic ones accompany a value.
enum class Stage { syntax, semantic };

struct Diagnostic {
    Severity severity = Severity::error;
    Stage stage = Stage::syntax;
    std::string message;
    SourceSpan span;
};

inline std::string format(const Diagnostic& d) {
    std::string where = d.span.file.empty() ? "<input>" : d.span.file;
    return where + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": "
           + (d.severity == Severity::error ? "error" : "warning") + ": " + d.message;
}

template <class T>
struct ParseResult {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool has_errors() const {
        for (const auto& d : diagnostics) {
            if (d.severity == Severity::error) {
                return true;
            }
        }
        return false;
    }
    bool ok() const { return value.has_value() && !has_errors(); }
};

enum class Tok { ident, number, punct, newline, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan span;
};

// Identifiers, numbers (`12`, `0.5`, `.5`, `3/4`), and the punctuation of all front-end grammars.
// `#` starts a comment running to the end of the line.
class Lexer {
public:
    Lexer(std::string_view text, std::string file, bool keep_newlines = false)
        : text_(text), file_(std::move(file)), keep_newlines_(keep_newlines) {}

    std::vector<Token> tokenize(std::vector<Diagnostic>& diagnostics) {
        std::vector<Token> out;
        while (true) {
            skip_blank();
            if (pos_ >= text_.size()) {
                break;
            }
            char c = text_[pos_];
            if (c == '\n') {
                if (keep_newlines_) {
                    out.push_back({Tok::newline, "\n", span(1)});
                }
                advance();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(take(Tok::ident, [](char ch) {
                    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
                }));
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && digit_at(pos_ + 1))) {
                out.push_back(number());
                continue;
            }
            static constexpr std::string_view two[] = {"->", ":-", "::", "|-"};
            bool matched = false;
            for (auto p : two) {
                if (text_.substr(pos_, 2) == p) {
                    out.push_back({Tok::punct, std::string(p), span(2)});
                    advance();
                    advance();
                    matched = true;
                    break;
                }
            }
            if (matched) {
                continue;
            }
            if (std::string_view("{};,:|=?~*&+().").find(c) != std::string_view::npos) {
                out.push_back({Tok::punct, std::string(1, c), span(1)});
                advance();
                continue;
            }
            std::size_t len = utf8_length(static_cast<unsigned char>(c));
            diagnostics.push_back({Severity::error, Stage::syntax,
                                   "unexpected character '" + std::string(text_.substr(pos_, len)) + "'", span(1)});
            for (std::size_t i = 0; i < len && pos_ < text_.size(); ++i) {
                ++pos_;
            }
            ++column_;
        }
        out.push_back({Tok::end, "", span(0)});
        return out;
    }

private:
    static std::size_t utf8_length(unsigned char lead) {
        if (lead >= 0xF0) return 4;
        if (lead >= 0xE0) return 3;
        if (lead >= 0xC0) return 2;
        return 1;
    }

    bool digit_at(std::size_t i) const {
        return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    }

    SourceSpan span(std::size_t length) const { return {file_, line_, column_, length}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (c == ' ' || c == '\t' || c == '\r' || (c == '\n' && !keep_newlines_)) {
                advance();
            } else {
                break;
            }
        }
    }

    template <class Pred>
    Token take(Tok kind, Pred pred) {
        SourceSpan start = span(0);
        std::size_t begin = pos_;
        while (pos_ < text_.size() && pred(text_[pos_])) {
            advance();
        }
        start.length = pos_ - begin;
        return {kind, std::string(text_.substr(begin, pos_ - begin)), start};
    }

    Token number() {
        SourceSpan start = span(0);
        std::size_t begin = pos_;
        auto digits = [&] {
            while (digit_at(pos_)) {
                advance();
            }
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.' && digit_at(pos_ + 1)) {
            advance();
            digits();
        } else if (pos_ < text_.size() && text_[pos_] == '/' && digit_at(pos_ + 1)) {
            advance();
            digits();
        }
        start.length = pos_ - begin;
        return {Tok::number, std::string(text_.substr(begin, pos_ - begin)), start};
    }

    std::string_view text_;
    std::string file_;
    bool keep_newlines_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// Cursor over a token vector with diagnostic helpers. Parsers throw Abort after the first
// syntax error; the diagnostic is already recorded.
class TokenStream {
public:
    struct Abort {};

    TokenStream(std::vector<Token> tokens, std::vector<Diagnostic>& diagnostics)
        : tokens_(std::move(tokens)), diagnostics_(diagnostics) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) {
            ++pos_;
        }
        return t;
    }
    bool at_end() const { return peek().kind == Tok::end; }

    bool is(std::string_view punct) const { return peek().kind == Tok::punct && peek().text == punct; }
    bool is_word(std::string_view word) const { return peek().kind == Tok::ident && peek().text == word; }

    bool accept(std::string_view punct) {
        if (is(punct)) {
            next();
            return true;
        }
        return false;
    }

    const Token& expect(std::string_view punct) {
        if (!is(punct)) {
            fail("expected '" + std::string(punct) + "'" + found());
        }
        return next();
    }

    const Token& expect_ident(const std::string& what) {
        if (peek().kind != Tok::ident) {
            fail("expected " + what + found());
        }
        return next();
    }

    const Token& expect_word(std::string_view word) {
        if (!is_word(word)) {
            fail("expected '" + std::string(word) + "'" + found());
        }
        return next();
    }

    [[noreturn]] void fail(std::string message) { fail_at(peek().span, std::move(message)); }

    [[noreturn]] void fail_at(SourceSpan span, std::string message) {
        diagnostics_.push_back({Severity::error, Stage::syntax, std::move(message), std::move(span)});
        throw Abort{};
    }

    void note(SourceSpan span, std::string message, Stage stage = Stage::semantic) {
        diagnostics_.push_back({Severity::error, stage, std::move(message), std::move(span)});
    }

    void warn(SourceSpan span, std::string message) {
        diagnostics_.push_back({Severity::warning, Stage::semantic, std::move(message), std::move(span)});
    }

    std::string found() const {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::end: return ", found end of input";
        case Tok::newline: return ", found end of line";
        default: return ", found '" + t.text + "'";
        }
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>& diagnostics_;
};

} // namespace problo::lang
