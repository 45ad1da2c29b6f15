#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epi/formula.hpp"

namespace epi {

struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Syntax or semantic error in formula or domain text. `what()` is
/// prefixed with "line:column: ".
class ParseError : public std::runtime_error {
public:
    ParseError(SourcePos pos, const std::string& message);

    SourcePos pos() const { return pos_; }
    const std::string& message() const { return message_; }

private:
    SourcePos pos_;
    std::string message_;
};

enum class Tok {
    Ident,  // lowercase identifier or keyword
    Upper,  // B, E, C
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Minus,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

/// Splits text into tokens. `%` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

/// Recursive-descent reader over a token vector, shared by the formula and
/// domain grammars.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_word(std::string_view word) const;
    bool accept(Tok kind);
    const Token& expect(Tok kind, std::string_view what);
    void expect_word(std::string_view word);

    [[noreturn]] void fail(const std::string& message) const;

private:
    std::vector<Token> tokens_;
    std::size_t cursor_ = 0;
};

/// Parses one belief formula from the stream, stopping before the first
/// token that cannot continue it.
FormulaPtr parse_formula(TokenStream& in, const Signature& sig);

/// Parses a complete formula; trailing input is an error.
///
/// Grammar, tightest first: `B(ag, f)`, `E({a,b}, f)`, `C({a,b}, f)`,
/// `!f`, `f & f`, `f | f`, `f -> f`. `&` and `|` associate left, `->`
/// associates right. `true` and `false` are the constants.
FormulaPtr parse_formula(std::string_view text, const Signature& sig);

} // namespace epi
