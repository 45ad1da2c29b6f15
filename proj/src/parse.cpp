#include "epi/parse.hpp"

#include <cctype>

namespace epi {

ParseError::ParseError(SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
      pos_(pos), message_(message)
{
}

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    SourcePos pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    auto is_word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') {
                advance(1);
            }
            continue;
        }
        SourcePos start = pos;
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && is_word_char(text[j])) {
                ++j;
            }
            out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), start});
            advance(j - i);
            continue;
        }
        if (std::isupper(static_cast<unsigned char>(c))) {
            bool single = i + 1 >= text.size() || !is_word_char(text[i + 1]);
            if (single && (c == 'B' || c == 'E' || c == 'C')) {
                out.push_back({Tok::Upper, std::string(1, c), start});
                advance(1);
                continue;
            }
            throw ParseError(start, "identifiers must start with a lowercase letter");
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", start});
            advance(2);
            continue;
        }
        Tok kind;
        switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ',': kind = Tok::Comma; break;
        case ';': kind = Tok::Semi; break;
        case ':': kind = Tok::Colon; break;
        case '!': kind = Tok::Bang; break;
        case '&': kind = Tok::Amp; break;
        case '|': kind = Tok::Pipe; break;
        case '-': kind = Tok::Minus; break;
        default:
            throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, std::string(1, c), start});
        advance(1);
    }
    out.push_back({Tok::End, "", pos});
    return out;
}

const Token& TokenStream::peek(std::size_t ahead) const
{
    std::size_t k = std::min(cursor_ + ahead, tokens_.size() - 1);
    return tokens_[k];
}

const Token& TokenStream::next()
{
    const Token& t = tokens_[cursor_];
    if (cursor_ + 1 < tokens_.size()) {
        ++cursor_;
    }
    return t;
}

bool TokenStream::at_word(std::string_view word) const
{
    return peek().kind == Tok::Ident && peek().text == word;
}

bool TokenStream::accept(Tok kind)
{
    if (at(kind)) {
        next();
        return true;
    }
    return false;
}

const Token& TokenStream::expect(Tok kind, std::string_view what)
{
    if (!at(kind)) {
        fail("expected " + std::string(what));
    }
    return next();
}

void TokenStream::expect_word(std::string_view word)
{
    if (!at_word(word)) {
        fail("expected '" + std::string(word) + "'");
    }
    next();
}

void TokenStream::fail(const std::string& message) const
{
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, message + ", found " + found);
}

namespace {

class FormulaParser {
public:
    FormulaParser(TokenStream& in, const Signature& sig) : in_(in), sig_(sig) {}

    FormulaPtr implication()
    {
        auto lhs = disjunction();
        if (in_.accept(Tok::Arrow)) {
            return Formula::implies(lhs, implication());
        }
        return lhs;
    }

private:
    FormulaPtr disjunction()
    {
        auto lhs = conjunction();
        while (in_.accept(Tok::Pipe)) {
            lhs = Formula::disj(lhs, conjunction());
        }
        return lhs;
    }

    FormulaPtr conjunction()
    {
        auto lhs = unary();
        while (in_.accept(Tok::Amp)) {
            lhs = Formula::conj(lhs, unary());
        }
        return lhs;
    }

    FormulaPtr unary()
    {
        if (in_.accept(Tok::Bang)) {
            return Formula::negate(unary());
        }
        if (in_.accept(Tok::LParen)) {
            auto inner = implication();
            in_.expect(Tok::RParen, "')'");
            return inner;
        }
        if (in_.at(Tok::Upper)) {
            return modal();
        }
        if (in_.at(Tok::Ident)) {
            const Token& t = in_.peek();
            if (t.text == "true") {
                in_.next();
                return Formula::top();
            }
            if (t.text == "false") {
                in_.next();
                return Formula::bot();
            }
            long f = sig_.find_fluent(t.text);
            if (f < 0) {
                throw ParseError(t.pos, "undeclared fluent '" + t.text + "'");
            }
            in_.next();
            return Formula::atom(static_cast<FluentIndex>(f));
        }
        in_.fail("expected a formula");
    }

    AgentIndex agent()
    {
        const Token& t = in_.expect(Tok::Ident, "an agent name");
        long a = sig_.find_agent(t.text);
        if (a < 0) {
            throw ParseError(t.pos, "undeclared agent '" + t.text + "'");
        }
        return static_cast<AgentIndex>(a);
    }

    FormulaPtr modal()
    {
        const Token op = in_.next();
        in_.expect(Tok::LParen, "'('");
        if (op.text == "B") {
            AgentIndex a = agent();
            in_.expect(Tok::Comma, "','");
            auto sub = implication();
            in_.expect(Tok::RParen, "')'");
            return Formula::believes(a, sub);
        }
        const Token& brace = in_.expect(Tok::LBrace, "'{'");
        AgentSet group;
        if (!in_.at(Tok::RBrace)) {
            group.push_back(agent());
            while (in_.accept(Tok::Comma)) {
                group.push_back(agent());
            }
        }
        in_.expect(Tok::RBrace, "'}'");
        if (group.empty()) {
            throw ParseError(brace.pos, "empty agent set in " + op.text + " operator");
        }
        in_.expect(Tok::Comma, "','");
        auto sub = implication();
        in_.expect(Tok::RParen, "')'");
        return op.text == "E" ? Formula::everyone(std::move(group), sub)
                              : Formula::common(std::move(group), sub);
    }

    TokenStream& in_;
    const Signature& sig_;
};

} // namespace

FormulaPtr parse_formula(TokenStream& in, const Signature& sig)
{
    return FormulaParser(in, sig).implication();
}

FormulaPtr parse_formula(std::string_view text, const Signature& sig)
{
    TokenStream in(tokenize(text));
    auto f = parse_formula(in, sig);
    if (!in.at(Tok::End)) {
        in.fail("unexpected trailing input");
    }
    return f;
}

} // namespace epi
