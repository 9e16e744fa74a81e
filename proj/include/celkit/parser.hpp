#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "celkit/concept.hpp"
#include "celkit/errors.hpp"

namespace celkit {

// Recursive-descent parser for the concept surface syntax:
//
//   concept   := or_expr
//   or_expr   := and_expr { "or" and_expr }
//   and_expr  := unary { "and" unary }
//   unary     := "not" unary | role_expr | atom
//   role_expr := IDENT ("some" | "only") unary
//   atom      := "Thing" | "Nothing" | IDENT | "(" concept ")"
//
// Keywords are case-sensitive and reserved. Whitespace-insensitive.
// Throws SyntaxError (with byte position) on malformed input and
// UnknownTokenError on characters outside the lexical alphabet.
namespace detail {

enum class Tok { Ident, KwAnd, KwOr, KwNot, KwSome, KwOnly, KwThing, KwNothing, LParen, RParen, End };

struct Token {
    Tok type;
    std::string text;
    std::size_t pos;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

inline std::vector<Token> lex_concept(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '(') {
            out.push_back({Tok::LParen, "(", i++});
            continue;
        }
        if (c == ')') {
            out.push_back({Tok::RParen, ")", i++});
            continue;
        }
        if (ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) ++i;
            std::string word(text.substr(start, i - start));
            Tok type = Tok::Ident;
            if (word == "and")
                type = Tok::KwAnd;
            else if (word == "or")
                type = Tok::KwOr;
            else if (word == "not")
                type = Tok::KwNot;
            else if (word == "some")
                type = Tok::KwSome;
            else if (word == "only")
                type = Tok::KwOnly;
            else if (word == "Thing")
                type = Tok::KwThing;
            else if (word == "Nothing")
                type = Tok::KwNothing;
            out.push_back({type, std::move(word), start});
            continue;
        }
        throw UnknownTokenError(std::string("illegal character '") + c + "'", i);
    }
    out.push_back({Tok::End, "", text.size()});
    return out;
}

class ConceptParser {
public:
    explicit ConceptParser(std::string_view text) : tokens_(lex_concept(text)) {}

    Concept parse() {
        Concept c = or_expr();
        if (peek().type != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
        return c;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token take() { return tokens_[pos_++]; }
    bool accept(Tok t) {
        if (peek().type != t) return false;
        ++pos_;
        return true;
    }

    Concept or_expr() {
        Concept c = and_expr();
        while (accept(Tok::KwOr)) c = Concept::disjunction(c, and_expr());
        return c;
    }

    Concept and_expr() {
        Concept c = unary();
        while (accept(Tok::KwAnd)) c = Concept::conjunction(c, unary());
        return c;
    }

    Concept unary() {
        if (accept(Tok::KwNot)) return Concept::negation(unary());
        if (peek().type == Tok::Ident) {
            // one-token lookahead splits role restrictions from named atoms
            Tok next = tokens_[pos_ + 1].type;
            if (next == Tok::KwSome || next == Tok::KwOnly) {
                Token role = take();
                bool existential = take().type == Tok::KwSome;
                Concept filler = unary();
                return existential ? Concept::exists(role.text, filler)
                                   : Concept::forall(role.text, filler);
            }
        }
        return atom();
    }

    Concept atom() {
        const Token& t = peek();
        switch (t.type) {
            case Tok::KwThing:
                take();
                return Concept::top();
            case Tok::KwNothing:
                take();
                return Concept::bottom();
            case Tok::Ident:
                return Concept::named(take().text);
            case Tok::LParen: {
                take();
                Concept c = or_expr();
                if (!accept(Tok::RParen)) throw SyntaxError("expected ')'", peek().pos);
                return c;
            }
            case Tok::End:
                throw SyntaxError("unexpected end of input", t.pos);
            default:
                throw SyntaxError("unexpected '" + t.text + "'", t.pos);
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Concept parse_concept(std::string_view text) { return detail::ConceptParser(text).parse(); }

}  // namespace celkit
