#include "xphase/parser.hpp"

#include <cctype>

#include "xphase/errors.hpp"

namespace xphase {

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };
    Kind kind;
    std::size_t offset;
    std::string text;  // Number digits or identifier
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::size_t at = pos_;
        if (pos_ >= src_.size()) return {Token::Kind::End, at, ""};
        char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {Token::Kind::Plus, at, "+"};
            case '-': ++pos_; return {Token::Kind::Minus, at, "-"};
            case '*': ++pos_; return {Token::Kind::Star, at, "*"};
            case '^': ++pos_; return {Token::Kind::Caret, at, "^"};
            case '/': ++pos_; return {Token::Kind::Slash, at, "/"};
            case '(': ++pos_; return {Token::Kind::LParen, at, "("};
            case ')': ++pos_; return {Token::Kind::RParen, at, ")"};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return {Token::Kind::Number, at, std::string(src_.substr(start, pos_ - start))};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            return {Token::Kind::Ident, at, std::string(src_.substr(start, pos_ - start))};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", at);
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, ContextPtr ctx)
        : lexer_(src), ctx_(std::move(ctx)), tok_(lexer_.next()) {}

    Poly parse_all() {
        Poly value = parse_expr();
        if (tok_.kind != Token::Kind::End) {
            throw ParseError("unexpected trailing input", tok_.offset);
        }
        return value;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    bool accept(Token::Kind k) {
        if (tok_.kind != k) return false;
        advance();
        return true;
    }

    Poly parse_expr() {
        bool negate = accept(Token::Kind::Minus);
        Poly value = parse_term();
        if (negate) value = -value;
        for (;;) {
            if (accept(Token::Kind::Plus)) {
                value += parse_term();
            } else if (accept(Token::Kind::Minus)) {
                value -= parse_term();
            } else {
                return value;
            }
        }
    }

    Poly parse_term() {
        Poly value = parse_factor();
        while (accept(Token::Kind::Star)) value = value * parse_factor();
        return value;
    }

    Poly parse_factor() {
        Poly base = parse_primary();
        if (!accept(Token::Kind::Caret)) return base;
        bool negative = accept(Token::Kind::Minus);
        if (tok_.kind != Token::Kind::Number) {
            throw ParseError("expected integer exponent after '^'", tok_.offset);
        }
        if (negative) {
            throw ParseError("negative exponents are not allowed", tok_.offset);
        }
        std::size_t at = tok_.offset;
        long exp = 0;
        try {
            exp = std::stol(tok_.text);
        } catch (const std::exception&) {
            throw ParseError("exponent out of range", at);
        }
        if (exp > 64) throw ParseError("exponent out of range", at);
        bool base_odd = base.parity() == std::optional<int>(1);
        if (base_odd && exp > 1) {
            throw ParseError("exponent on a ghost variable must be 0 or 1", at);
        }
        advance();
        Poly out = Poly::constant(ctx_, Scalar(1));
        for (long k = 0; k < exp; ++k) out = out * base;
        return out;
    }

    Poly parse_primary() {
        switch (tok_.kind) {
            case Token::Kind::Number: {
                mpz_class num(tok_.text);
                advance();
                if (accept(Token::Kind::Slash)) {
                    if (tok_.kind != Token::Kind::Number) {
                        throw ParseError("expected denominator after '/'", tok_.offset);
                    }
                    mpz_class den(tok_.text);
                    if (den == 0) throw ParseError("zero denominator", tok_.offset);
                    advance();
                    mpq_class value(num, den);
                    value.canonicalize();
                    return Poly::constant(ctx_, Scalar(value));
                }
                return Poly::constant(ctx_, Scalar(mpq_class(num)));
            }
            case Token::Kind::Ident: {
                if (tok_.text == "i") {
                    advance();
                    return Poly::constant(ctx_, Scalar::imaginary_unit());
                }
                auto var = ctx_->lookup(tok_.text);
                if (!var) {
                    throw ParseError("unknown variable '" + tok_.text + "'", tok_.offset);
                }
                advance();
                return Poly::variable(ctx_, *var);
            }
            case Token::Kind::LParen: {
                std::size_t at = tok_.offset;
                advance();
                Poly inner = parse_expr();
                if (!accept(Token::Kind::RParen)) {
                    throw ParseError("unbalanced '('", at);
                }
                return inner;
            }
            default:
                throw ParseError("expected a literal, variable, or '('", tok_.offset);
        }
    }

    Lexer lexer_;
    ContextPtr ctx_;
    Token tok_;
};

}  // namespace

Poly parse(std::string_view text, const ContextPtr& ctx) {
    return Parser(text, ctx).parse_all();
}

}  // namespace xphase
