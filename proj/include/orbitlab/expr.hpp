// Copyright 2026 The orbitlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Expressions in x and t:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' integer)?
//   primary := integer | 't' | 'x' | '(' expr ')'
//
// Division is only by x-free, nonzero values.

#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "orbitlab/ratfunc.hpp"

namespace orbitlab {

class parse_error : public domain_error {
public:
    parse_error(std::size_t offset, const std::string& what)
        : domain_error("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { integer, symbol, add, sub, mul, div, pow, neg };
    Kind kind = Kind::integer;
    BigInt value;               // integer
    char symbol = 0;            // 't' or 'x'
    std::uint32_t exponent = 0; // pow
    ExprPtr lhs, rhs;           // rhs unused for neg and pow

    static ExprPtr integer(BigInt v) {
        auto e = std::make_shared<Expr>();
        e->value = std::move(v);
        return e;
    }
    static ExprPtr sym(char s) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::symbol;
        e->symbol = s;
        return e;
    }
    static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }
    static ExprPtr negate(ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::neg;
        e->lhs = std::move(a);
        return e;
    }
    static ExprPtr power(ExprPtr a, std::uint32_t k) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::pow;
        e->lhs = std::move(a);
        e->exponent = k;
        return e;
    }
};

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::integer: return a->value == b->value;
        case Expr::Kind::symbol: return a->symbol == b->symbol;
        case Expr::Kind::neg: return equal(a->lhs, b->lhs);
        case Expr::Kind::pow: return a->exponent == b->exponent && equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip();
        if (pos_ < s_.size()) throw parse_error(pos_, std::string("unexpected '") + s_[pos_] + "'");
        return e;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (accept('+')) e = Expr::binary(Expr::Kind::add, e, term());
            else if (accept('-')) e = Expr::binary(Expr::Kind::sub, e, term());
            else return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            if (accept('*')) e = Expr::binary(Expr::Kind::mul, e, unary());
            else if (accept('/')) e = Expr::binary(Expr::Kind::div, e, unary());
            else return e;
        }
    }
    ExprPtr unary() {
        if (accept('-')) return Expr::negate(unary());
        return power();
    }
    ExprPtr power() {
        ExprPtr base = primary();
        if (!accept('^')) return base;
        skip();
        const std::size_t at = pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            throw parse_error(at, "exponent must be a nonnegative integer");
        BigInt k = digits();
        if (k > BigInt(static_cast<unsigned long>(UINT32_MAX))) throw parse_error(at, "exponent overflow");
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') throw parse_error(pos_, "chained exponents need parentheses");
        return Expr::power(base, static_cast<std::uint32_t>(k.get_ui()));
    }
    ExprPtr primary() {
        skip();
        if (pos_ >= s_.size()) throw parse_error(pos_, "unexpected end of input");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return Expr::integer(digits());
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!accept(')')) throw parse_error(pos_, "expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
            const std::string_view name = s_.substr(pos_, end - pos_);
            if (name == "t" || name == "x") {
                pos_ = end;
                return Expr::sym(name[0]);
            }
            throw parse_error(pos_, "unknown symbol '" + std::string(name) + "'");
        }
        throw parse_error(pos_, std::string("expected an operand, found '") + c + "'");
    }
    BigInt digits() {
        std::size_t end = pos_;
        while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
        BigInt v(std::string(s_.substr(pos_, end - pos_)), 10);
        pos_ = end;
        return v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::add:
        case Expr::Kind::sub: return 1;
        case Expr::Kind::mul:
        case Expr::Kind::div: return 2;
        case Expr::Kind::neg: return 3;
        case Expr::Kind::pow: return 4;
        default: return 5;
    }
}

inline std::string print_at(const ExprPtr& e, int min_prec) {
    std::string s;
    switch (e->kind) {
        case Expr::Kind::integer: s = e->value.get_str(); break;
        case Expr::Kind::symbol: s = std::string(1, e->symbol); break;
        case Expr::Kind::add:
        case Expr::Kind::sub:
            s = print_at(e->lhs, 1) + (e->kind == Expr::Kind::add ? " + " : " - ") + print_at(e->rhs, 2);
            break;
        case Expr::Kind::mul:
        case Expr::Kind::div:
            s = print_at(e->lhs, 2) + (e->kind == Expr::Kind::mul ? "*" : "/") + print_at(e->rhs, 3);
            break;
        case Expr::Kind::neg: s = "-" + print_at(e->lhs, 3); break;
        case Expr::Kind::pow: s = print_at(e->lhs, 5) + "^" + std::to_string(e->exponent); break;
    }
    return precedence(*e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace detail

/// Throws parse_error carrying the byte offset of the problem.
inline ExprPtr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Text that parses back to the same tree.
inline std::string print_expr(const ExprPtr& e) { return detail::print_at(e, 0); }

inline bool mentions(const ExprPtr& e, char sym) {
    if (!e) return false;
    if (e->kind == Expr::Kind::symbol) return e->symbol == sym;
    return mentions(e->lhs, sym) || mentions(e->rhs, sym);
}

// --- reduction into K[x] ------------------------------------------------------------------

namespace detail {

template <class K>
struct Embed;

template <>
struct Embed<BigRat> {
    static BigRat integer(NoContext, const BigInt& v) { return BigRat(v, BigInt(1)); }
    static BigRat t(NoContext) { throw domain_error("symbol 't' is not available over Q"); }
};

template <Field F>
struct Embed<RatFunc<F>> {
    using ctx_t = typename algebra<F>::context;
    static RatFunc<F> integer(ctx_t c, const BigInt& v) {
        if constexpr (std::is_same_v<F, Fp>) {
            BigInt r = v % BigInt(static_cast<unsigned long>(c));
            if (r < 0) r += c;
            return RatFunc<F>::constant(Fp::raw(c, static_cast<std::uint32_t>(r.get_ui())));
        } else {
            return RatFunc<F>::constant(BigRat(v, BigInt(1)));
        }
    }
    static RatFunc<F> t(ctx_t c) { return RatFunc<F>::var(c); }
};

template <class K>
Poly<K> reduce(const ExprPtr& e, typename algebra<K>::context c, std::uint64_t degree_cap) {
    using P = Poly<K>;
    switch (e->kind) {
        case Expr::Kind::integer: return P::constant(Embed<K>::integer(c, e->value));
        case Expr::Kind::symbol:
            return e->symbol == 'x' ? P::var(c) : P::constant(Embed<K>::t(c));
        case Expr::Kind::add: return reduce<K>(e->lhs, c, degree_cap) + reduce<K>(e->rhs, c, degree_cap);
        case Expr::Kind::sub: return reduce<K>(e->lhs, c, degree_cap) - reduce<K>(e->rhs, c, degree_cap);
        case Expr::Kind::mul: {
            P a = reduce<K>(e->lhs, c, degree_cap), b = reduce<K>(e->rhs, c, degree_cap);
            if (!a.is_zero() && !b.is_zero() &&
                static_cast<std::uint64_t>(a.degree()) + static_cast<std::uint64_t>(b.degree()) > degree_cap)
                throw size_error("expression degree exceeds the degree cap");
            return a * b;
        }
        case Expr::Kind::div: {
            P a = reduce<K>(e->lhs, c, degree_cap), b = reduce<K>(e->rhs, c, degree_cap);
            if (b.degree() > 0) throw domain_error("division by an expression in x");
            if (b.is_zero()) throw domain_error("division by zero");
            return a * P::constant(algebra<K>::one(c) / b.constant_term());
        }
        case Expr::Kind::neg: return -reduce<K>(e->lhs, c, degree_cap);
        case Expr::Kind::pow: {
            P a = reduce<K>(e->lhs, c, degree_cap);
            if (a.degree() > 0 && static_cast<std::uint64_t>(a.degree()) * e->exponent > degree_cap)
                throw size_error("expression degree exceeds the degree cap");
            if (a.degree() <= 0 && e->exponent > 0) {
                // constants in t still grow in t-degree
                if constexpr (!std::is_same_v<K, BigRat>) {
                    if (!a.is_zero() && static_cast<std::uint64_t>(std::max<long>(a.constant_term().height(), 0)) *
                                                e->exponent > degree_cap)
                        throw size_error("expression degree exceeds the degree cap");
                }
            }
            return a.pow(e->exponent);
        }
    }
    throw domain_error("malformed expression");
}

}  // namespace detail

/// The polynomial in x with coefficients in K described by e.
template <class K>
Poly<K> to_poly(const ExprPtr& e, typename algebra<K>::context c, std::uint64_t degree_cap = 100000) {
    return detail::reduce<K>(e, c, degree_cap);
}

/// An element of K; the expression may not mention x.
template <class K>
K to_value(const ExprPtr& e, typename algebra<K>::context c, std::uint64_t degree_cap = 100000) {
    if (mentions(e, 'x')) throw domain_error("value expression may not mention x");
    Poly<K> p = detail::reduce<K>(e, c, degree_cap);
    return p.is_zero() ? algebra<K>::zero(c) : p.constant_term();
}

}  // namespace orbitlab
