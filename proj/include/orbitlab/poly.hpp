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

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "orbitlab/numbers.hpp"

namespace orbitlab {

/// Dense univariate polynomial over a coefficient ring R, constant term
/// first. The coefficient vector never carries trailing zeros, so the
/// zero polynomial has an empty vector and degree -1.
template <Ring R>
class Poly {
public:
    using coeff_type = R;
    using context = typename algebra<R>::context;

    Poly() = default;
    explicit Poly(context ctx) : ctx_(ctx) {}
    Poly(context ctx, std::vector<R> coeffs) : ctx_(ctx), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const R& c) { return Poly(algebra<R>::ctx(c), {c}); }
    static Poly monomial(const R& c, std::size_t k) {
        std::vector<R> v(k + 1, algebra<R>::zero(algebra<R>::ctx(c)));
        v[k] = c;
        return Poly(algebra<R>::ctx(c), std::move(v));
    }
    /// The variable itself.
    static Poly var(context ctx) { return monomial(algebra<R>::one(ctx), 1); }
    static Poly one(context ctx) { return constant(algebra<R>::one(ctx)); }

    context ctx() const { return ctx_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    std::size_t size() const { return c_.size(); }
    const std::vector<R>& coeffs() const { return c_; }

    R coeff(std::size_t k) const { return k < c_.size() ? c_[k] : algebra<R>::zero(ctx_); }
    R lead() const { return c_.empty() ? algebra<R>::zero(ctx_) : c_.back(); }
    R constant_term() const { return coeff(0); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        const Poly& big = a.c_.size() >= b.c_.size() ? a : b;
        const Poly& small = a.c_.size() >= b.c_.size() ? b : a;
        std::vector<R> r = big.c_;
        for (std::size_t i = 0; i < small.c_.size(); ++i) r[i] = r[i] + small.c_[i];
        return Poly(a.ctx_, std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    Poly operator-() const {
        std::vector<R> r;
        r.reserve(c_.size());
        for (const R& x : c_) r.push_back(-x);
        return Poly(ctx_, std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) { return multiply(a, b); }
    friend Poly operator*(const R& s, const Poly& a) {
        if (algebra<R>::is_zero(s)) return Poly(a.ctx_);
        std::vector<R> r;
        r.reserve(a.c_.size());
        for (const R& x : a.c_) r.push_back(s * x);
        return Poly(a.ctx_, std::move(r));
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    /// Graded order: degree first, then coefficients from the top.
    friend auto operator<=>(const Poly& a, const Poly& b)
        requires std::three_way_comparable<R>
    {
        if (auto c = a.degree() <=> b.degree(); c != 0) return std::compare_three_way_result_t<R>(c);
        for (int i = a.degree(); i >= 0; --i) {
            if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
        }
        return std::compare_three_way_result_t<R>(std::strong_ordering::equal);
    }

    Poly shift(std::size_t k) const {
        if (is_zero()) return *this;
        std::vector<R> r(k, algebra<R>::zero(ctx_));
        r.insert(r.end(), c_.begin(), c_.end());
        return Poly(ctx_, std::move(r));
    }

    Poly derivative() const {
        std::vector<R> r;
        for (std::size_t i = 1; i < c_.size(); ++i)
            r.push_back(algebra<R>::from_int(ctx_, static_cast<std::int64_t>(i)) * c_[i]);
        return Poly(ctx_, std::move(r));
    }

    /// Horner evaluation at a point of any ring the coefficients embed into.
    template <class S, class Embed>
    S eval_with(const S& x, const S& zero, Embed embed) const {
        S acc = zero;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + embed(c_[i]);
        return acc;
    }
    R operator()(const R& x) const {
        return eval_with(x, algebra<R>::zero(ctx_), [](const R& c) { return c; });
    }

    /// this(inner(x)).
    Poly compose(const Poly& inner) const {
        return eval_with(inner, Poly(ctx_), [&](const R& c) { return Poly(ctx_, {c}); });
    }

    Poly pow(std::uint64_t e) const {
        Poly r = one(ctx_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    template <class F>
    auto map_coeffs(F f) const {
        using T = decltype(f(std::declval<R>()));
        std::vector<T> r;
        r.reserve(c_.size());
        for (const R& x : c_) r.push_back(f(x));
        if (r.empty()) return Poly<T>();
        auto cx = algebra<T>::ctx(r.front());
        return Poly<T>(cx, std::move(r));
    }

    // ---- field-only operations ---------------------------------------------

    /// Long division: returns (quotient, remainder).
    std::pair<Poly, Poly> divmod(const Poly& d) const
        requires Field<R>
    {
        if (d.is_zero()) throw domain_error("polynomial division by zero");
        if (degree() < d.degree()) return {Poly(ctx_), *this};
        std::vector<R> rem = c_;
        const std::size_t dn = d.c_.size();
        std::vector<R> q(c_.size() - dn + 1, algebra<R>::zero(ctx_));
        const R inv = algebra<R>::one(ctx_) / d.lead();
        for (std::size_t i = q.size(); i-- > 0;) {
            const R& top = rem[i + dn - 1];
            if (algebra<R>::is_zero(top)) continue;
            R f = top * inv;
            q[i] = f;
            for (std::size_t j = 0; j < dn; ++j) rem[i + j] = rem[i + j] - f * d.c_[j];
        }
        rem.resize(dn - 1, algebra<R>::zero(ctx_));
        return {Poly(ctx_, std::move(q)), Poly(ctx_, std::move(rem))};
    }
    friend Poly operator/(const Poly& a, const Poly& b)
        requires Field<R>
    {
        return a.divmod(b).first;
    }
    friend Poly operator%(const Poly& a, const Poly& b)
        requires Field<R>
    {
        return a.divmod(b).second;
    }

    /// Exact division; throws if b does not divide a.
    Poly exact_div(const Poly& b) const
        requires Field<R>
    {
        auto [q, r] = divmod(b);
        if (!r.is_zero()) throw domain_error("inexact polynomial division");
        return q;
    }

    Poly monic() const
        requires Field<R>
    {
        if (is_zero()) return *this;
        return (algebra<R>::one(ctx_) / lead()) * *this;
    }

    /// Trim trailing coefficient zeros; idempotent.
    void trim() {
        while (!c_.empty() && algebra<R>::is_zero(c_.back())) c_.pop_back();
    }

private:
    static Poly multiply(const Poly& a, const Poly& b);

    context ctx_{};
    std::vector<R> c_;
};

// --- multiplication ----------------------------------------------------------

namespace detail {

template <Ring R>
std::vector<R> schoolbook(const std::vector<R>& a, const std::vector<R>& b, const R& zero) {
    std::vector<R> r(a.size() + b.size() - 1, zero);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (algebra<R>::is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    }
    return r;
}

inline int bit_length(std::uint64_t x) { return x == 0 ? 0 : 64 - __builtin_clzll(x); }

// Kronecker substitution: pack both operands into big integers with
// fixed-width slots wide enough that no slot overflows, multiply with GMP,
// unpack and reduce mod p.
inline std::vector<Fp> kronecker_mul(const std::vector<Fp>& a, const std::vector<Fp>& b) {
    const std::uint32_t p = a.front().modulus();
    const int slot = 2 * bit_length(p - 1) + bit_length(std::min(a.size(), b.size())) + 1;
    auto pack = [slot](const std::vector<Fp>& v) {
        std::vector<std::uint64_t> words((v.size() * slot + 63) / 64 + 1, 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::uint64_t x = v[i].value();
            std::size_t bit = i * slot;
            words[bit / 64] |= x << (bit % 64);
            if (bit % 64 != 0 && bit % 64 + 32 > 64) words[bit / 64 + 1] |= x >> (64 - bit % 64);
        }
        mpz_class z;
        mpz_import(z.get_mpz_t(), words.size(), -1, sizeof(std::uint64_t), 0, 0, words.data());
        return z;
    };
    mpz_class prod = pack(a) * pack(b);
    const std::size_t n = a.size() + b.size() - 1;
    std::vector<std::uint64_t> words(n * slot / 64 + 3, 0);
    std::size_t count = 0;
    mpz_export(words.data(), &count, -1, sizeof(std::uint64_t), 0, 0, prod.get_mpz_t());
    using u128 = unsigned __int128;
    const u128 mask = slot >= 128 ? ~u128(0) : ((u128(1) << slot) - 1);
    std::vector<Fp> r;
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t bit = i * slot, w = bit / 64, off = bit % 64;
        u128 chunk = u128(words[w]) | (u128(words[w + 1]) << 64);
        u128 val = chunk >> off;
        if (off != 0) val |= u128(words[w + 2]) << (128 - off);
        val &= mask;
        r.push_back(Fp::raw(p, static_cast<std::uint32_t>(val % p)));
    }
    return r;
}

}  // namespace detail

template <Ring R>
Poly<R> Poly<R>::multiply(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.ctx_);
    if constexpr (std::is_same_v<R, Fp>) {
        if (std::min(a.c_.size(), b.c_.size()) >= 48) return Poly(a.ctx_, detail::kronecker_mul(a.c_, b.c_));
    }
    return Poly(a.ctx_, detail::schoolbook(a.c_, b.c_, algebra<R>::zero(a.ctx_)));
}

// --- gcd family (fields) -----------------------------------------------------

/// Monic gcd; gcd(0, 0) = 0.
template <Field F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
    while (!b.is_zero()) {
        Poly<F> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g and g monic.
template <Field F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> xgcd(const Poly<F>& a, const Poly<F>& b) {
    using P = Poly<F>;
    auto ctx = a.is_zero() ? b.ctx() : a.ctx();
    P r0 = a, r1 = b, s0 = P::one(ctx), s1(ctx), t0(ctx), t1 = P::one(ctx);
    while (!r1.is_zero()) {
        auto [q, r] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        P s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    F inv = algebra<F>::one(ctx) / r0.lead();
    return {inv * r0, inv * s0, inv * t0};
}

/// Inverse of a modulo m; throws domain_error if gcd(a, m) != 1.
template <Field F>
Poly<F> inverse_mod(const Poly<F>& a, const Poly<F>& m) {
    auto [g, s, t] = xgcd(a % m, m);
    if (g.degree() != 0) throw domain_error("element is not invertible modulo the given polynomial");
    return s % m;
}

template <Field F>
Poly<F> powmod(Poly<F> base, BigInt e, const Poly<F>& m) {
    Poly<F> r = Poly<F>::one(m.ctx()) % m;
    base = base % m;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = (r * base) % m;
        e >>= 1;
        if (e > 0) base = (base * base) % m;
    }
    return r;
}

// --- printing ------------------------------------------------------------------

namespace detail {

inline bool is_sum(const std::string& s) {
    return s.find(" + ") != std::string::npos || s.find(" - ") != std::string::npos;
}

}  // namespace detail

/// Canonical text: terms by decreasing degree, e.g. "t^3 + 2*t + 1".
template <Ring R>
std::string to_string(const Poly<R>& f, const std::string& var = "t") {
    if (f.is_zero()) return "0";
    const auto ctx = f.ctx();
    const R one = algebra<R>::one(ctx);
    const R minus_one = -one;
    std::string out;
    for (int k = f.degree(); k >= 0; --k) {
        const R& c = f.coeffs()[k];
        if (algebra<R>::is_zero(c)) continue;
        bool negative = false;
        std::string cs;
        if (k > 0 && c == one) {
            cs = "";
        } else if (k > 0 && c == minus_one && algebra<R>::characteristic(ctx) == 0) {
            negative = true;
        } else {
            cs = algebra<R>::str(c);
            if (!cs.empty() && cs[0] == '-' && !detail::is_sum(cs)) {
                negative = true;
                cs = cs.substr(1);
            }
            const bool sum = detail::is_sum(cs), frac = cs.find('/') != std::string::npos;
            if ((k > 0 && (sum || frac)) || (k == 0 && sum && !out.empty() && cs[0] == '-'))
                cs = "(" + cs + ")";
        }
        std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
        std::string term = cs.empty() ? mono : (mono.empty() ? cs : cs + "*" + mono);
        if (out.empty()) {
            out = negative ? "-" + term : term;
        } else {
            out += negative ? " - " : " + ";
            out += term;
        }
    }
    return out;
}

template <Ring R>
struct algebra<Poly<R>> {
    using context = typename algebra<R>::context;
    static constexpr bool is_field = false;
    static context ctx(const Poly<R>& x) { return x.ctx(); }
    static Poly<R> zero(context c) { return Poly<R>(c); }
    static Poly<R> one(context c) { return Poly<R>::one(c); }
    static Poly<R> from_int(context c, std::int64_t v) { return Poly<R>(c, {algebra<R>::from_int(c, v)}); }
    static bool is_zero(const Poly<R>& x) { return x.is_zero(); }
    static std::uint64_t characteristic(context c) { return algebra<R>::characteristic(c); }
    static std::string str(const Poly<R>& x) { return to_string(x, "t"); }
};

}  // namespace orbitlab
