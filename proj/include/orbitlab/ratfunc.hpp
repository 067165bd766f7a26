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

#include <string>
#include <utility>

#include "orbitlab/poly.hpp"

namespace orbitlab {

/// Element of F(t) in lowest terms with a monic denominator.
template <Field F>
class RatFunc {
public:
    using P = Poly<F>;
    using context = typename algebra<F>::context;

    RatFunc() = default;
    explicit RatFunc(context ctx) : num_(ctx), den_(P::one(ctx)) {}
    RatFunc(P num) : num_(std::move(num)), den_(P::one(num_.ctx())) {}  // NOLINT(google-explicit-constructor)
    RatFunc(P num, P den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RatFunc constant(const F& c) { return RatFunc(P::constant(c)); }
    static RatFunc var(context ctx) { return RatFunc(P::var(ctx)); }

    context ctx() const { return num_.ctx(); }
    const P& num() const { return num_; }
    const P& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

    /// Degree height: max(deg num, deg den); 0 for constants and zero.
    int height() const { return std::max(std::max(num_.degree(), 0), den_.degree()); }

    RatFunc inverse() const {
        if (is_zero()) throw domain_error("inverse of zero rational function");
        return RatFunc(den_, num_);
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ + b.num_);
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    RatFunc operator-() const {
        RatFunc r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_polynomial() && b.is_polynomial()) return RatFunc(a.num_ * b.num_);
        if (a.is_zero() || b.is_zero()) return RatFunc(a.ctx());
        P g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        RatFunc r;
        r.num_ = a.num_.exact_div(g1) * b.num_.exact_div(g2);
        r.den_ = a.den_.exact_div(g2) * b.den_.exact_div(g1);
        r.fix_sign();
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc pow(std::uint64_t e) const {
        RatFunc r(P::one(ctx())), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    /// d/dt.
    RatFunc derivative() const {
        return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

private:
    void normalize() {
        if (den_.is_zero()) throw domain_error("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = P::one(den_.ctx());
            return;
        }
        if (den_.degree() > 0) {
            P g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = num_.exact_div(g);
                den_ = den_.exact_div(g);
            }
        }
        fix_sign();
    }
    void fix_sign() {
        F lc = den_.lead();
        if (!(lc == algebra<F>::one(den_.ctx()))) {
            F inv = algebra<F>::one(den_.ctx()) / lc;
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }

    P num_;
    P den_;
};

/// Canonical text "num/den"; multi-term parts are parenthesized.
template <Field F>
std::string to_string(const RatFunc<F>& r, const std::string& var = "t") {
    std::string n = to_string(r.num(), var);
    if (r.den().degree() == 0) return n;
    std::string d = to_string(r.den(), var);
    if (detail::is_sum(n)) n = "(" + n + ")";
    if (detail::is_sum(d) || d.find('*') != std::string::npos) d = "(" + d + ")";
    return n + "/" + d;
}

template <Field F>
struct algebra<RatFunc<F>> {
    using context = typename algebra<F>::context;
    static constexpr bool is_field = true;
    static context ctx(const RatFunc<F>& x) { return x.ctx(); }
    static RatFunc<F> zero(context c) { return RatFunc<F>(c); }
    static RatFunc<F> one(context c) { return RatFunc<F>(Poly<F>::one(c)); }
    static RatFunc<F> from_int(context c, std::int64_t v) { return RatFunc<F>(Poly<F>(c, {algebra<F>::from_int(c, v)})); }
    static bool is_zero(const RatFunc<F>& x) { return x.is_zero(); }
    static std::uint64_t characteristic(context c) { return algebra<F>::characteristic(c); }
    static std::string str(const RatFunc<F>& x) { return to_string(x, "t"); }
};

using FpPoly = Poly<Fp>;
using FpRatFunc = RatFunc<Fp>;
using QPoly = Poly<BigRat>;
using QRatFunc = RatFunc<BigRat>;

}  // namespace orbitlab
