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

// Places, factorizations, valuations, supports and heights for the three
// working fields Q, F_p(t) and Q(t). Everything generic downstream goes
// through field_ops<K>.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitlab/factor_fp.hpp"
#include "orbitlab/factor_int.hpp"
#include "orbitlab/factor_zx.hpp"

namespace orbitlab {

// --- resource limits -----------------------------------------------------------

struct Limits {
    std::uint64_t degree_cap = 100000;
    FactorConfig factor;
};

/// Defaults overridden by ORBITLAB_DEGREE_CAP and ORBITLAB_FACTOR_BOUND.
inline Limits limits_from_env() {
    Limits l;
    if (const char* s = std::getenv("ORBITLAB_DEGREE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end == s || *end != '\0' || v == 0) throw domain_error("bad ORBITLAB_DEGREE_CAP: " + std::string(s));
        l.degree_cap = v;
    }
    if (const char* s = std::getenv("ORBITLAB_FACTOR_BOUND")) {
        BigInt b;
        if (b.set_str(s, 10) != 0 || b <= 0) throw domain_error("bad ORBITLAB_FACTOR_BOUND: " + std::string(s));
        l.factor.bound = b;
    }
    return l;
}

// --- places ----------------------------------------------------------------------

/// A rational prime q; N_q = log q.
struct QPlace {
    BigInt q;

    double norm() const { return log_abs(q); }
    /// Size of the residue field.
    BigInt residue_size() const { return q; }
    std::string str() const { return q.get_str(); }
    friend bool operator==(const QPlace&, const QPlace&) = default;
    friend std::strong_ordering operator<=>(const QPlace& a, const QPlace& b) {
        int c = cmp(a.q, b.q);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
};

/// A place of F(t): a monic irreducible pi, or the degree valuation at infinity.
template <Field F>
struct FnPlace {
    bool infinite = false;
    Poly<F> pi;

    static FnPlace infinity() { return FnPlace{true, {}}; }
    static FnPlace finite(Poly<F> p) { return FnPlace{false, std::move(p)}; }

    /// N_v = [k_v : k].
    int norm() const { return infinite ? 1 : pi.degree(); }
    std::string str() const { return infinite ? "inf" : to_string(pi); }
    friend bool operator==(const FnPlace& a, const FnPlace& b) {
        return a.infinite == b.infinite && (a.infinite || a.pi == b.pi);
    }
    // finite places in graded order, infinity last
    friend std::strong_ordering operator<=>(const FnPlace& a, const FnPlace& b) {
        if (a.infinite || b.infinite) return a.infinite <=> b.infinite;
        auto c = a.pi <=> b.pi;
        if constexpr (std::is_same_v<decltype(c), std::strong_ordering>) {
            return c;
        } else {
            return c < 0 ? std::strong_ordering::less
                         : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
        }
    }
};

/// Exact factorization unit * prod pi^e over the finite places.
template <class K, class Place>
struct FactoredElem {
    friend bool operator==(const FactoredElem&, const FactoredElem&) = default;
    K unit;
    std::vector<std::pair<Place, int>> factors;

    int exponent(const Place& v) const {
        for (const auto& [w, e] : factors)
            if (w == v) return e;
        return 0;
    }
};

template <class K>
struct field_ops;

// --- Q ---------------------------------------------------------------------------

template <>
struct field_ops<BigRat> {
    using place = QPlace;
    using factored = FactoredElem<BigRat, QPlace>;
    using integer = BigInt;
    static constexpr bool function_field = false;
    static constexpr const char* name = "Q";

    static BigRat from_int(NoContext, long v) { return BigRat(v); }

    static factored factor(const BigRat& x, const FactorConfig& cfg = {}) {
        if (x.is_zero()) throw domain_error("factor: zero has no factorization");
        factored out{BigRat(static_cast<long>(x.sign())), {}};
        for (auto& [q, e] : factor_integer(x.num(), cfg)) out.factors.emplace_back(QPlace{q}, e);
        for (auto& [q, e] : factor_integer(x.den(), cfg)) out.factors.emplace_back(QPlace{q}, -e);
        std::sort(out.factors.begin(), out.factors.end());
        return out;
    }

    static BigRat recombine(const factored& f) {
        BigInt n = 1, d = 1;
        for (const auto& [v, e] : f.factors) {
            if (e > 0) n *= ipow(v.q, static_cast<unsigned long>(e));
            else d *= ipow(v.q, static_cast<unsigned long>(-e));
        }
        return f.unit * BigRat(n, d);
    }

    static int valuation(const BigRat& x, const QPlace& v) {
        if (x.is_zero()) throw domain_error("valuation of zero");
        BigInt t;
        int e = static_cast<int>(mpz_remove(t.get_mpz_t(), x.num().get_mpz_t(), v.q.get_mpz_t()));
        if (e) return e;
        return -static_cast<int>(mpz_remove(t.get_mpz_t(), x.den().get_mpz_t(), v.q.get_mpz_t()));
    }

    /// Multiplicative height H = max(|num|, den).
    static BigInt height(const BigRat& x) { return x.is_zero() ? BigInt(1) : x.height(); }
    static double log_height(const BigRat& x) { return log_abs(height(x)); }

    static std::vector<QPlace> support(const BigRat& x, const FactorConfig& cfg = {}) {
        std::vector<QPlace> s;
        for (auto& [v, e] : factor(x, cfg).factors)
            if (e > 0) s.push_back(v);
        return s;
    }

    /// Numerator magnitude: the part of x whose primes carry v > 0.
    static BigInt positive_part(const BigRat& x) { return abs(x.num()); }

    static bool in_ring(const BigRat& x, const std::vector<QPlace>& S) {
        BigInt d = x.den();
        for (const auto& v : S) mpz_remove(d.get_mpz_t(), d.get_mpz_t(), v.q.get_mpz_t());
        return d == 1;
    }

    static std::string str(const BigRat& x) { return x.str(); }
};

// --- F(t) for F = F_p or Q -----------------------------------------------------------

namespace detail {

inline std::vector<std::pair<Poly<Fp>, int>> factor_poly(const Poly<Fp>& f, std::uint64_t seed) {
    return fp::factor(f, seed);
}
inline std::vector<std::pair<Poly<BigRat>, int>> factor_poly(const Poly<BigRat>& f, std::uint64_t seed) {
    return zx::factor(f, seed);
}

template <Field F>
int poly_valuation(Poly<F> f, const Poly<F>& pi) {
    int e = 0;
    for (;;) {
        auto [q, r] = f.divmod(pi);
        if (!r.is_zero()) return e;
        f = std::move(q);
        ++e;
    }
}

}  // namespace detail

template <Field F>
struct field_ops<RatFunc<F>> {
    using K = RatFunc<F>;
    using place = FnPlace<F>;
    using factored = FactoredElem<K, place>;
    using integer = Poly<F>;
    static constexpr bool function_field = true;
    static constexpr const char* name = std::is_same_v<F, Fp> ? "Fp_t" : "Q_t";

    static factored factor(const K& x, const FactorConfig& cfg = {}) {
        if (x.is_zero()) throw domain_error("factor: zero has no factorization");
        factored out{K::constant(x.num().lead()), {}};
        for (auto& [g, e] : detail::factor_poly(x.num(), cfg.seed)) out.factors.emplace_back(place::finite(g), e);
        for (auto& [g, e] : detail::factor_poly(x.den(), cfg.seed)) out.factors.emplace_back(place::finite(g), -e);
        std::sort(out.factors.begin(), out.factors.end());
        return out;
    }

    static K recombine(const factored& f) {
        auto c = f.unit.ctx();
        Poly<F> n = Poly<F>::one(c), d = Poly<F>::one(c);
        for (const auto& [v, e] : f.factors) {
            if (v.infinite) throw domain_error("recombine: infinity is not a multiplicative factor");
            if (e > 0) n = n * v.pi.pow(static_cast<std::uint64_t>(e));
            else d = d * v.pi.pow(static_cast<std::uint64_t>(-e));
        }
        return f.unit * K(n, d);
    }

    static int valuation(const K& x, const place& v) {
        if (x.is_zero()) throw domain_error("valuation of zero");
        if (v.infinite) return x.den().degree() - x.num().degree();
        int e = detail::poly_valuation(x.num(), v.pi);
        return e ? e : -detail::poly_valuation(x.den(), v.pi);
    }

    /// h = max(deg num, deg den); h(0) = 0.
    static long height(const K& x) { return x.height(); }
    static double log_height(const K& x) { return static_cast<double>(x.height()); }

    static std::vector<place> support(const K& x, const FactorConfig& cfg = {}) {
        std::vector<place> s;
        for (auto& [v, e] : factor(x, cfg).factors)
            if (e > 0) s.push_back(v);
        if (valuation(x, place::infinity()) > 0) s.push_back(place::infinity());
        return s;
    }

    static Poly<F> positive_part(const K& x) { return x.num().monic(); }

    static bool in_ring(const K& x, const std::vector<place>& S) {
        Poly<F> d = x.den();
        for (const auto& v : S) {
            if (v.infinite) continue;
            while (d.degree() > 0) {
                auto [q, r] = d.divmod(v.pi);
                if (!r.is_zero()) break;
                d = std::move(q);
            }
        }
        if (d.degree() > 0) return false;
        bool inf_in_S = std::any_of(S.begin(), S.end(), [](const place& v) { return v.infinite; });
        return inf_in_S || x.is_zero() || valuation(x, place::infinity()) >= 0;
    }

    static std::string str(const K& x) { return to_string(x); }
};

/// Sum over all places of v(x) * N_v, infinity included (0 for every x != 0
/// over a function field).
template <Field F>
long product_formula_sum(const RatFunc<F>& x, const FactorConfig& cfg = {}) {
    using ops = field_ops<RatFunc<F>>;
    long s = 0;
    for (const auto& [v, e] : ops::factor(x, cfg).factors) s += static_cast<long>(e) * v.norm();
    s += ops::valuation(x, FnPlace<F>::infinity());
    return s;
}

/// Sum of max(v(x), 0) * N_v over finite places.
template <Field F>
long finite_positive_sum(const RatFunc<F>& x, const FactorConfig& cfg = {}) {
    long s = 0;
    for (const auto& [v, e] : field_ops<RatFunc<F>>::factor(x, cfg).factors)
        if (e > 0) s += static_cast<long>(e) * v.norm();
    return s;
}

inline double finite_positive_sum(const BigRat& x, const FactorConfig& cfg = {}) {
    double s = 0;
    for (const auto& [v, e] : field_ops<BigRat>::factor(x, cfg).factors)
        if (e > 0) s += e * v.norm();
    return s;
}

}  // namespace orbitlab
