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
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitlab/fields.hpp"

namespace orbitlab {

/// A polynomial map phi of degree d >= 2 over the working field K.
/// Maps of the shape x^d + f are recognized and iterated directly.
template <class K>
class DynSys {
public:
    using context = typename algebra<K>::context;

    explicit DynSys(Poly<K> phi) : phi_(std::move(phi)) {
        if (phi_.degree() < 2) throw domain_error("dynamical system needs degree >= 2");
        const context c = phi_.ctx();
        bool special = phi_.lead() == algebra<K>::one(c);
        for (int i = 1; special && i < phi_.degree(); ++i) special = algebra<K>::is_zero(phi_.coeffs()[i]);
        if (special) f_ = phi_.constant_term();
    }

    /// x^d + f.
    static DynSys unicritical(int d, const K& f) {
        const context c = algebra<K>::ctx(f);
        return DynSys(Poly<K>::monomial(algebra<K>::one(c), static_cast<std::size_t>(d)) + Poly<K>::constant(f));
    }

    const Poly<K>& poly() const { return phi_; }
    int degree() const { return phi_.degree(); }
    context ctx() const { return phi_.ctx(); }
    bool is_unicritical() const { return f_.has_value(); }
    /// f for phi = x^d + f; throws otherwise.
    const K& f() const {
        if (!f_) throw domain_error("map is not of the form x^d + f");
        return *f_;
    }

    K operator()(const K& x) const {
        if (f_) return power(x, static_cast<std::uint64_t>(degree())) + *f_;
        return phi_(x);
    }

private:
    static K power(const K& x, std::uint64_t e) {
        if constexpr (requires { x.pow(e); }) {
            return x.pow(e);
        } else {
            K r = algebra<K>::one(algebra<K>::ctx(x)), b = x;
            while (e) {
                if (e & 1) r = r * b;
                e >>= 1;
                if (e) b = b * b;
            }
            return r;
        }
    }

    Poly<K> phi_;
    std::optional<K> f_;
};

template <>
inline BigRat DynSys<BigRat>::power(const BigRat& x, std::uint64_t e) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), x.num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), x.den().get_mpz_t(), e);
    return BigRat(r.get_num(), r.get_den());
}

/// phi^n(b) by n successive evaluations.
template <class K>
K iterate_value(const DynSys<K>& phi, const K& b, int n) {
    if (n < 1) throw domain_error("iterate_value needs n >= 1");
    K x = b;
    for (int i = 0; i < n; ++i) x = phi(x);
    return x;
}

/// Coefficients of phi^n(x); refuses when d^n exceeds the degree cap.
template <class K>
Poly<K> iterate_poly(const DynSys<K>& phi, int n, std::uint64_t degree_cap = 100000) {
    if (n < 1) throw domain_error("iterate_poly needs n >= 1");
    const std::uint64_t d = static_cast<std::uint64_t>(phi.degree());
    std::uint64_t deg = 1;
    for (int i = 0; i < n; ++i) {
        deg *= d;
        if (deg > degree_cap)
            throw size_error("deg phi^" + std::to_string(n) + " exceeds the degree cap " + std::to_string(degree_cap));
    }
    Poly<K> acc = phi.poly();
    for (int i = 1; i < n; ++i) {
        if (phi.is_unicritical()) {
            acc = acc.pow(d) + Poly<K>::constant(phi.f());
        } else {
            acc = phi.poly().compose(acc);
        }
    }
    return acc;
}

// --- orbits ----------------------------------------------------------------------

template <class K>
struct OrbitEntry {
    friend bool operator==(const OrbitEntry&, const OrbitEntry&) = default;
    using factored = typename field_ops<K>::factored;
    int n = 0;
    K value;
    std::optional<factored> factorization;  // empty for a zero value or a failure
    std::string failure;                    // survivor description when factoring failed

    bool is_zero() const { return algebra<K>::is_zero(value); }
    bool failed() const { return !failure.empty(); }
};

template <class K>
struct OrbitTable {
    friend bool operator==(const OrbitTable&, const OrbitTable&) = default;
    K basepoint;
    std::vector<OrbitEntry<K>> entries;  // entries[i].n == i + 1

    const OrbitEntry<K>& at(int n) const { return entries.at(static_cast<std::size_t>(n - 1)); }
    int size() const { return static_cast<int>(entries.size()); }
};

/// Orbit of b up to phi^N(b), each entry factored.
template <class K>
OrbitTable<K> build_orbit(const DynSys<K>& phi, const K& b, int N, const FactorConfig& cfg = {}, bool factor = true) {
    OrbitTable<K> t{b, {}};
    K x = b;
    for (int n = 1; n <= N; ++n) {
        x = phi(x);
        OrbitEntry<K> e;
        e.n = n;
        e.value = x;
        if (factor && !e.is_zero()) {
            try {
                e.factorization = field_ops<K>::factor(x, cfg);
            } catch (const incomplete_factorization& err) {
                e.failure = err.survivor();
            }
        }
        t.entries.push_back(std::move(e));
    }
    return t;
}

// --- heights -----------------------------------------------------------------------

/// |h(phi(x)) - d h(x)| <= value for every x in K. Function fields keep the
/// integer form as well.
struct HeightConstant {
    double value = 0;
    std::optional<long> exact;
};

/// Over F(t): C = d (h(a_d) + sum_i h(a_i)). Over Q an archimedean
/// contribution log 2 + d log R0 + log(d+1) is added, R0 = 1 + 2 sum_{i<d} |a_i|/|a_d|.
template <class K>
HeightConstant height_constant(const DynSys<K>& phi) {
    using ops = field_ops<K>;
    const auto& a = phi.poly().coeffs();
    const int d = phi.degree();
    if constexpr (ops::function_field) {
        long s = ops::height(a.back());
        for (const K& c : a) s += ops::height(c);
        long C = static_cast<long>(d) * s;
        return {static_cast<double>(C), C};
    } else {
        double s = ops::log_height(a.back());
        for (const K& c : a) s += ops::log_height(c);
        BigRat lower_sum(0L);
        for (int i = 0; i < d; ++i) lower_sum += a[i].sign() < 0 ? -a[i] : a[i];
        BigRat lead_abs = a.back().sign() < 0 ? -a.back() : a.back();
        double R0 = 1.0 + 2.0 * (lower_sum / lead_abs).to_double();
        double C = d * s + std::log(2.0) + d * std::log(R0) + std::log(d + 1.0);
        return {C, std::nullopt};
    }
}

/// h(phi^N(b)) / d^N with error radius C / d^N. Function fields also give
/// the exact rational interval.
struct HeightEstimate {
    friend bool operator==(const HeightEstimate&, const HeightEstimate&) = default;
    int iterations = 0;
    double value = 0;
    double radius = 0;
    std::optional<BigRat> exact_value;
    std::optional<BigRat> exact_radius;
    double constant = 0;

    bool contains(const BigRat& x) const {
        if (exact_value) {
            BigRat diff = x - *exact_value;
            if (diff.sign() < 0) diff = -diff;
            return diff <= *exact_radius;
        }
        return std::fabs(x.to_double() - value) <= radius;
    }
};

template <class K>
HeightEstimate canonical_height(const DynSys<K>& phi, const K& b, int N) {
    if (N < 1) throw domain_error("canonical_height needs N >= 1");
    using ops = field_ops<K>;
    HeightConstant C = height_constant(phi);
    K y = iterate_value(phi, b, N);
    BigInt dN = ipow(BigInt(phi.degree()), static_cast<unsigned long>(N));
    HeightEstimate e;
    e.iterations = N;
    e.constant = C.value;
    const double dNd = dN.get_d();
    if constexpr (ops::function_field) {
        e.exact_value = BigRat(BigInt(ops::height(y)), dN);
        e.exact_radius = BigRat(BigInt(*C.exact), dN);
        e.value = e.exact_value->to_double();
        e.radius = e.exact_radius->to_double();
    } else {
        e.value = ops::log_height(y) / dNd;
        e.radius = C.value / dNd;
    }
    return e;
}

enum class OrbitKind { preperiodic, wandering, undetermined };

inline const char* to_string(OrbitKind k) {
    switch (k) {
        case OrbitKind::preperiodic: return "preperiodic";
        case OrbitKind::wandering: return "wandering";
        default: return "undetermined";
    }
}

template <class K>
struct PreperiodicResult {
    OrbitKind kind = OrbitKind::undetermined;
    std::vector<K> tail;   // b, ..., up to the first periodic point (exclusive)
    std::vector<K> cycle;  // the periodic cycle reached
    int certified_at = 0;  // wandering: index n with h(phi^n(b)) above the threshold
    double threshold = 0;  // C / (d - 1)
    std::optional<long> exact_height;  // h(phi^n(b)) at certification, function fields
};

/// Exact cycle detection; wandering is certified once h(phi^n(b)) exceeds
/// C/(d-1), since then h-hat(phi^n(b)) >= h - C/(d-1) > 0.
template <class K>
PreperiodicResult<K> is_preperiodic(const DynSys<K>& phi, const K& b, int max_steps = 64) {
    using ops = field_ops<K>;
    PreperiodicResult<K> r;
    HeightConstant C = height_constant(phi);
    const int d = phi.degree();
    r.threshold = C.value / (d - 1);
    std::map<std::string, int> seen;
    std::vector<K> orbit;
    K x = b;
    for (int n = 0; n <= max_steps; ++n) {
        std::string key = ops::str(x);
        auto it = seen.find(key);
        if (it != seen.end()) {
            r.kind = OrbitKind::preperiodic;
            r.tail.assign(orbit.begin(), orbit.begin() + it->second);
            r.cycle.assign(orbit.begin() + it->second, orbit.end());
            return r;
        }
        seen.emplace(key, n);
        orbit.push_back(x);
        if constexpr (ops::function_field) {
            // h * (d - 1) > C, all integers
            long h = ops::height(x);
            if (h * (d - 1) > *C.exact) {
                r.kind = OrbitKind::wandering;
                r.certified_at = n;
                r.exact_height = h;
                return r;
            }
        } else {
            if (ops::log_height(x) > r.threshold * (1 + 1e-12) + 1e-12) {
                r.kind = OrbitKind::wandering;
                r.certified_at = n;
                return r;
            }
        }
        x = phi(x);
    }
    return r;
}

// --- boxes -------------------------------------------------------------------------

namespace detail {

inline void check_box_size(const BigInt& n, std::uint64_t cap) {
    if (n > BigInt(static_cast<unsigned long>(cap)))
        throw size_error("height box has " + n.get_str() + " elements, above the cap " + std::to_string(cap));
}

/// All polynomials of degree <= maxdeg over F_p, in lexicographic order of
/// the coefficient vector read constant term first.
inline std::vector<Poly<Fp>> all_polys(std::uint32_t p, int maxdeg) {
    std::vector<Poly<Fp>> out;
    std::vector<std::uint32_t> digits(static_cast<std::size_t>(maxdeg + 1), 0);
    for (;;) {
        std::vector<Fp> c;
        for (std::uint32_t v : digits) c.push_back(Fp::raw(p, v));
        out.emplace_back(p, std::move(c));
        std::size_t i = 0;
        while (i < digits.size() && ++digits[i] == p) digits[i++] = 0;
        if (i == digits.size()) break;
    }
    return out;
}

/// Monic products of the given irreducibles with total degree <= maxdeg.
inline std::vector<Poly<Fp>> smooth_monics(std::uint32_t p, const std::vector<Poly<Fp>>& primes, int maxdeg) {
    std::vector<Poly<Fp>> out{Poly<Fp>::one(p)};
    for (const auto& pi : primes) {
        std::vector<Poly<Fp>> next;
        for (const auto& m : out) {
            Poly<Fp> cur = m;
            while (cur.degree() <= maxdeg) {
                next.push_back(cur);
                cur = cur * pi;
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<BigInt> smooth_integers(const std::vector<QPlace>& primes, const BigInt& bound) {
    std::vector<BigInt> out{BigInt(1)};
    for (const auto& v : primes) {
        std::vector<BigInt> next;
        for (const auto& m : out)
            for (BigInt cur = m; cur <= bound; cur *= v.q) next.push_back(cur);
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// O_{K,S}(B) over F_p(t): g/D with D a monic product of finite S-places,
/// gcd(g, D) = 1 and max(deg g, deg D) <= B. When infinity is not in S only
/// deg g <= deg D is allowed.
inline std::vector<FpRatFunc> integral_box(std::uint32_t p, const std::vector<FnPlace<Fp>>& S, int B,
                                           std::uint64_t cap = 10000000) {
    if (B < 0) return {};
    std::vector<Poly<Fp>> primes;
    bool inf = false;
    for (const auto& v : S) {
        if (v.infinite) inf = true;
        else primes.push_back(v.pi);
    }
    auto dens = detail::smooth_monics(p, primes, B);
    detail::check_box_size(BigInt(static_cast<unsigned long>(dens.size())) *
                               ipow(BigInt(static_cast<unsigned long>(p)), static_cast<unsigned long>(B + 1)),
                           cap);
    std::vector<FpRatFunc> out;
    auto nums = detail::all_polys(p, B);
    for (const auto& D : dens) {
        for (const auto& g : nums) {
            if (g.is_zero() && D.degree() > 0) continue;
            if (!inf && g.degree() > D.degree()) continue;
            if (D.degree() > 0 && gcd(g, D).degree() > 0) continue;
            out.emplace_back(g, D);
        }
    }
    return out;
}

/// O_{Q,S}(B): a/s with s an S-smooth positive integer, |a| <= B, s <= B,
/// gcd(a, s) = 1; H(a/s) <= B.
inline std::vector<BigRat> integral_box(const std::vector<QPlace>& S, const BigInt& B, std::uint64_t cap = 10000000) {
    if (B < 1) return {};
    auto dens = detail::smooth_integers(S, B);
    detail::check_box_size(BigInt(static_cast<unsigned long>(dens.size())) * (2 * B + 1), cap);
    std::vector<BigRat> out;
    for (const auto& s : dens) {
        for (BigInt a = 0; a <= B; ++a) {
            if (s > 1 && big_gcd(a, s) != 1) continue;
            out.emplace_back(a, s);
            if (a != 0) out.emplace_back(-a, s);
        }
    }
    return out;
}

/// {b in F_p(t) : h(b) <= B}.
inline std::vector<FpRatFunc> height_box(std::uint32_t p, int B, std::uint64_t cap = 10000000) {
    if (B < 0) return {};
    BigInt pb = ipow(BigInt(static_cast<unsigned long>(p)), static_cast<unsigned long>(B + 1));
    detail::check_box_size(pb * pb, cap);
    std::vector<FpRatFunc> out;
    auto nums = detail::all_polys(p, B);
    for (const auto& D : nums) {
        if (D.is_zero() || !(D.lead() == Fp::raw(p, 1))) continue;
        for (const auto& g : nums) {
            if (g.is_zero() && D.degree() > 0) continue;
            if (D.degree() > 0 && gcd(g, D).degree() > 0) continue;
            out.emplace_back(g, D);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.height() < b.height(); });
    return out;
}

/// {b in Q : H(b) <= B}, by height, integers first, positive before negative.
inline std::vector<BigRat> height_box(const BigInt& B, std::uint64_t cap = 10000000) {
    if (B < 1) return {};
    detail::check_box_size(B * (2 * B + 1), cap);
    std::vector<BigRat> out;
    for (BigInt s = 1; s <= B; ++s)
        for (BigInt a = 0; a <= B; ++a) {
            if (big_gcd(a, s) != 1) continue;
            out.emplace_back(a, s);
            if (a != 0) out.emplace_back(-a, s);
        }
    std::stable_sort(out.begin(), out.end(), [](const BigRat& a, const BigRat& b) { return a.height() < b.height(); });
    return out;
}

// --- minimal canonical height ---------------------------------------------------

template <class K>
struct MinHeightResult {
    bool found = false;  // false: no wandering points at this bound
    K argmin;
    HeightEstimate estimate;
    int wandering = 0;
    int preperiodic = 0;
    int undetermined = 0;
};

/// Minimum of the canonical height estimates over wandering points of a box.
template <class K>
MinHeightResult<K> min_positive_canonical_height(const DynSys<K>& phi, const std::vector<K>& box, int N) {
    MinHeightResult<K> r;
    for (const K& b : box) {
        auto pp = is_preperiodic(phi, b);
        if (pp.kind == OrbitKind::preperiodic) {
            ++r.preperiodic;
            continue;
        }
        if (pp.kind == OrbitKind::undetermined) {
            ++r.undetermined;
            continue;
        }
        ++r.wandering;
        HeightEstimate e = canonical_height(phi, b, N);
        bool better = !r.found;
        if (!better) {
            if (e.exact_value) better = *e.exact_value < *r.estimate.exact_value;
            else better = e.value < r.estimate.value;
        }
        if (better) {
            r.found = true;
            r.argmin = b;
            r.estimate = e;
        }
    }
    return r;
}

inline MinHeightResult<FpRatFunc> min_positive_canonical_height(const DynSys<FpRatFunc>& phi, int B, int N = 8) {
    return min_positive_canonical_height(phi, height_box(phi.ctx(), B), N);
}

inline MinHeightResult<BigRat> min_positive_canonical_height(const DynSys<BigRat>& phi, const BigInt& B, int N = 6) {
    return min_positive_canonical_height(phi, height_box(B), N);
}

}  // namespace orbitlab
