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
#include <atomic>
#include <exception>
#include <mutex>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "orbitlab/dynamics.hpp"

namespace orbitlab {

template <class K>
using place_t = typename field_ops<K>::place;

// --- primitive divisors from factored orbits ----------------------------------------

namespace detail {

template <class K>
void require_factored(const OrbitTable<K>& orbit, int n) {
    if (n < 1 || n > orbit.size()) throw domain_error("orbit index " + std::to_string(n) + " out of range");
    for (int m = 1; m <= n; ++m)
        if (orbit.at(m).failed()) throw indeterminate_error(m, "composite survivor " + orbit.at(m).failure);
}

/// (place, exponent) pairs with positive exponent, infinity included.
template <class K>
std::vector<std::pair<place_t<K>, int>> positive_places(const OrbitEntry<K>& e) {
    std::vector<std::pair<place_t<K>, int>> out;
    if (e.is_zero()) return out;
    for (const auto& [v, k] : e.factorization->factors)
        if (k > 0) out.emplace_back(v, k);
    if constexpr (field_ops<K>::function_field) {
        int vi = field_ops<K>::valuation(e.value, place_t<K>::infinity());
        if (vi > 0) out.emplace_back(place_t<K>::infinity(), vi);
    }
    return out;
}

template <class K>
bool is_new_at(const OrbitTable<K>& orbit, int n, const place_t<K>& v) {
    for (int m = 1; m < n; ++m) {
        const auto& e = orbit.at(m);
        if (e.is_zero()) continue;  // zero iterates are skipped by definition
        if (field_ops<K>::valuation(e.value, v) != 0) return false;
    }
    return true;
}

template <class P>
bool contains(const std::vector<P>& s, const P& v) {
    return std::find(s.begin(), s.end(), v) != s.end();
}

}  // namespace detail

/// Places v with v(phi^n(b)) > 0 and v(phi^m(b)) = 0 for every earlier
/// nonzero iterate. With `avoid`, places in that set are not eligible.
/// When ell > 1 only places with v(phi^n(b)) != 0 mod ell qualify.
template <class K>
std::vector<place_t<K>> primitive_prime_divisors(const OrbitTable<K>& orbit, int n,
                                                 const std::vector<place_t<K>>* avoid = nullptr, int ell = 1) {
    detail::require_factored(orbit, n);
    std::vector<place_t<K>> out;
    for (const auto& [v, k] : detail::positive_places(orbit.at(n))) {
        if (avoid && detail::contains(*avoid, v)) continue;
        if (ell > 1 && k % ell == 0) continue;
        if (detail::is_new_at(orbit, n, v)) out.push_back(v);
    }
    return out;
}

template <class K>
struct ZsigRecord {
    friend bool operator==(const ZsigRecord&, const ZsigRecord&) = default;
    int n = 0;
    K value;
    bool zero = false;
    std::optional<typename field_ops<K>::factored> factorization;
    std::vector<place_t<K>> primitive;
    std::vector<place_t<K>> ell_primitive;
};

template <class K>
struct ZsigReport {
    friend bool operator==(const ZsigReport&, const ZsigReport&) = default;
    Poly<K> phi;
    K basepoint;
    int N = 0;
    std::optional<int> ell;
    std::vector<ZsigRecord<K>> records;
    std::vector<int> zsig_set;
    std::optional<std::vector<int>> ell_zsig_set;
};

/// Z(phi, b) and optionally its ell-free variant, n = 1..N. A zero iterate
/// is recorded but never counted in Z.
template <class K>
ZsigReport<K> zsigmondy_report(const DynSys<K>& phi, const K& b, int N, std::optional<int> ell = std::nullopt,
                               const FactorConfig& cfg = {}, const std::vector<place_t<K>>* avoid = nullptr) {
    if (ell && *ell < 2) throw domain_error("ell must be >= 2");
    ZsigReport<K> rep{phi.poly(), b, N, ell, {}, {}, std::nullopt};
    OrbitTable<K> orbit = build_orbit(phi, b, N, cfg);
    if (ell) rep.ell_zsig_set.emplace();
    for (int n = 1; n <= N; ++n) {
        const auto& e = orbit.at(n);
        ZsigRecord<K> r;
        r.n = n;
        r.value = e.value;
        r.zero = e.is_zero();
        r.factorization = e.factorization;
        r.primitive = primitive_prime_divisors(orbit, n, avoid);
        if (ell) r.ell_primitive = primitive_prime_divisors(orbit, n, avoid, *ell);
        if (!r.zero && r.primitive.empty()) rep.zsig_set.push_back(n);
        if (ell && !r.zero && r.ell_primitive.empty()) rep.ell_zsig_set->push_back(n);
        rep.records.push_back(std::move(r));
    }
    return rep;
}

template <class K>
std::vector<int> zsigmondy_set(const DynSys<K>& phi, const K& b, int N, const FactorConfig& cfg = {}) {
    return zsigmondy_report(phi, b, N, std::nullopt, cfg).zsig_set;
}

template <class K>
std::vector<int> ell_zsigmondy_set(const DynSys<K>& phi, const K& b, int ell, int N, const FactorConfig& cfg = {}) {
    return *zsigmondy_report(phi, b, N, ell, cfg).ell_zsig_set;
}

// --- ell-free decomposition ---------------------------------------------------------

template <class K>
struct LFreeDecomp {
    K u;
    K d_part;
    K y;
    int ell = 2;

    K recombine() const {
        K r = u * d_part;
        for (int i = 0; i < ell; ++i) r = r * y;
        return r;
    }
};

namespace detail {

inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace detail

/// x = u * d * y^ell with u an S-unit, d ell-power-free outside S and free
/// of S-places. Over Q, d > 0 and y > 0; over F(t), d and y are monic.
template <class K>
LFreeDecomp<K> ell_free_decompose(const K& x, int ell, const std::vector<place_t<K>>& S, const FactorConfig& cfg = {}) {
    using ops = field_ops<K>;
    if (ell < 2) throw domain_error("ell must be >= 2");
    if (algebra<K>::is_zero(x)) throw domain_error("ell-free decomposition of zero");
    if (!ops::in_ring(x, S)) throw domain_error("element " + ops::str(x) + " is not S-integral");
    auto fx = ops::factor(x, cfg);
    typename ops::factored uf{fx.unit, {}}, df{algebra<K>::one(algebra<K>::ctx(x)), {}}, yf = df;
    for (const auto& [v, e] : fx.factors) {
        int q = detail::floor_div(e, ell), r = e - q * ell;
        if (q != 0) yf.factors.emplace_back(v, q);
        if (r == 0) continue;
        if (detail::contains(S, v)) uf.factors.emplace_back(v, r);
        else df.factors.emplace_back(v, r);
    }
    return {ops::recombine(uf), ops::recombine(df), ops::recombine(yf), ell};
}

// --- gcd-based Zsigmondy test ----------------------------------------------------------

namespace detail {

inline BigInt strip(BigInt r, const BigInt& g0) {
    if (g0 == 0) return r;
    BigInt g = big_gcd(r, g0);
    while (g > 1) {
        r /= g;
        g = big_gcd(r, g);
    }
    return r;
}

template <Field F>
Poly<F> strip(Poly<F> r, const Poly<F>& g0) {
    if (g0.is_zero()) return r;
    Poly<F> g = gcd(r, g0);
    while (g.degree() > 0) {
        r = r.exact_div(g);
        g = gcd(r, g);
    }
    return r;
}

inline bool is_unit_part(const BigInt& r) { return r == 1; }
template <Field F>
bool is_unit_part(const Poly<F>& r) {
    return r.degree() == 0;
}

inline BigInt pole_part(const BigRat& x) { return x.den(); }
template <Field F>
Poly<F> pole_part(const RatFunc<F>& x) {
    return x.den();
}

}  // namespace detail

/// Z(phi, b) on [1, N] from the orbit values alone: the part of the
/// numerator of phi^n(b) coprime to every earlier nonzero iterate is a unit
/// exactly when no primitive place exists.
template <class K>
std::vector<int> zsigmondy_set_fast(const std::vector<K>& values) {
    using ops = field_ops<K>;
    std::vector<int> out;
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (algebra<K>::is_zero(values[n])) continue;
        auto r = ops::positive_part(values[n]);
        for (std::size_t m = 0; m < n && !detail::is_unit_part(r); ++m) {
            if (algebra<K>::is_zero(values[m])) continue;
            r = detail::strip(r, ops::positive_part(values[m]));
            r = detail::strip(r, detail::pole_part(values[m]));
        }
        bool primitive = !detail::is_unit_part(r);
        if constexpr (ops::function_field) {
            if (!primitive && ops::valuation(values[n], place_t<K>::infinity()) > 0) {
                primitive = true;
                for (std::size_t m = 0; m < n; ++m)
                    if (!algebra<K>::is_zero(values[m]) && ops::valuation(values[m], place_t<K>::infinity()) != 0)
                        primitive = false;
            }
        }
        if (!primitive) out.push_back(static_cast<int>(n + 1));
    }
    return out;
}

template <class K>
std::vector<K> orbit_values(const DynSys<K>& phi, const K& b, int N) {
    std::vector<K> v;
    K x = b;
    for (int n = 0; n < N; ++n) v.push_back(x = phi(x));
    return v;
}

// --- supports against a finite place set -----------------------------------------------

/// Supp(x) is contained in P (x != 0).
inline bool support_within(const BigRat& x, const std::vector<QPlace>& P) {
    BigInt r = abs(x.num());
    for (const auto& v : P) mpz_remove(r.get_mpz_t(), r.get_mpz_t(), v.q.get_mpz_t());
    return r == 1;
}

template <Field F>
bool support_within(const RatFunc<F>& x, const std::vector<FnPlace<F>>& P) {
    using ops = field_ops<RatFunc<F>>;
    Poly<F> r = x.num();
    bool inf = false;
    for (const auto& v : P) {
        if (v.infinite) {
            inf = true;
            continue;
        }
        while (r.degree() > 0) {
            auto [q, rem] = r.divmod(v.pi);
            if (!rem.is_zero()) break;
            r = std::move(q);
        }
    }
    if (r.degree() > 0) return false;
    return inf || ops::valuation(x, FnPlace<F>::infinity()) <= 0;
}

/// Places of bad reduction of phi: a coefficient has a pole or the leading
/// coefficient has a zero or pole.
inline std::vector<QPlace> bad_places(const Poly<BigRat>& phi, const FactorConfig& cfg = {}) {
    std::vector<QPlace> out;
    auto add = [&](const BigInt& n) {
        if (abs(n) <= 1) return;
        for (auto& [q, e] : factor_integer(n, cfg))
            if (!detail::contains(out, QPlace{q})) out.push_back(QPlace{q});
    };
    for (const auto& c : phi.coeffs()) add(c.den());
    add(phi.lead().num());
    std::sort(out.begin(), out.end());
    return out;
}

template <Field F>
std::vector<FnPlace<F>> bad_places(const Poly<RatFunc<F>>& phi, const FactorConfig& cfg = {}) {
    std::vector<FnPlace<F>> out;
    auto add = [&](const Poly<F>& g) {
        if (g.degree() <= 0) return;
        for (auto& [h, e] : detail::factor_poly(g, cfg.seed))
            if (!detail::contains(out, FnPlace<F>::finite(h))) out.push_back(FnPlace<F>::finite(h));
    };
    bool inf = false;
    for (const auto& c : phi.coeffs()) {
        add(c.den());
        if (!c.is_zero() && field_ops<RatFunc<F>>::valuation(c, FnPlace<F>::infinity()) < 0) inf = true;
    }
    add(phi.lead().num());
    if (field_ops<RatFunc<F>>::valuation(phi.lead(), FnPlace<F>::infinity()) != 0) inf = true;
    if (inf) out.push_back(FnPlace<F>::infinity());
    std::sort(out.begin(), out.end());
    return out;
}

/// P = S u Supp(phi^j(0), j <= N) u bad places.
template <class K>
std::vector<place_t<K>> subset_places(const DynSys<K>& phi, const std::vector<place_t<K>>& S, int N,
                                      const FactorConfig& cfg = {}) {
    std::vector<place_t<K>> P = S;
    auto add = [&](const place_t<K>& v) {
        if (!detail::contains(P, v)) P.push_back(v);
    };
    for (const auto& v : bad_places(phi.poly(), cfg)) add(v);
    K zero = algebra<K>::zero(phi.ctx());
    for (const K& x : orbit_values(phi, zero, N)) {
        if (algebra<K>::is_zero(x)) continue;
        for (const auto& v : field_ops<K>::support(x, cfg)) add(v);
    }
    std::sort(P.begin(), P.end());
    return P;
}

// --- averages over height boxes ------------------------------------------------------

template <class K>
struct BasepointResult {
    friend bool operator==(const BasepointResult&, const BasepointResult&) = default;
    K b;
    long height = 0;  // degree height, or H for Q (fits: boxes are small)
    OrbitKind kind = OrbitKind::undetermined;
    std::vector<int> zset;
    bool flagged = false;
    std::string flag_reason;
    int subset_violations = 0;
};

struct DensityRow {
    friend bool operator==(const DensityRow&, const DensityRow&) = default;
    long B = 0;
    long count = 0;  // #O_{K,S}(B)
    long wandering = 0;
    long preperiodic = 0;
    long undetermined = 0;
    long flagged = 0;
    long sum = 0;              // over unflagged wandering b
    long sum_pessimistic = 0;  // flagged b counted as N each
    std::optional<BigRat> ratio;
    std::optional<BigRat> ratio_pessimistic;
    std::vector<long> t_counts;  // t_counts[n-1] = #{wandering b : n in Z(phi, b)}
};

template <class K>
struct DensityReport {
    friend bool operator==(const DensityReport&, const DensityReport&) = default;
    Poly<K> phi;
    std::vector<place_t<K>> S;
    std::vector<place_t<K>> P;  // place set used for the subset check
    int N = 0;
    long B_max = 0;
    std::vector<DensityRow> rows;
    std::vector<BasepointResult<K>> basepoints;
    long subset_checked = 0;
    long subset_violations = 0;
};

struct AvgOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    bool use_factorization = false;  // cross-check route through full factorizations
    bool check_subset = true;
    FactorConfig factor;
};

namespace detail {

inline long box_height(const BigRat& b) { return b.height().get_si(); }
template <Field F>
long box_height(const RatFunc<F>& b) {
    return b.height();
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first;
    std::atomic<bool> failed{false};
    std::mutex m;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; !failed && (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!first) first = std::current_exception();
                    failed = true;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace detail

/// Exact counts behind Avg(Z(phi), S) for every B up to the box's bound.
/// Rows run over the distinct heights B_min..B_max.
template <class K>
DensityReport<K> avg_zsigmondy(const DynSys<K>& phi, const std::vector<place_t<K>>& S, const std::vector<K>& box,
                               long B_min, long B_max, int N, const AvgOptions& opt = {}) {
    DensityReport<K> rep;
    rep.phi = phi.poly();
    rep.S = S;
    rep.N = N;
    rep.B_max = B_max;
    if (opt.check_subset) rep.P = subset_places(phi, S, N, opt.factor);
    rep.basepoints.resize(box.size());
    detail::parallel_for(box.size(), opt.threads, [&](std::size_t i) {
        BasepointResult<K> r;
        r.b = box[i];
        r.height = detail::box_height(box[i]);
        r.kind = is_preperiodic(phi, box[i]).kind;
        if (r.kind == OrbitKind::wandering) {
            if (opt.use_factorization) {
                try {
                    r.zset = zsigmondy_set(phi, box[i], N, opt.factor);
                } catch (const indeterminate_error& e) {
                    r.flagged = true;
                    r.flag_reason = e.what();
                }
            } else {
                std::vector<K> vals = orbit_values(phi, box[i], N);
                r.zset = zsigmondy_set_fast(vals);
                if (opt.check_subset)
                    for (int n : r.zset)
                        if (!support_within(vals[static_cast<std::size_t>(n - 1)], rep.P)) ++r.subset_violations;
            }
            if (opt.check_subset && opt.use_factorization && !r.flagged)
                for (int n : r.zset)
                    if (!support_within(iterate_value(phi, box[i], n), rep.P)) ++r.subset_violations;
        }
        rep.basepoints[i] = std::move(r);
    });
    for (const auto& r : rep.basepoints) {
        if (r.kind == OrbitKind::wandering && !r.flagged) rep.subset_checked += static_cast<long>(r.zset.size());
        rep.subset_violations += r.subset_violations;
    }
    for (long B = B_min; B <= B_max; ++B) {
        DensityRow row;
        row.B = B;
        row.t_counts.assign(static_cast<std::size_t>(N), 0);
        for (const auto& r : rep.basepoints) {
            if (r.height > B) continue;
            ++row.count;
            switch (r.kind) {
                case OrbitKind::preperiodic: ++row.preperiodic; continue;
                case OrbitKind::undetermined: ++row.undetermined; continue;
                default: ++row.wandering;
            }
            if (r.flagged) {
                ++row.flagged;
                row.sum_pessimistic += N;
                continue;
            }
            row.sum += static_cast<long>(r.zset.size());
            row.sum_pessimistic += static_cast<long>(r.zset.size());
            for (int n : r.zset) ++row.t_counts[static_cast<std::size_t>(n - 1)];
        }
        if (row.wandering > 0) {
            row.ratio = BigRat(BigInt(row.sum), BigInt(row.count - row.flagged));
            row.ratio_pessimistic = BigRat(BigInt(row.sum_pessimistic), BigInt(row.count));
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

inline DensityReport<FpRatFunc> avg_zsigmondy(const DynSys<FpRatFunc>& phi, const std::vector<FnPlace<Fp>>& S,
                                              int B_max, int N, const AvgOptions& opt = {}) {
    return avg_zsigmondy(phi, S, integral_box(phi.ctx(), S, B_max), 0, B_max, N, opt);
}

inline DensityReport<BigRat> avg_zsigmondy(const DynSys<BigRat>& phi, const std::vector<QPlace>& S, long B_max, int N,
                                           const AvgOptions& opt = {}) {
    return avg_zsigmondy(phi, S, integral_box(S, BigInt(B_max)), 1, B_max, N, opt);
}

// --- support sieve -----------------------------------------------------------------------

struct SieveRow {
    long B = 0;
    long count = 0;
    long members = 0;
    long zero_values = 0;  // b with f(b) = 0, never members
    BigRat density;
};

template <class P>
struct SieveReport {
    std::vector<SieveRow> rows;
    std::vector<P> sieve_places;  // P'': good places outside P where f has a root
    BigRat sieve_bound;           // prod (1 - 1/N(p)) over sieve_places
};

namespace detail {

template <class K, class Place>
std::vector<SieveRow> sieve_rows(const Poly<K>& f, const std::vector<Place>& P, const std::vector<K>& box, long B_min,
                                 long B_max) {
    std::vector<SieveRow> rows;
    std::vector<std::pair<long, int>> info;  // (height, 0 non-member / 1 member / 2 zero)
    for (const K& b : box) {
        K v = f(b);
        int s = algebra<K>::is_zero(v) ? 2 : (support_within(v, P) ? 1 : 0);
        info.emplace_back(box_height(b), s);
    }
    for (long B = B_min; B <= B_max; ++B) {
        SieveRow r;
        r.B = B;
        for (auto [h, s] : info) {
            if (h > B) continue;
            ++r.count;
            if (s == 1) ++r.members;
            if (s == 2) ++r.zero_values;
        }
        r.density = r.count ? BigRat(BigInt(r.members), BigInt(r.count)) : BigRat(0L);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace detail

/// #(I_{f,S,P} n box)/#box for B <= B_max, plus the sieve bound over good
/// places of norm <= sieve_norm at which f has a root.
inline SieveReport<FnPlace<Fp>> support_sieve_density(const Poly<FpRatFunc>& f, const std::vector<FnPlace<Fp>>& S,
                                                      const std::vector<FnPlace<Fp>>& P, int B_max,
                                                      std::uint64_t sieve_norm = 0) {
    const std::uint32_t p = f.ctx();
    SieveReport<FnPlace<Fp>> rep;
    rep.rows = detail::sieve_rows(f, P, integral_box(p, S, B_max), 0, B_max);
    rep.sieve_bound = BigRat(1L);
    auto bad = bad_places(f);
    for (int k = 1; sieve_norm > 0; ++k) {
        BigInt norm = ipow(BigInt(static_cast<unsigned long>(p)), static_cast<unsigned long>(k));
        if (norm > BigInt(static_cast<unsigned long>(sieve_norm))) break;
        for (const auto& pi : detail::all_polys(p, k)) {
            if (pi.degree() != k || !(pi.lead() == Fp::raw(p, 1)) || !fp::is_irreducible(pi)) continue;
            auto v = FnPlace<Fp>::finite(pi);
            if (detail::contains(P, v) || detail::contains(bad, v)) continue;
            // reduce f mod pi and search the residue field for a root
            std::vector<Poly<Fp>> red;
            for (const auto& c : f.coeffs()) red.push_back((c.num() * inverse_mod(c.den(), pi)) % pi);
            bool root = false;
            for (const auto& a : detail::all_polys(p, k - 1)) {
                Poly<Fp> acc(p);
                for (std::size_t i = red.size(); i-- > 0;) acc = (acc * a + red[i]) % pi;
                if (acc.is_zero()) {
                    root = true;
                    break;
                }
            }
            if (!root) continue;
            rep.sieve_places.push_back(v);
            rep.sieve_bound *= BigRat(norm - 1, norm);
        }
    }
    return rep;
}

inline SieveReport<QPlace> support_sieve_density(const Poly<BigRat>& f, const std::vector<QPlace>& S,
                                                 const std::vector<QPlace>& P, long B_max,
                                                 std::uint64_t sieve_norm = 0) {
    SieveReport<QPlace> rep;
    rep.rows = detail::sieve_rows(f, P, integral_box(S, BigInt(B_max)), 1, B_max);
    rep.sieve_bound = BigRat(1L);
    auto bad = bad_places(f);
    if (sieve_norm > 0xffffffffULL) throw size_error("sieve norm bound too large");
    for (std::uint32_t q : detail::small_primes(static_cast<std::uint32_t>(sieve_norm))) {
        QPlace v{BigInt(static_cast<unsigned long>(q))};
        if (detail::contains(P, v) || detail::contains(bad, v)) continue;
        std::vector<Fp> red;
        for (const auto& c : f.coeffs()) {
            BigInt n = c.num() % q, d = c.den() % q;
            red.push_back(Fp(PrimeModulus(q), n.get_si()) / Fp(PrimeModulus(q), d.get_si()));
        }
        Poly<Fp> fq(q, red);
        bool root = false;
        for (std::uint32_t a = 0; a < q && !root; ++a) root = fq(Fp::raw(q, a)).is_zero();
        if (!root) continue;
        rep.sieve_places.push_back(v);
        rep.sieve_bound *= BigRat(BigInt(static_cast<unsigned long>(q - 1)), BigInt(static_cast<unsigned long>(q)));
    }
    return rep;
}

}  // namespace orbitlab
