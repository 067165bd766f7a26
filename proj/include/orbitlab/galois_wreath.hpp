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

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "orbitlab/dynamics.hpp"

namespace orbitlab {

// --- iterated wreath products [C_d]^n ------------------------------------------------

/// An automorphism of the depth-n complete d-ary tree built from rotations:
/// one label in C_d per internal node. Level j (0-based) has d^j labels,
/// indexed by the address a_1..a_j read in base d with a_1 most significant.
///
/// A vertex a_1..a_k is sent to b_1..b_k with b_j = a_j + L_{j-1}(a_1..a_{j-1}).
/// Products compose as maps: (x*y)(a) = x(y(a)).
class WreathElem {
public:
    WreathElem() = default;
    WreathElem(int d, int n) : d_(d), n_(n) {
        if (d < 2 || n < 1) throw domain_error("wreath product needs d >= 2 and n >= 1");
        if (d > 255) throw size_error("wreath labels are limited to d <= 255");
        std::uint64_t total = 0, w = 1;
        for (int j = 0; j < n; ++j) {
            offset_.push_back(total);
            total += w;
            if (total > (1ULL << 32)) throw size_error("wreath element has too many labels");
            w *= static_cast<std::uint64_t>(d);
        }
        labels_.assign(total, 0);
    }

    static WreathElem identity(int d, int n) { return WreathElem(d, n); }

    static WreathElem random(int d, int n, std::mt19937_64& rng) {
        WreathElem x(d, n);
        std::uniform_int_distribution<int> u(0, d - 1);
        for (auto& l : x.labels_) l = static_cast<std::uint8_t>(u(rng));
        return x;
    }

    /// Label 1 at one node, 0 elsewhere; these generate the group.
    static WreathElem elementary(int d, int n, int level, std::uint64_t addr) {
        WreathElem x(d, n);
        x.label(level, addr) = 1;
        return x;
    }

    int d() const { return d_; }
    int n() const { return n_; }
    std::size_t label_count() const { return labels_.size(); }
    std::uint64_t width(int level) const { return ipow_u64(static_cast<std::uint64_t>(d_), level); }

    std::uint8_t label(int level, std::uint64_t addr) const { return labels_.at(offset_.at(level) + addr); }
    std::uint8_t& label(int level, std::uint64_t addr) { return labels_.at(offset_.at(level) + addr); }
    const std::vector<std::uint8_t>& labels() const { return labels_; }

    bool is_identity() const {
        for (auto l : labels_)
            if (l) return false;
        return true;
    }

    /// Images of all vertices at depth k (k <= n).
    std::vector<std::uint64_t> images(int k) const {
        std::vector<std::uint64_t> img{0};
        for (int j = 0; j < k; ++j) {
            std::vector<std::uint64_t> nxt(img.size() * d_);
            for (std::uint64_t a = 0; a < img.size(); ++a) {
                const int l = label(j, a);
                for (int c = 0; c < d_; ++c) nxt[a * d_ + c] = img[a] * d_ + (c + l) % d_;
            }
            img = std::move(nxt);
        }
        return img;
    }

    /// Image of the vertex with address addr at depth k.
    std::uint64_t act(std::uint64_t addr, int k) const {
        std::uint64_t out = 0, prefix = 0, scale = width(k);
        for (int j = 0; j < k; ++j) {
            scale /= d_;
            const std::uint64_t a = (addr / scale) % d_;
            out = out * d_ + (a + label(j, prefix)) % d_;
            prefix = prefix * d_ + a;
        }
        return out;
    }

    friend WreathElem operator*(const WreathElem& x, const WreathElem& y) {
        x.require_same(y);
        WreathElem r(x.d_, x.n_);
        std::vector<std::uint64_t> img{0};
        for (int k = 0; k < x.n_; ++k) {
            for (std::uint64_t a = 0; a < img.size(); ++a)
                r.label(k, a) = static_cast<std::uint8_t>((x.label(k, img[a]) + y.label(k, a)) % x.d_);
            std::vector<std::uint64_t> nxt(img.size() * x.d_);
            for (std::uint64_t a = 0; a < img.size(); ++a)
                for (int c = 0; c < x.d_; ++c) nxt[a * x.d_ + c] = img[a] * x.d_ + (c + y.label(k, a)) % x.d_;
            img = std::move(nxt);
        }
        return r;
    }

    WreathElem inverse() const {
        WreathElem r(d_, n_);
        std::vector<std::uint64_t> img{0};
        for (int k = 0; k < n_; ++k) {
            for (std::uint64_t a = 0; a < img.size(); ++a)
                r.label(k, img[a]) = static_cast<std::uint8_t>((d_ - label(k, a)) % d_);
            std::vector<std::uint64_t> nxt(img.size() * d_);
            for (std::uint64_t a = 0; a < img.size(); ++a)
                for (int c = 0; c < d_; ++c) nxt[a * d_ + c] = img[a] * d_ + (c + label(k, a)) % d_;
            img = std::move(nxt);
        }
        return r;
    }

    /// Restriction to the top n-1 levels.
    WreathElem truncate() const {
        if (n_ < 2) throw domain_error("truncate needs n >= 2");
        WreathElem r(d_, n_ - 1);
        std::copy(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(r.labels_.size()), r.labels_.begin());
        return r;
    }

    /// Split as (i, g): i maps depth n-1 addresses to C_d, g lives in [C_d]^{n-1}.
    std::pair<std::vector<std::uint8_t>, WreathElem> split() const {
        std::vector<std::uint8_t> i(labels_.begin() + static_cast<std::ptrdiff_t>(offset_.back()), labels_.end());
        if (n_ == 1) return {i, WreathElem()};
        return {i, truncate()};
    }

    static WreathElem join(int d, const std::vector<std::uint8_t>& i, const WreathElem& g) {
        const int n = g.n_ + 1;
        WreathElem r(d, n);
        if (i.size() != r.width(n - 1)) throw domain_error("wreath join: map has the wrong size");
        std::copy(g.labels_.begin(), g.labels_.end(), r.labels_.begin());
        std::copy(i.begin(), i.end(), r.labels_.begin() + static_cast<std::ptrdiff_t>(r.offset_.back()));
        return r;
    }

    std::string key() const { return std::string(labels_.begin(), labels_.end()); }
    std::string str() const {
        std::string s;
        for (int k = 0; k < n_; ++k) {
            if (k) s += '|';
            for (std::uint64_t a = 0; a < width(k); ++a) s += static_cast<char>('0' + label(k, a));
        }
        return s;
    }

    friend bool operator==(const WreathElem& a, const WreathElem& b) {
        return a.d_ == b.d_ && a.n_ == b.n_ && a.labels_ == b.labels_;
    }

private:
    static std::uint64_t ipow_u64(std::uint64_t b, int e) {
        std::uint64_t r = 1;
        while (e-- > 0) r *= b;
        return r;
    }
    void require_same(const WreathElem& o) const {
        if (d_ != o.d_ || n_ != o.n_) throw domain_error("wreath product of elements with different shapes");
    }

    int d_ = 0, n_ = 0;
    std::vector<std::uint64_t> offset_;
    std::vector<std::uint8_t> labels_;
};

/// The product law written on split pairs:
/// (i1, g1)(i2, g2) = (a -> i1(g2 a) + i2(a), g1 g2).
inline WreathElem wreath_mul_pairs(const WreathElem& x, const WreathElem& y) {
    if (x.n() != y.n() || x.d() != y.d()) throw domain_error("wreath product of elements with different shapes");
    const int d = x.d();
    if (x.n() == 1) {
        WreathElem r(d, 1);
        r.label(0, 0) = static_cast<std::uint8_t>((x.label(0, 0) + y.label(0, 0)) % d);
        return r;
    }
    auto [i1, g1] = x.split();
    auto [i2, g2] = y.split();
    WreathElem g = wreath_mul_pairs(g1, g2);
    const auto img = g2.images(x.n() - 1);
    std::vector<std::uint8_t> i(i1.size());
    for (std::size_t a = 0; a < i.size(); ++a) i[a] = static_cast<std::uint8_t>((i1[img[a]] + i2[a]) % d);
    return WreathElem::join(d, i, g);
}

/// |[C_d]^n| = d^((d^n - 1)/(d - 1)).
inline BigInt wreath_order(int d, int n) {
    if (d < 2 || n < 1) throw domain_error("wreath_order needs d >= 2 and n >= 1");
    BigInt e = (ipow(BigInt(d), static_cast<unsigned long>(n)) - 1) / (d - 1);
    if (!e.fits_ulong_p()) throw size_error("wreath order exponent too large");
    return ipow(BigInt(d), e.get_ui());
}

/// All elements, by closure of the elementary generators. Refuses groups
/// larger than cap.
inline std::vector<WreathElem> enumerate_wreath(int d, int n, std::uint64_t cap = 1000000) {
    if (wreath_order(d, n) > BigInt(static_cast<unsigned long>(cap)))
        throw size_error("wreath enumeration above the cap of " + std::to_string(cap) + " elements");
    std::vector<WreathElem> gens;
    WreathElem e(d, n);
    for (int k = 0; k < n; ++k)
        for (std::uint64_t a = 0; a < e.width(k); ++a) gens.push_back(WreathElem::elementary(d, n, k, a));
    std::unordered_set<std::string> seen{e.key()};
    std::vector<WreathElem> out{e};
    for (std::size_t head = 0; head < out.size(); ++head) {
        for (const auto& g : gens) {
            WreathElem y = out[head] * g;
            if (seen.insert(y.key()).second) out.push_back(std::move(y));
        }
    }
    return out;
}

struct WreathCheck {
    friend bool operator==(const WreathCheck&, const WreathCheck&) = default;
    int d = 0, n = 0;
    BigInt order;
    std::uint64_t enumerated = 0;
    std::uint64_t distinct_permutations = 0;
    bool identity_ok = false;
    bool inverse_ok = false;
    bool associativity_ok = false;
    bool pair_law_ok = false;
    bool truncation_hom_ok = true;
    std::uint64_t kernel_size = 0;
    BigInt expected_kernel;
    std::uint64_t image_size = 0;

    bool ok() const {
        bool trunc = n < 2 || (truncation_hom_ok && BigInt(static_cast<unsigned long>(kernel_size)) == expected_kernel &&
                               BigInt(static_cast<unsigned long>(image_size)) == wreath_order(d, n - 1));
        return BigInt(static_cast<unsigned long>(enumerated)) == order && distinct_permutations == enumerated &&
               identity_ok && inverse_ok && associativity_ok && pair_law_ok && trunc;
    }
};

/// Brute-force check of [C_d]^n: cardinality, faithfulness on leaves, group
/// axioms, the pair form of the law, and the truncation homomorphism.
inline WreathCheck check_wreath(int d, int n, std::uint64_t seed = 1, std::uint64_t cap = 1000000) {
    WreathCheck c;
    c.d = d;
    c.n = n;
    c.order = wreath_order(d, n);
    const auto all = enumerate_wreath(d, n, cap);
    c.enumerated = all.size();

    std::set<std::vector<std::uint64_t>> perms;
    for (const auto& x : all) perms.insert(x.images(n));
    c.distinct_permutations = perms.size();

    const WreathElem e(d, n);
    c.identity_ok = c.inverse_ok = true;
    for (const auto& x : all) {
        c.identity_ok = c.identity_ok && e * x == x && x * e == x;
        c.inverse_ok = c.inverse_ok && (x * x.inverse()).is_identity() && (x.inverse() * x).is_identity();
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    c.associativity_ok = c.pair_law_ok = true;
    for (int k = 0; k < 200; ++k) {
        const auto &x = all[pick(rng)], &y = all[pick(rng)], &z = all[pick(rng)];
        c.associativity_ok = c.associativity_ok && (x * y) * z == x * (y * z);
        c.pair_law_ok = c.pair_law_ok && wreath_mul_pairs(x, y) == x * y;
        // composition of maps on leaves
        const auto ix = x.images(n), iy = y.images(n), ixy = (x * y).images(n);
        for (std::size_t a = 0; a < ixy.size(); ++a) c.pair_law_ok = c.pair_law_ok && ixy[a] == ix[iy[a]];
    }

    if (n >= 2) {
        c.expected_kernel = ipow(BigInt(d), static_cast<unsigned long>(e.width(n - 1)));
        std::unordered_set<std::string> image;
        for (const auto& x : all) {
            const WreathElem tx = x.truncate();
            if (tx.is_identity()) ++c.kernel_size;
            image.insert(tx.key());
        }
        c.image_size = image.size();
        const bool exhaustive = all.size() * all.size() <= 4000000;
        const std::size_t pairs = exhaustive ? all.size() * all.size() : 20000;
        for (std::size_t k = 0; k < pairs && c.truncation_hom_ok; ++k) {
            const auto& x = exhaustive ? all[k / all.size()] : all[pick(rng)];
            const auto& y = exhaustive ? all[k % all.size()] : all[pick(rng)];
            c.truncation_hom_ok = (x * y).truncate() == x.truncate() * y.truncate();
        }
    }
    return c;
}

// --- index and iteration bounds -------------------------------------------------------

struct IndexBound {
    friend bool operator==(const IndexBound&, const IndexBound&) = default;
    int d = 0;
    BigInt exponent;             // (d^10 - 1)/(d - 1) + 10
    std::optional<BigInt> value; // d^exponent, withheld above the cap
};

/// log_d of the index bound [W(d) : G] <= d^((d^10-1)/(d-1) + 10).
inline IndexBound index_bound(int d, bool with_value = false, std::uint64_t max_exponent = 100000) {
    if (d < 3) throw domain_error("index_bound needs d >= 3");
    IndexBound b;
    b.d = d;
    b.exponent = (ipow(BigInt(d), 10) - 1) / (d - 1) + 10;
    if (with_value && b.exponent <= BigInt(static_cast<unsigned long>(max_exponent)))
        b.value = ipow(BigInt(d), b.exponent.get_ui());
    return b;
}

/// The level-n display before simplification:
/// (d^n - 1)/(d - 1) - (d^{n-1} + ... + d^10 + 10), for n >= 10.
inline BigInt index_bound_refined(int d, int n) {
    if (d < 2 || n < 10) throw domain_error("index_bound_refined needs d >= 2 and n >= 10");
    BigInt s = 0;
    for (int j = 10; j <= n - 1; ++j) s += ipow(BigInt(d), static_cast<unsigned long>(j));
    return (ipow(BigInt(d), static_cast<unsigned long>(n)) - 1) / (d - 1) - (s + 10);
}

/// Largest n with n <= 2 log_d(19) + 5, i.e. d^(n-5) <= 361 (exact integer test).
inline int mason_iteration_bound(std::uint64_t d, int /*deg_f*/ = 1) {
    if (d < 3) throw domain_error("mason_iteration_bound needs d >= 3");
    int n = 5;
    BigInt pw = 1;
    for (;;) {
        pw *= static_cast<unsigned long>(d);
        if (pw > 361) return n;
        ++n;
    }
}

/// Largest n >= 2 with deg_f d^{n-1} <= 18 deg_f d^{floor(n/2)+2} + (3d-3)(2 deg_f - 1),
/// by direct scan; deg_f = 0 selects the simplified right side 18 d^{floor(n/2)+2} + 6d - 6.
inline int mason_literal_scan(std::uint64_t d, int deg_f = 0, int max_n = 256) {
    if (d < 3) throw domain_error("mason_literal_scan needs d >= 3");
    const BigInt D(static_cast<unsigned long>(d));
    int best = 1;
    for (int n = 2; n <= max_n; ++n) {
        const BigInt lhs = ipow(D, static_cast<unsigned long>(n - 1));
        const BigInt top = 18 * ipow(D, static_cast<unsigned long>(n / 2 + 2));
        bool ok = deg_f <= 0 ? lhs <= top + 6 * D - 6
                             : deg_f * lhs <= deg_f * top + (3 * D - 3) * (2 * deg_f - 1);
        if (ok) best = n;
    }
    return best;
}

// --- certificates -------------------------------------------------------------------------

enum class CertKind { irreducibility, dfree_primitive, squarefree_orbit, index_bound };

inline const char* to_string(CertKind k) {
    switch (k) {
        case CertKind::irreducibility: return "irreducibility";
        case CertKind::dfree_primitive: return "dfree-primitive";
        case CertKind::squarefree_orbit: return "squarefree-orbit";
        case CertKind::index_bound: return "index-bound";
    }
    return "?";
}

/// A positive verdict always carries its witness; a negative one only says
/// that no certificate was found.
struct Certificate {
    friend bool operator==(const Certificate&, const Certificate&) = default;
    CertKind kind = CertKind::irreducibility;
    bool certified = false;
    int n = 0;
    std::string subject;
    std::optional<std::string> witness_place;
    std::optional<long> witness_exponent;
    std::vector<std::pair<std::string, std::string>> values;  // exact rechecked data

    const std::string* value(const std::string& k) const {
        for (const auto& [a, b] : values)
            if (a == k) return &b;
        return nullptr;
    }
};

/// Certifies f is not a d-th power via a place of multiplicity not divisible
/// by d (finite places first, then infinity).
template <class K>
Certificate dth_power_obstruction(const K& f, int d, const FactorConfig& cfg = {}) {
    if (d < 2) throw domain_error("dth_power_obstruction needs d >= 2");
    if (algebra<K>::is_zero(f)) throw domain_error("dth_power_obstruction of zero");
    using ops = field_ops<K>;
    Certificate c;
    c.kind = CertKind::irreducibility;
    c.subject = ops::str(f) + " not a " + std::to_string(d) + "-th power";
    std::vector<std::pair<typename field_ops<K>::place, int>> cand = ops::factor(f, cfg).factors;
    if constexpr (ops::function_field) cand.emplace_back(ops::place::infinity(), ops::valuation(f, ops::place::infinity()));
    for (const auto& [v, e] : cand) {
        if (e % d != 0) {
            c.certified = true;
            c.witness_place = v.str();
            c.witness_exponent = e;
            break;
        }
    }
    return c;
}

template <class K>
bool recheck_dth_power(const Certificate& c, const K& f, const typename field_ops<K>::place& v, int d) {
    if (!c.certified || !c.witness_place || *c.witness_place != v.str()) return false;
    const int e = field_ops<K>::valuation(f, v);
    return e == c.witness_exponent && e % d != 0;
}

/// phi^n(0) for phi = x^d + f with f in F[t], as a polynomial in t.
template <Field F>
Poly<F> orbit_poly_at_zero(int d, const Poly<F>& f, int n, std::uint64_t degree_cap = 100000) {
    if (n < 1 || d < 2) throw domain_error("orbit_poly_at_zero needs n >= 1 and d >= 2");
    const std::uint64_t df = static_cast<std::uint64_t>(std::max(f.degree(), 0));
    std::uint64_t deg = df;
    for (int i = 1; i < n; ++i) {
        deg *= static_cast<std::uint64_t>(d);
        if (deg > degree_cap)
            throw size_error("deg phi^" + std::to_string(n) + "(0) exceeds the degree cap " + std::to_string(degree_cap));
    }
    Poly<F> g = f;
    for (int i = 1; i < n; ++i) g = g.pow(static_cast<std::uint64_t>(d)) + f;
    return g;
}

/// gcd(g, g') for g = phi^n(0); squarefree iff the gcd is constant. When the
/// characteristic divides d, g' = f' for n >= 2, and the check records it.
template <Field F>
Certificate orbit_squarefree_check(int d, const Poly<F>& f, int n, std::uint64_t degree_cap = 100000,
                                   Poly<F>* gcd_out = nullptr) {
    const auto c0 = f.ctx();
    const std::uint64_t ch = algebra<F>::characteristic(c0);
    Certificate c;
    c.kind = CertKind::squarefree_orbit;
    c.n = n;
    c.subject = "x^" + std::to_string(d) + " + " + to_string(f) + ", n = " + std::to_string(n);
    const Poly<F> g = orbit_poly_at_zero(d, f, n, degree_cap);
    if (g.is_zero()) {
        c.values.emplace_back("degree", "-1");
        return c;
    }
    const Poly<F> dg = g.derivative();
    const Poly<F> h = gcd(g, dg);
    c.values.emplace_back("degree", std::to_string(g.degree()));
    c.values.emplace_back("gcd_degree", std::to_string(h.degree()));
    if (ch != 0 && static_cast<std::uint64_t>(d) % ch == 0 && n >= 2) {
        c.values.emplace_back("derivative_equals_f_prime", dg == f.derivative() ? "true" : "false");
        c.values.emplace_back("derivative_is_one", dg == Poly<F>::one(c0) ? "true" : "false");
    }
    c.certified = h.degree() == 0;
    if (c.certified) c.values.emplace_back("gcd", to_string(h));
    if (gcd_out) *gcd_out = h;
    return c;
}

/// A place v with v(phi^n(b)) > 0, v(phi^n(b)) not divisible by d, and
/// v(phi^m(b)) = 0 for 1 <= m < n.
template <class K>
Certificate dfree_primitive_certificate(const DynSys<K>& phi, int n, const K& b, const FactorConfig& cfg = {}) {
    using ops = field_ops<K>;
    if (n < 1) throw domain_error("dfree_primitive_certificate needs n >= 1");
    const int d = phi.degree();
    Certificate c;
    c.kind = CertKind::dfree_primitive;
    c.n = n;
    c.subject = to_string(phi.poly(), "x") + " at " + ops::str(b) + ", n = " + std::to_string(n);
    std::vector<K> vals;
    K x = b;
    for (int m = 1; m <= n; ++m) vals.push_back(x = phi(x));
    const K& g = vals.back();
    if (algebra<K>::is_zero(g)) return c;
    c.values.emplace_back("value", ops::str(g));
    std::vector<std::pair<typename field_ops<K>::place, int>> cand;
    try {
        for (const auto& [v, e] : ops::factor(g, cfg).factors)
            if (e > 0) cand.emplace_back(v, e);
    } catch (const incomplete_factorization& err) {
        throw indeterminate_error(n, err.survivor());
    }
    if constexpr (ops::function_field) {
        const int e = ops::valuation(g, ops::place::infinity());
        if (e > 0) cand.emplace_back(ops::place::infinity(), e);
    }
    for (const auto& [v, e] : cand) {
        if (e % d == 0) continue;
        bool fresh = true;
        for (int m = 0; m + 1 < n && fresh; ++m)
            fresh = !algebra<K>::is_zero(vals[m]) && ops::valuation(vals[m], v) == 0;
        if (fresh) {
            c.certified = true;
            c.witness_place = v.str();
            c.witness_exponent = e;
            return c;
        }
    }
    return c;
}

template <class K>
Certificate dfree_primitive_certificate(const DynSys<K>& phi, int n, const FactorConfig& cfg = {}) {
    return dfree_primitive_certificate(phi, n, algebra<K>::zero(phi.ctx()), cfg);
}

namespace detail {
inline bool irreducible_poly(const Poly<Fp>& f) { return fp::is_irreducible(f); }
inline bool irreducible_poly(const Poly<BigRat>& f) {
    auto fs = zx::factor(f);
    return fs.size() == 1 && fs[0].second == 1;
}
}  // namespace detail

/// Recomputes the orbit and the witness valuations from scratch.
template <class K>
bool recheck_dfree_primitive(const Certificate& c, const DynSys<K>& phi, const K& b,
                             const typename field_ops<K>::place& v) {
    using ops = field_ops<K>;
    if (!c.certified || !c.witness_place || *c.witness_place != v.str() || !c.witness_exponent) return false;
    if constexpr (ops::function_field) {
        if (!v.infinite && !detail::irreducible_poly(v.pi)) return false;
    } else {
        if (!is_probable_prime(v.q)) return false;
    }
    K x = b;
    for (int m = 1; m < c.n; ++m) {
        x = phi(x);
        if (algebra<K>::is_zero(x) || ops::valuation(x, v) != 0) return false;
    }
    x = phi(x);
    if (algebra<K>::is_zero(x)) return false;
    const int e = ops::valuation(x, v);
    return e > 0 && e == *c.witness_exponent && e % phi.degree() != 0;
}

}  // namespace orbitlab
