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

// Factorization of polynomials over prime fields: squarefree decomposition,
// distinct-degree splitting and Cantor-Zassenhaus equal-degree splitting.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "orbitlab/poly.hpp"

namespace orbitlab::fp {

using P = Poly<Fp>;
using FactorList = std::vector<std::pair<P, int>>;

/// Coefficientwise p-th root of a polynomial in t^p (Frobenius is the
/// identity on F_p).
inline P pth_root(const P& f) {
    const std::uint32_t p = f.ctx();
    std::vector<Fp> r;
    for (std::size_t i = 0; i < f.size(); i += p) r.push_back(f.coeffs()[i]);
    return P(p, std::move(r));
}

/// f = lc * prod g_i^{e_i}, each g_i monic squarefree, pairwise coprime.
inline FactorList squarefree_decomposition(const P& f) {
    if (f.is_zero()) throw domain_error("squarefree decomposition of zero");
    FactorList out;
    const std::uint32_t p = f.ctx();
    P a = f.monic();
    if (a.degree() <= 0) return out;
    P c = gcd(a, a.derivative());
    P w = a.exact_div(c);
    int i = 1;
    while (w.degree() > 0) {
        P y = gcd(w, c);
        P z = w.exact_div(y);
        if (z.degree() > 0) out.emplace_back(z, i);
        ++i;
        w = y;
        c = c.exact_div(y);
    }
    if (c.degree() > 0) {
        for (auto& [g, e] : squarefree_decomposition(pth_root(c))) out.emplace_back(g, e * static_cast<int>(p));
    }
    return out;
}

/// Splits a monic squarefree f into (product of all degree-k factors, k).
inline FactorList distinct_degree(P f) {
    FactorList out;
    const auto p = f.ctx();
    const P x = P::var(p);
    P h = x % f;
    for (int k = 1; 2 * k <= f.degree(); ++k) {
        h = powmod(h, BigInt(static_cast<unsigned long>(p)), f);
        P g = gcd(h - x, f);
        if (g.degree() > 0) {
            out.emplace_back(g, k);
            f = f.exact_div(g);
            h = h % f;
        }
    }
    if (f.degree() > 0) out.emplace_back(f, f.degree());
    return out;
}

namespace detail {

inline P random_poly(std::uint32_t p, int below_degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
    std::vector<Fp> c;
    for (int i = 0; i < below_degree; ++i) c.push_back(Fp::raw(p, dist(rng)));
    return P(p, std::move(c));
}

inline void equal_degree_rec(const P& f, int k, std::mt19937_64& rng, std::vector<P>& out) {
    if (f.degree() == k) {
        out.push_back(f);
        return;
    }
    const std::uint32_t p = f.ctx();
    for (;;) {
        P a = random_poly(p, f.degree(), rng);
        if (a.degree() <= 0) continue;
        P b(p);
        if (p == 2) {
            // absolute trace F_{2^k} -> F_2
            P term = a % f;
            b = term;
            for (int j = 1; j < k; ++j) {
                term = (term * term) % f;
                b = b + term;
            }
        } else {
            BigInt e = (ipow(BigInt(static_cast<unsigned long>(p)), static_cast<unsigned long>(k)) - 1) / 2;
            b = powmod(a, e, f) - P::one(p);
        }
        P d = gcd(b, f);
        if (d.degree() > 0 && d.degree() < f.degree()) {
            equal_degree_rec(d, k, rng, out);
            equal_degree_rec(f.exact_div(d), k, rng, out);
            return;
        }
    }
}

}  // namespace detail

/// Splits a monic squarefree f whose irreducible factors all have degree k.
inline std::vector<P> equal_degree(const P& f, int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(f.degree()) << 32) ^ static_cast<std::uint64_t>(k));
    std::vector<P> out;
    detail::equal_degree_rec(f, k, rng, out);
    return out;
}

/// Monic irreducible factors with multiplicities, sorted in graded order.
/// The leading coefficient is not included.
inline FactorList factor(const P& f, std::uint64_t seed = 0x5eedULL) {
    FactorList out;
    for (auto& [g, e] : squarefree_decomposition(f)) {
        for (auto& [h, k] : distinct_degree(g)) {
            for (P& irr : equal_degree(h, k, seed)) out.emplace_back(std::move(irr), e);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    // squarefree parts are pairwise coprime, so no merging is needed
    return out;
}

inline bool has_root(const P& f) {
    const std::uint32_t p = f.ctx();
    for (std::uint32_t a = 0; a < p; ++a)
        if (f(Fp::raw(p, a)).is_zero()) return true;
    return false;
}

/// Irreducibility from the factorization; degree <= 3 is rechecked by an
/// exhaustive root search (only feasible for small p).
inline bool is_irreducible(const P& f, std::uint64_t seed = 0x5eedULL) {
    if (f.degree() <= 0) return false;
    auto fs = factor(f, seed);
    bool irr = fs.size() == 1 && fs.front().second == 1;
    if (f.degree() <= 3 && f.ctx() <= 100000) {
        bool root_test = f.degree() == 1 || !has_root(f);
        if (root_test != irr) throw error("irreducibility certificates disagree for " + to_string(f));
    }
    return irr;
}

}  // namespace orbitlab::fp
