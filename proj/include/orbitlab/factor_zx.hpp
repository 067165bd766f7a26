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

// Factorization in Q[t]: squarefree decomposition, a modular factorization
// at a good prime, linear Hensel lifting of each factor and exhaustive
// recombination (Zassenhaus). Intended for desk-scale degrees.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "orbitlab/factor_fp.hpp"
#include "orbitlab/ratfunc.hpp"

namespace orbitlab::zx {

using QP = Poly<BigRat>;
using ZPoly = std::vector<BigInt>;  // constant term first, no trailing zeros

inline void ztrim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline QP to_q(const ZPoly& f) {
    std::vector<BigRat> c;
    for (const BigInt& x : f) c.emplace_back(x);
    return QP(NoContext{}, std::move(c));
}

/// f = content * primitive, primitive in Z[t] with positive leading coefficient.
inline ZPoly primitive_part(const QP& f, BigRat* content = nullptr) {
    BigInt l = 1;
    for (const BigRat& c : f.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    ZPoly z;
    BigInt g = 0;
    for (const BigRat& c : f.coeffs()) {
        BigInt v = c.num() * (l / c.den());
        z.push_back(v);
        g = big_gcd(g, v);
    }
    if (f.lead().sign() < 0) g = -g;
    for (BigInt& v : z) v /= g;
    if (content) *content = BigRat(g, l);
    return z;
}

inline fp::P reduce(const ZPoly& f, std::uint32_t p) {
    std::vector<Fp> c;
    BigInt bp(static_cast<unsigned long>(p));
    for (const BigInt& x : f) {
        BigInt r;
        mpz_mod(r.get_mpz_t(), x.get_mpz_t(), bp.get_mpz_t());
        c.push_back(Fp::raw(p, static_cast<std::uint32_t>(r.get_ui())));
    }
    return fp::P(p, std::move(c));
}

inline ZPoly lift(const fp::P& f) {
    ZPoly z;
    for (const Fp& c : f.coeffs()) z.emplace_back(static_cast<unsigned long>(c.value()));
    return z;
}

inline ZPoly zmul_mod(const ZPoly& a, const ZPoly& b, const BigInt& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    for (BigInt& x : r) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    ztrim(r);
    return r;
}

/// Symmetric residues in (-m/2, m/2].
inline ZPoly symmetric(ZPoly f, const BigInt& m) {
    BigInt half = m / 2;
    for (BigInt& x : f) {
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        if (x > half) x -= m;
    }
    ztrim(f);
    return f;
}

/// Lifts u*w = G (mod p), u and w monic and coprime mod p, to a
/// factorization modulo p^k; returns the lift of u.
inline ZPoly hensel_lift(const ZPoly& G, const fp::P& u0, const fp::P& w0, std::uint32_t p, unsigned k) {
    auto [g, sigma, tau] = xgcd(u0, w0);
    if (g.degree() != 0) throw error("Hensel lifting needs coprime factors");
    ZPoly u = lift(u0), w = lift(w0);
    BigInt pm = p, bp(static_cast<unsigned long>(p));
    for (unsigned m = 1; m < k; ++m) {
        BigInt next = pm * bp;
        ZPoly uw = zmul_mod(u, w, next);
        ZPoly e(std::max(G.size(), uw.size()), BigInt(0));
        for (std::size_t i = 0; i < G.size(); ++i) e[i] += G[i];
        for (std::size_t i = 0; i < uw.size(); ++i) e[i] -= uw[i];
        for (BigInt& x : e) {
            mpz_mod(x.get_mpz_t(), x.get_mpz_t(), next.get_mpz_t());
            x /= pm;
        }
        ztrim(e);
        fp::P ep = reduce(e, p);
        fp::P t = (tau * ep) % u0;
        fp::P s = (ep - t * w0).exact_div(u0);
        ZPoly tl = lift(t), sl = lift(s);
        for (std::size_t i = 0; i < tl.size(); ++i) u[i] += pm * tl[i];
        for (std::size_t i = 0; i < sl.size(); ++i) {
            if (i >= w.size()) w.resize(i + 1, BigInt(0));
            w[i] += pm * sl[i];
        }
        pm = next;
    }
    for (BigInt& x : u) mpz_mod(x.get_mpz_t(), x.get_mpz_t(), pm.get_mpz_t());
    return u;
}

/// Irreducible factors of a squarefree primitive g in Z[t] (deg >= 1),
/// returned primitive with positive leading coefficient.
inline std::vector<ZPoly> zassenhaus(const ZPoly& g, std::uint64_t seed) {
    const int n = static_cast<int>(g.size()) - 1;
    if (n <= 1) return {g};
    const BigInt lc = g.back();
    // choose the good prime with the fewest modular factors among a few candidates
    std::uint32_t best_p = 0;
    std::vector<fp::P> best;
    int tried = 0;
    for (std::uint32_t p = 3; tried < 5 && p < 100000; p += 2) {
        if (!is_prime_u64(p)) continue;
        if (mpz_divisible_ui_p(lc.get_mpz_t(), p)) continue;
        fp::P gp = reduce(g, p);
        if (gcd(gp, gp.derivative()).degree() != 0) continue;
        ++tried;
        std::vector<fp::P> fs;
        for (auto& [h, e] : fp::factor(gp, seed)) fs.push_back(h);
        if (best_p == 0 || fs.size() < best.size()) {
            best_p = p;
            best = std::move(fs);
        }
        if (best.size() == 1) break;
    }
    if (best_p == 0) throw error("no good reduction prime found");
    if (best.size() == 1) return {g};

    BigInt maxc = 0;
    for (const BigInt& c : g) maxc = std::max(maxc, BigInt(abs(c)));
    BigInt bound = 2 * abs(lc) * ipow(2, static_cast<unsigned long>(n)) * (n + 1) * maxc;
    unsigned k = 1;
    BigInt pk = best_p;
    while (pk <= bound) {
        pk *= best_p;
        ++k;
    }
    BigInt lc_inv;
    mpz_invert(lc_inv.get_mpz_t(), lc.get_mpz_t(), pk.get_mpz_t());
    ZPoly G;
    for (const BigInt& c : g) {
        BigInt v = c * lc_inv;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pk.get_mpz_t());
        G.push_back(v);
    }
    std::vector<ZPoly> lifted;
    for (std::size_t i = 0; i < best.size(); ++i) {
        fp::P w = fp::P::one(best_p);
        for (std::size_t j = 0; j < best.size(); ++j)
            if (j != i) w = w * best[j];
        lifted.push_back(hensel_lift(G, best[i], w, best_p, k));
    }

    std::vector<ZPoly> out;
    QP rest = to_q(g);
    std::vector<std::size_t> live(lifted.size());
    std::iota(live.begin(), live.end(), 0);
    std::size_t s = 1;
    while (2 * s <= live.size()) {
        bool found = false;
        std::vector<std::size_t> pick(s);
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
            ZPoly cand = ZPoly{primitive_part(rest).back()};
            for (std::size_t idx : pick) cand = zmul_mod(cand, lifted[live[idx]], pk);
            cand = symmetric(cand, pk);
            if (!cand.empty()) {
                ZPoly prim = primitive_part(to_q(cand));
                auto [q, r] = rest.divmod(to_q(prim));
                if (r.is_zero()) {
                    out.push_back(prim);
                    rest = to_q(primitive_part(q));
                    std::vector<std::size_t> keep;
                    for (std::size_t i = 0; i < live.size(); ++i)
                        if (std::find(pick.begin(), pick.end(), i) == pick.end()) keep.push_back(live[i]);
                    live = std::move(keep);
                    found = true;
                    break;
                }
            }
            // next combination
            int i = static_cast<int>(s) - 1;
            while (i >= 0 && pick[i] == live.size() - s + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (std::size_t j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (rest.degree() > 0) out.push_back(primitive_part(rest));
    return out;
}

/// Squarefree decomposition over a field of characteristic zero.
template <Field F>
std::vector<std::pair<Poly<F>, int>> squarefree_char0(const Poly<F>& f) {
    std::vector<std::pair<Poly<F>, int>> out;
    Poly<F> a = f.monic();
    if (a.degree() <= 0) return out;
    Poly<F> c = gcd(a, a.derivative());
    Poly<F> w = a.exact_div(c);
    int i = 1;
    while (w.degree() > 0) {
        Poly<F> y = gcd(w, c);
        Poly<F> z = w.exact_div(y);
        if (z.degree() > 0) out.emplace_back(z, i);
        ++i;
        w = y;
        c = c.exact_div(y);
    }
    return out;
}

/// Monic irreducible factors over Q with multiplicities, graded order.
inline std::vector<std::pair<QP, int>> factor(const QP& f, std::uint64_t seed = 0x5eedULL) {
    if (f.is_zero()) throw domain_error("factorization of zero");
    std::vector<std::pair<QP, int>> out;
    for (auto& [g, e] : squarefree_char0(f)) {
        for (const ZPoly& h : zassenhaus(primitive_part(g), seed)) out.emplace_back(to_q(h).monic(), e);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace orbitlab::zx
