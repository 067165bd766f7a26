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

// Deliberately naive reference computations on plain machine integers. They
// share no code with the library and serve as oracles in the tests.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline std::vector<std::pair<u64, int>> trial_factor(u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (u64 q = 2; q * q <= n; ++q) {
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e) out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// --- dense polynomials over F_p, constant term first ---------------------------------

using V = std::vector<i64>;

inline V trim(V a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}
inline i64 md(i64 a, i64 p) { return ((a % p) + p) % p; }
inline V reduce(V a, i64 p) {
    for (auto& c : a) c = md(c, p);
    return trim(a);
}
inline V add(const V& a, const V& b, i64 p) {
    V r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return reduce(r, p);
}
inline V neg(const V& a, i64 p) {
    V r = a;
    for (auto& c : r) c = md(-c, p);
    return trim(r);
}
inline V sub(const V& a, const V& b, i64 p) { return add(a, neg(b, p), p); }
inline V mul(const V& a, const V& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    V r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = md(r[i + j] + a[i] * b[j], p);
    return trim(r);
}
inline V scale(const V& a, i64 s, i64 p) { return mul(a, V{md(s, p)}, p); }
inline i64 inv(i64 a, i64 p) {
    i64 r = 1, b = md(a, p), e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}
inline std::pair<V, V> divmod(V a, const V& b, i64 p) {
    a = reduce(a, p);
    if (a.size() < b.size()) return {{}, a};
    V q(a.size() - b.size() + 1, 0);
    const i64 li = inv(b.back(), p);
    for (std::size_t k = q.size(); k-- > 0;) {
        const i64 c = a[k + b.size() - 1] * li % p;
        q[k] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[k + j] = md(a[k + j] - c * b[j], p);
    }
    return {trim(q), trim(a)};
}
inline V gcd(V a, V b, i64 p) {
    a = reduce(a, p);
    b = reduce(b, p);
    while (!b.empty()) {
        V r = divmod(a, b, p).second;
        a = b;
        b = r;
    }
    if (!a.empty()) a = scale(a, inv(a.back(), p), p);
    return a;
}
inline V derivative(const V& a, i64 p) {
    V r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(md(a[i] * static_cast<i64>(i), p));
    return trim(r);
}
inline V pow(V a, unsigned e, i64 p) {
    V r{1};
    for (unsigned i = 0; i < e; ++i) r = mul(r, a, p);
    return r;
}
inline i64 eval(const V& a, i64 x, i64 p) {
    i64 r = 0;
    for (std::size_t k = a.size(); k-- > 0;) r = md(r * x + a[k], p);
    return r;
}
inline int deg(const V& a) { return static_cast<int>(a.size()) - 1; }

/// Every monic polynomial of the given degree.
inline std::vector<V> monics(int d, i64 p) {
    std::vector<V> out;
    V cur(d + 1, 0);
    cur[d] = 1;
    std::function<void(int)> rec = [&](int i) {
        if (i == d) {
            out.push_back(cur);
            return;
        }
        for (i64 c = 0; c < p; ++c) {
            cur[i] = c;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

/// Irreducibility by exhausting monic divisors of degree <= deg/2.
inline bool irreducible(const V& f, i64 p) {
    const int n = deg(f);
    if (n < 1) return false;
    for (int k = 1; 2 * k <= n; ++k)
        for (const V& g : monics(k, p))
            if (divmod(f, g, p).second.empty()) return false;
    return true;
}

/// Complete factorization into monic irreducibles by trial division over all
/// monics of increasing degree; exponent list sorted by (degree, coefficients).
inline std::map<V, int> factor(V f, i64 p) {
    std::map<V, int> out;
    f = reduce(f, p);
    for (int k = 1; deg(f) >= 1; ++k) {
        if (2 * k > deg(f)) {
            out[scale(f, inv(f.back(), p), p)] += 1;
            break;
        }
        for (const V& g : monics(k, p)) {
            while (deg(f) >= k) {
                auto [q, r] = divmod(f, g, p);
                if (!r.empty()) break;
                out[g] += 1;
                f = q;
            }
        }
    }
    return out;
}

// --- x-polynomials with F_p[t] coefficients --------------------------------------------

using B = std::vector<V>;  // B[i] is the coefficient of x^i

/// Trace of multiplication by g on F_p(t)[x]/(M), M monic in x, through the
/// companion matrix: sum_i [x^i] (x^i g mod M).
inline V companion_trace(const B& g, const B& M, i64 p) {
    const std::size_t n = M.size() - 1;
    auto reduce_mod = [&](B a) {
        while (a.size() > n) {
            V c = a.back();
            const std::size_t s = a.size() - 1 - n;
            for (std::size_t j = 0; j <= n; ++j) a[s + j] = sub(a[s + j], mul(c, M[j], p), p);
            a.pop_back();
        }
        a.resize(n);
        return a;
    };
    B cur = reduce_mod(g);
    V tr;
    for (std::size_t i = 0; i < n; ++i) {
        tr = add(tr, cur[i], p);
        B next(n + 1);
        for (std::size_t k = 0; k < n; ++k) next[k + 1] = cur[k];
        cur = reduce_mod(next);
    }
    return tr;
}

// --- wreath products as leaf permutations --------------------------------------------------

/// Order of the group generated by the rotations at each internal node of the
/// depth-n d-ary tree, as permutations of the d^n leaves.
inline std::size_t rotation_group_order(int d, int n) {
    std::size_t leaves = 1;
    for (int i = 0; i < n; ++i) leaves *= static_cast<std::size_t>(d);
    using Perm = std::vector<int>;
    std::vector<Perm> gens;
    for (int depth = 0; depth < n; ++depth) {
        std::size_t block = leaves;
        for (int i = 0; i <= depth; ++i) block /= static_cast<std::size_t>(d);  // leaves below a child
        const std::size_t nodes = leaves / (block * d);
        for (std::size_t v = 0; v < nodes; ++v) {
            Perm g(leaves);
            for (std::size_t l = 0; l < leaves; ++l) g[l] = static_cast<int>(l);
            const std::size_t base = v * block * d;
            for (std::size_t c = 0; c < static_cast<std::size_t>(d); ++c)
                for (std::size_t k = 0; k < block; ++k)
                    g[base + c * block + k] = static_cast<int>(base + ((c + 1) % d) * block + k);
            gens.push_back(g);
        }
    }
    Perm id(leaves);
    for (std::size_t l = 0; l < leaves; ++l) id[l] = static_cast<int>(l);
    std::set<Perm> seen{id};
    std::vector<Perm> queue{id};
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (const auto& g : gens) {
            Perm r(leaves);
            for (std::size_t l = 0; l < leaves; ++l) r[l] = g[queue[h][l]];
            if (seen.insert(r).second) queue.push_back(r);
        }
    return seen.size();
}

}  // namespace oracle
