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

// Integer factorization: trial division by small primes, then Brent's
// variant of Pollard rho on composite survivors below a configured bound.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <utility>
#include <vector>

#include "orbitlab/numbers.hpp"

namespace orbitlab {

struct FactorConfig {
    /// Composite survivors above this bound are reported, not attacked.
    BigInt bound = BigInt("1000000000000000000");
    std::uint64_t seed = 0x5eedULL;
    int rho_retries = 12;
    std::uint64_t rho_iterations = 1ULL << 24;
    std::uint32_t trial_limit = 1U << 16;
};

namespace detail {

inline const std::vector<std::uint32_t>& small_primes(std::uint32_t limit) {
    static std::map<std::uint32_t, std::vector<std::uint32_t>> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(limit);
    if (it != cache.end()) return it->second;
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> ps;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        ps.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return cache.emplace(limit, std::move(ps)).first->second;
}

// Returns a nontrivial divisor of composite n, or 0 on failure.
inline BigInt brent_rho(const BigInt& n, std::uint64_t c_seed, std::uint64_t max_iter) {
    std::mt19937_64 rng(c_seed);
    BigInt c = BigInt(static_cast<unsigned long>(rng() % 1000003ULL + 1));
    BigInt y = BigInt(static_cast<unsigned long>(rng() % 1000003ULL + 2)), x, ys, q = 1, g = 1;
    const std::uint64_t m = 128;
    std::uint64_t r = 1, iters = 0;
    auto f = [&](const BigInt& v) {
        BigInt t = v * v + c;
        mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
        return t;
    };
    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) y = f(y);
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                BigInt diff = abs(x - y);
                q = q * diff;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            g = big_gcd(q, n);
            k += m;
        }
        r *= 2;
        iters += r;
        if (iters > max_iter) return 0;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = big_gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return (g == n || g == 1) ? BigInt(0) : g;
}

inline bool perfect_power(const BigInt& n, BigInt& root, unsigned long& k) {
    if (!mpz_perfect_power_p(n.get_mpz_t())) return false;
    for (unsigned long e = mpz_sizeinbase(n.get_mpz_t(), 2); e >= 2; --e) {
        BigInt r;
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) != 0) {
            root = r;
            k = e;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Prime factorization of |n|, n != 0, as ascending (prime, exponent).
inline std::vector<std::pair<BigInt, int>> factor_integer(const BigInt& n_in, const FactorConfig& cfg = {}) {
    if (n_in == 0) throw domain_error("factorization of zero");
    BigInt n = abs(n_in);
    std::map<BigInt, int> acc;
    for (std::uint32_t sp : detail::small_primes(cfg.trial_limit)) {
        if (n == 1) break;
        BigInt bp(static_cast<unsigned long>(sp));
        if (bp * bp > n) break;
        unsigned long e = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), bp.get_mpz_t());
        if (e) acc[bp] += static_cast<int>(e);
    }
    std::vector<std::pair<BigInt, int>> work;
    if (n > 1) work.emplace_back(n, 1);
    std::uint64_t attempt = 0;
    while (!work.empty()) {
        auto [m, mult] = work.back();
        work.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) {
            acc[m] += mult;
            continue;
        }
        BigInt root;
        unsigned long k = 0;
        if (detail::perfect_power(m, root, k)) {
            work.emplace_back(root, mult * static_cast<int>(k));
            continue;
        }
        if (m > cfg.bound) throw incomplete_factorization(m.get_str());
        BigInt d = 0;
        for (int t = 0; t < cfg.rho_retries && d == 0; ++t)
            d = detail::brent_rho(m, cfg.seed + 7919 * (attempt++), cfg.rho_iterations);
        if (d == 0) throw incomplete_factorization(m.get_str());
        BigInt other = m / d;
        work.emplace_back(d, mult);
        work.emplace_back(other, mult);
    }
    return {acc.begin(), acc.end()};
}

}  // namespace orbitlab
