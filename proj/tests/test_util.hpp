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
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orbitlab/orbitlab.hpp"

namespace testutil {

using namespace orbitlab;

/// F_p polynomial from coefficients, constant term first.
inline FpPoly fpoly(std::uint32_t p, const std::vector<long>& c) {
    std::vector<Fp> v;
    for (long x : c) v.push_back(algebra<Fp>::from_int(p, x));
    return FpPoly(p, v);
}

inline FpPoly from_oracle(const oracle::V& a, std::uint32_t p) {
    std::vector<long> c(a.begin(), a.end());
    return fpoly(p, c);
}

inline oracle::V to_oracle(const FpPoly& f) {
    oracle::V v;
    for (const auto& c : f.coeffs()) v.push_back(c.value());
    return v;
}

inline QPoly qp(const std::vector<long>& c) {
    std::vector<BigRat> v;
    for (long x : c) v.emplace_back(x);
    return QPoly(NoContext{}, v);
}

inline FpPoly random_fp(std::uint32_t p, int maxdeg, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> u(0, p - 1);
    std::uniform_int_distribution<int> dg(0, maxdeg);
    std::vector<long> c(static_cast<std::size_t>(dg(rng)) + 1);
    for (auto& x : c) x = u(rng);
    return fpoly(p, c);
}

inline FpPoly random_nonzero_fp(std::uint32_t p, int maxdeg, std::mt19937_64& rng) {
    for (;;) {
        FpPoly f = random_fp(p, maxdeg, rng);
        if (!f.is_zero()) return f;
    }
}

inline FpRatFunc t_of(std::uint32_t p) { return FpRatFunc::var(p); }

/// x^d + f over F_p(t) with f given by coefficients in t.
inline DynSys<FpRatFunc> unicrit_fp(std::uint32_t p, int d, const std::vector<long>& f) {
    return DynSys<FpRatFunc>::unicritical(d, FpRatFunc(fpoly(p, f)));
}

inline DynSys<BigRat> poly_q(const std::vector<long>& c) { return DynSys<BigRat>(qp(c)); }

}  // namespace testutil
