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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "test_util.hpp"

using namespace orbitlab;
using namespace testutil;

namespace {

using FOps = field_ops<FpRatFunc>;
using QOps = field_ops<BigRat>;

std::map<oracle::V, int> as_oracle(const FOps::factored& f) {
    std::map<oracle::V, int> m;
    for (const auto& [v, e] : f.factors) m[to_oracle(v.pi)] = e;
    return m;
}

}  // namespace

TEST(PrimeField, RejectsComposite) {
    EXPECT_THROW(PrimeModulus{4}, domain_error);
    EXPECT_THROW(PrimeModulus{1}, domain_error);
    EXPECT_NO_THROW(PrimeModulus{2147483647});
    EXPECT_THROW(PrimeModulus{4294967291ULL}, domain_error);  // prime, but above 2^31
    Fp a(PrimeModulus{7}, -3);
    EXPECT_EQ(a.value(), 4u);
    EXPECT_EQ((a * a.inverse()).value(), 1u);
}

TEST(Factor, SplitsOverF5) {
    const auto f = FOps::factor(FpRatFunc(fpoly(5, {1, 0, 1})));
    ASSERT_EQ(f.factors.size(), 2u);
    EXPECT_EQ(f.factors[0].first.pi, fpoly(5, {2, 1}));
    EXPECT_EQ(f.factors[1].first.pi, fpoly(5, {3, 1}));
    // (t+2)(t+3) expands back to t^2 + 1
    EXPECT_EQ(oracle::mul({2, 1}, {3, 1}, 5), (oracle::V{1, 0, 1}));
    EXPECT_EQ(f.unit, FpRatFunc(fpoly(5, {1})));
}

TEST(Factor, IrreducibleOverF3) {
    const auto f = FOps::factor(FpRatFunc(fpoly(3, {1, 0, 1})));
    ASSERT_EQ(f.factors.size(), 1u);
    EXPECT_EQ(f.factors[0].first.pi, fpoly(3, {1, 0, 1}));
    EXPECT_TRUE(oracle::irreducible({1, 0, 1}, 3));
    for (long r = 0; r < 3; ++r) EXPECT_NE(oracle::eval({1, 0, 1}, r, 3), 0);
}

TEST(Factor, Integer26) {
    const auto f = QOps::factor(BigRat(26L));
    EXPECT_EQ(f.unit, BigRat(1L));
    ASSERT_EQ(f.factors.size(), 2u);
    EXPECT_EQ(f.factors[0].first.q, 2);
    EXPECT_EQ(f.factors[1].first.q, 13);
}

TEST(Factor, ZeroIsDomainError) {
    EXPECT_THROW(FOps::factor(FpRatFunc(3u)), domain_error);
    EXPECT_THROW(QOps::factor(BigRat(0L)), domain_error);
    EXPECT_THROW(QOps::valuation(BigRat(0L), QPlace{2}), domain_error);
}

TEST(Factor, MatchesTrialDivisionOracleOverFp) {
    std::mt19937_64 rng(11);
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        for (int k = 0; k < 60; ++k) {
            FpPoly f = random_nonzero_fp(p, 8, rng);
            if (f.degree() < 1) continue;
            const auto got = FOps::factor(FpRatFunc(f));
            EXPECT_EQ(as_oracle(got), oracle::factor(to_oracle(f), p)) << to_string(f) << " mod " << p;
            EXPECT_EQ(FOps::recombine(got), FpRatFunc(f));
            for (const auto& [v, e] : got.factors) EXPECT_TRUE(oracle::irreducible(to_oracle(v.pi), p));
        }
    }
}

TEST(Factor, RationalFunctionExponentsSigned) {
    const std::uint32_t p = 3;
    FpRatFunc x(fpoly(p, {0, 0, 1, 1}), fpoly(p, {1, 0, 1}));  // t^2 (t+1) / (t^2+1)
    const auto f = FOps::factor(x);
    EXPECT_EQ(f.exponent(FnPlace<Fp>::finite(fpoly(p, {0, 1}))), 2);
    EXPECT_EQ(f.exponent(FnPlace<Fp>::finite(fpoly(p, {1, 0, 1}))), -1);
    EXPECT_EQ(FOps::recombine(f), x);
}

TEST(Factor, IntegersMatchTrialDivision) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> u(2, 1000000000000ULL);
    for (int k = 0; k < 200; ++k) {
        const std::uint64_t n = u(rng);
        const auto got = factor_integer(BigInt(std::to_string(n)));
        const auto want = oracle::trial_factor(n);
        ASSERT_EQ(got.size(), want.size()) << n;
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].first, BigInt(std::to_string(want[i].first)));
            EXPECT_EQ(got[i].second, want[i].second);
        }
    }
}

TEST(Factor, IncompleteFactorizationNamesSurvivor) {
    FactorConfig cfg;
    cfg.bound = 1000;
    cfg.trial_limit = 10;
    // 1000003 * 1000033, both prime
    try {
        QOps::factor(BigRat(BigInt("1000036000099")), cfg);
        FAIL() << "expected incomplete_factorization";
    } catch (const incomplete_factorization& e) {
        EXPECT_EQ(e.survivor(), "1000036000099");
    }
}

TEST(Factor, RationalPolynomials) {
    // (x^4 - 1)(x + 1)^2 = (x - 1)(x + 1)^3 (x^2 + 1)
    QPoly f = qp({-1, 0, 0, 0, 1}) * qp({1, 1}).pow(2);
    const auto fs = zx::factor(f);
    ASSERT_EQ(fs.size(), 3u);
    QPoly back = QPoly::one(NoContext{});
    for (const auto& [g, e] : fs) back = back * g.pow(static_cast<std::uint64_t>(e));
    EXPECT_EQ(back, f);
    // x^4 + 1 is irreducible over Q though reducible mod every prime
    const auto g = zx::factor(qp({1, 0, 0, 0, 1}));
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].second, 1);
}

TEST(Valuation, Examples) {
    const std::uint32_t p = 3;
    EXPECT_EQ(FOps::valuation(FpRatFunc(fpoly(p, {0, 0, 1, 1})), FnPlace<Fp>::finite(fpoly(p, {0, 1}))), 2);
    EXPECT_EQ(FOps::valuation(FpRatFunc(fpoly(p, {1}), fpoly(p, {0, 1})), FnPlace<Fp>::infinity()), 1);
    EXPECT_EQ(QOps::valuation(BigRat(BigInt(5), BigInt(3)), QPlace{3}), -1);
}

TEST(Height, Examples) {
    const std::uint32_t p = 3;
    EXPECT_EQ(FOps::height(FpRatFunc(fpoly(p, {0, 0, 1, 1}))), 3);
    EXPECT_EQ(FOps::height(FpRatFunc(fpoly(p, {1, 1}), fpoly(p, {0, 0, 1}))), 2);
    // (t+1)/t^2: zeros at t = -1 and at infinity (order 1); sum of positive parts
    FpRatFunc a(fpoly(p, {1, 1}), fpoly(p, {0, 0, 1}));
    long pos = 0;
    for (const auto& [v, e] : FOps::factor(a).factors)
        if (e > 0) pos += e * v.norm();
    pos += std::max(FOps::valuation(a, FnPlace<Fp>::infinity()), 0);
    EXPECT_EQ(pos, 2);
    EXPECT_EQ(QOps::height(BigRat(BigInt(5), BigInt(3))), 5);
    EXPECT_EQ(QOps::height(BigRat(0L)), 1);
}

TEST(Support, Examples) {
    const std::uint32_t p = 3;
    const auto s = FOps::support(FpRatFunc(fpoly(p, {0, 1, 1})));
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].pi, fpoly(p, {0, 1}));
    EXPECT_EQ(s[1].pi, fpoly(p, {1, 1}));
    const auto q = QOps::support(BigRat(26L));
    ASSERT_EQ(q.size(), 2u);
    EXPECT_EQ(q[0].q, 2);
    EXPECT_EQ(q[1].q, 13);
    EXPECT_TRUE(QOps::support(BigRat(1L)).empty());
    EXPECT_TRUE(FOps::support(FpRatFunc(fpoly(p, {1}))).empty());
    // infinity appears once v_inf > 0
    const auto inv = FOps::support(FpRatFunc(fpoly(p, {1}), fpoly(p, {0, 1})));
    ASSERT_EQ(inv.size(), 1u);
    EXPECT_TRUE(inv[0].infinite);
}

TEST(Properties, ProductFormulaAndHeightsByDivisors) {
    std::mt19937_64 rng(2026);
    const std::uint32_t p = 5;
    for (int k = 0; k < 300; ++k) {
        FpRatFunc a(random_nonzero_fp(p, 7, rng), random_nonzero_fp(p, 7, rng));
        EXPECT_EQ(product_formula_sum(a), 0);
        EXPECT_EQ(FOps::recombine(FOps::factor(a)), a);
        FpRatFunc b(random_nonzero_fp(p, 5, rng), random_nonzero_fp(p, 5, rng));
        EXPECT_LE(FOps::height(a * b), FOps::height(a) + FOps::height(b));
        EXPECT_EQ(FOps::height(a), FOps::height(a.inverse()));
        EXPECT_EQ(FOps::height(a) == 0, a.is_constant());
        FpPoly g = random_nonzero_fp(p, 9, rng);
        EXPECT_EQ(finite_positive_sum(FpRatFunc(g)), FOps::height(FpRatFunc(g)));
    }
}

TEST(Properties, RationalHeightsByDivisors) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> u(-100000, 100000);
    for (int k = 0; k < 200; ++k) {
        long n = u(rng), d = std::labs(u(rng)) + 1;
        if (n == 0) continue;
        BigRat a{BigInt(n), BigInt(d)};
        EXPECT_LE(finite_positive_sum(a), QOps::log_height(a) + 1e-9);
        EXPECT_EQ(QOps::recombine(QOps::factor(a)), a);
        if (d == 1) {
            EXPECT_NEAR(finite_positive_sum(a), std::log(std::fabs(static_cast<double>(n))), 1e-9);
        }
    }
}

TEST(Poly, KroneckerAgreesWithSchoolbook) {
    std::mt19937_64 rng(3);
    const std::uint32_t p = 2147483647u;
    FpPoly a = random_fp(p, 300, rng), b = random_fp(p, 300, rng);
    a = a + FpPoly::monomial(Fp::raw(p, 1), 300);
    b = b + FpPoly::monomial(Fp::raw(p, 1), 300);
    EXPECT_EQ(to_oracle(a * b), oracle::mul(to_oracle(a), to_oracle(b), p));
}

TEST(Poly, CanonicalText) {
    EXPECT_EQ(to_string(fpoly(5, {1, 2, 0, 1})), "t^3 + 2*t + 1");
    EXPECT_EQ(to_string(fpoly(3, {0, 0, 0, 2})), "2*t^3");
    EXPECT_EQ(to_string(qp({1, 0, -1})), "-t^2 + 1");
    EXPECT_EQ(to_string(FpRatFunc(fpoly(5, {4}), fpoly(5, {0, 1, 0, 1}))), "4/(t^3 + t)");
}

TEST(Limits, EnvironmentOverrides) {
    ::setenv("ORBITLAB_DEGREE_CAP", "123", 1);
    ::setenv("ORBITLAB_FACTOR_BOUND", "99999", 1);
    Limits l = limits_from_env();
    EXPECT_EQ(l.degree_cap, 123u);
    EXPECT_EQ(l.factor.bound, 99999);
    ::setenv("ORBITLAB_DEGREE_CAP", "abc", 1);
    EXPECT_THROW(limits_from_env(), domain_error);
    ::unsetenv("ORBITLAB_DEGREE_CAP");
    ::unsetenv("ORBITLAB_FACTOR_BOUND");
}
