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

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "orbitlab/error.hpp"

namespace orbitlab {

using BigInt = mpz_class;

inline std::string to_string(const BigInt& x) { return x.get_str(); }

/// Natural log of |x| for arbitrarily large x; x must be nonzero.
inline double log_abs(const BigInt& x) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline bool is_probable_prime(const BigInt& n) {
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

/// Element of Q kept in lowest terms with a positive denominator.
class BigRat {
public:
    BigRat() = default;
    BigRat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    BigRat(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    BigRat(const BigInt& num, const BigInt& den) {
        if (den == 0) throw domain_error("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }
    const mpq_class& raw() const { return q_; }

    /// Multiplicative height max(|num|, den).
    BigInt height() const {
        BigInt n = abs(q_.get_num());
        return n > q_.get_den() ? n : BigInt(q_.get_den());
    }

    BigRat inverse() const {
        if (is_zero()) throw domain_error("inverse of zero in Q");
        BigRat r;
        r.q_ = 1 / q_;
        return r;
    }

    friend BigRat operator+(const BigRat& a, const BigRat& b) { return from_raw(a.q_ + b.q_); }
    friend BigRat operator-(const BigRat& a, const BigRat& b) { return from_raw(a.q_ - b.q_); }
    friend BigRat operator*(const BigRat& a, const BigRat& b) { return from_raw(a.q_ * b.q_); }
    friend BigRat operator/(const BigRat& a, const BigRat& b) {
        if (b.is_zero()) throw domain_error("division by zero in Q");
        return from_raw(a.q_ / b.q_);
    }
    BigRat operator-() const { return from_raw(-q_); }
    BigRat& operator+=(const BigRat& o) { return *this = *this + o; }
    BigRat& operator-=(const BigRat& o) { return *this = *this - o; }
    BigRat& operator*=(const BigRat& o) { return *this = *this * o; }
    BigRat& operator/=(const BigRat& o) { return *this = *this / o; }

    friend bool operator==(const BigRat& a, const BigRat& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const BigRat& a, const BigRat& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string str() const { return q_.get_str(); }
    friend std::ostream& operator<<(std::ostream& os, const BigRat& r) { return os << r.str(); }

    double to_double() const { return q_.get_d(); }

private:
    static BigRat from_raw(mpq_class q) {
        BigRat r;
        r.q_ = std::move(q);
        r.q_.canonicalize();
        return r;
    }
    mpq_class q_;
};

/// Deterministic primality for 64-bit values (Miller-Rabin with the
/// first twelve prime bases).
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % sp == 0) return n == sp;
    }
    using u128 = unsigned __int128;
    auto mulmod = [n](std::uint64_t a, std::uint64_t b) { return static_cast<std::uint64_t>(u128(a) * b % n); };
    auto powmod = [&](std::uint64_t a, std::uint64_t e) {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// A prime p <= 2^31 - 1, validated once at construction.
class PrimeModulus {
public:
    explicit PrimeModulus(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
        if (p > 0x7fffffffULL || !is_prime_u64(p))
            throw domain_error("modulus " + std::to_string(p) + " is not a prime below 2^31");
    }
    std::uint32_t value() const noexcept { return p_; }
    friend bool operator==(PrimeModulus, PrimeModulus) = default;

private:
    std::uint32_t p_;
};

/// Element of the prime field F_p.
class Fp {
public:
    Fp() = default;
    Fp(PrimeModulus m, std::int64_t v) : p_(m.value()) {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        v_ = static_cast<std::uint32_t>(r);
    }

    /// Unchecked: p must be prime and v < p.
    static Fp raw(std::uint32_t p, std::uint32_t v) {
        Fp x;
        x.p_ = p;
        x.v_ = v;
        return x;
    }

    std::uint32_t modulus() const noexcept { return p_; }
    std::uint32_t value() const noexcept { return v_; }
    bool is_zero() const noexcept { return v_ == 0; }

    friend Fp operator+(Fp a, Fp b) {
        std::uint32_t s = a.v_ + b.v_;
        if (s >= a.p_) s -= a.p_;
        return raw(a.p_, s);
    }
    friend Fp operator-(Fp a, Fp b) { return raw(a.p_, a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_); }
    friend Fp operator*(Fp a, Fp b) {
        return raw(a.p_, static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v_) * b.v_ % a.p_));
    }
    Fp operator-() const { return raw(p_, v_ == 0 ? 0 : p_ - v_); }

    Fp pow(std::uint64_t e) const {
        Fp r = raw(p_, 1 % p_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    Fp inverse() const {
        if (v_ == 0) throw domain_error("inverse of zero in F_" + std::to_string(p_));
        return pow(p_ - 2);
    }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }

    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }

    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend auto operator<=>(Fp a, Fp b) { return a.v_ <=> b.v_; }

    std::string str() const { return std::to_string(v_); }

private:
    std::uint32_t p_ = 2;
    std::uint32_t v_ = 0;
};

// ---------------------------------------------------------------------------
// algebra<T>: the uniform interface generic code uses for coefficient rings.
//   context       data needed to build constants (modulus for F_p)
//   ctx(x)        context of an element
//   zero/one/from_int(ctx, ...)
//   is_field      division by nonzero elements is exact
// ---------------------------------------------------------------------------
template <class T>
struct algebra;

struct NoContext {
    friend bool operator==(NoContext, NoContext) { return true; }
};

template <>
struct algebra<Fp> {
    using context = std::uint32_t;
    static constexpr bool is_field = true;
    static context ctx(const Fp& x) { return x.modulus(); }
    static Fp zero(context p) { return Fp::raw(p, 0); }
    static Fp one(context p) { return Fp::raw(p, 1); }
    static Fp from_int(context p, std::int64_t v) {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        if (r < 0) r += p;
        return Fp::raw(p, static_cast<std::uint32_t>(r));
    }
    static bool is_zero(const Fp& x) { return x.is_zero(); }
    static std::uint64_t characteristic(context p) { return p; }
    static std::string str(const Fp& x) { return x.str(); }
};

template <>
struct algebra<BigRat> {
    using context = NoContext;
    static constexpr bool is_field = true;
    static context ctx(const BigRat&) { return {}; }
    static BigRat zero(context) { return BigRat(0L); }
    static BigRat one(context) { return BigRat(1L); }
    static BigRat from_int(context, std::int64_t v) { return BigRat(static_cast<long>(v)); }
    static bool is_zero(const BigRat& x) { return x.is_zero(); }
    static std::uint64_t characteristic(context) { return 0; }
    static std::string str(const BigRat& x) { return x.str(); }
};

template <class T>
concept Ring = requires(const T& a, const T& b) {
    typename algebra<T>::context;
    { a + b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { -a } -> std::convertible_to<T>;
    { a == b } -> std::convertible_to<bool>;
    { algebra<T>::is_zero(a) } -> std::convertible_to<bool>;
};

template <class T>
concept Field = Ring<T> && algebra<T>::is_field && requires(const T& a, const T& b) {
    { a / b } -> std::convertible_to<T>;
};

}  // namespace orbitlab
