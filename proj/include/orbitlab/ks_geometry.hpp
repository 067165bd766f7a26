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
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbitlab/ratfunc.hpp"

namespace orbitlab {

/// Polynomial in x whose coefficients lie in F_p[t].
using BivarPoly = Poly<FpPoly>;

inline BivarPoly bivar_constant(const FpPoly& c) { return BivarPoly(c.ctx(), {c}); }
inline BivarPoly bivar_x(std::uint32_t p) { return BivarPoly::var(p); }

/// Coefficientwise d/dt.
inline BivarPoly t_derivative(const BivarPoly& F) {
    std::vector<FpPoly> c;
    for (const auto& a : F.coeffs()) c.push_back(a.derivative());
    return BivarPoly(F.ctx(), std::move(c));
}

inline Poly<FpRatFunc> to_ratfunc_coeffs(const BivarPoly& F) {
    std::vector<FpRatFunc> c;
    for (const auto& a : F.coeffs()) c.emplace_back(a);
    return Poly<FpRatFunc>(F.ctx(), std::move(c));
}

inline std::string to_string(const BivarPoly& F) {
    return to_string(to_ratfunc_coeffs(F), "x");
}

namespace detail {

inline void require_tame(int d, std::uint32_t p) {
    if (d < 2) throw domain_error("degree must be >= 2");
    if (d % static_cast<int>(p) == 0)
        throw unsupported_error("p = " + std::to_string(p) + " divides d = " + std::to_string(d) + " (wild case)");
}

inline Fp fp_int(std::uint32_t p, long v) { return algebra<Fp>::from_int(p, v); }

}  // namespace detail

struct IteratePartials {
    BivarPoly phi;    // phi^m(x)
    BivarPoly phi_x;  // d/dx
    BivarPoly phi_t;  // d/dt
};

/// phi^m for phi = x^d + f over F_p[t] together with both partials.
inline IteratePartials phi_iter_partials(int d, const FpPoly& f, int m, std::uint64_t degree_cap = 100000) {
    const std::uint32_t p = f.ctx();
    detail::require_tame(d, p);
    if (m < 1) throw domain_error("level must be >= 1");
    std::uint64_t N = 1;
    for (int i = 0; i < m; ++i)
        if ((N *= static_cast<std::uint64_t>(d)) > degree_cap) throw size_error("d^m exceeds the degree cap");
    BivarPoly phi1 = BivarPoly::monomial(FpPoly::one(p), static_cast<std::size_t>(d)) + bivar_constant(f);
    BivarPoly acc = phi1;
    for (int i = 1; i < m; ++i) acc = acc.pow(static_cast<std::uint64_t>(d)) + bivar_constant(f);
    return {acc, acc.derivative(), t_derivative(acc)};
}

// --- the quotient ring F_p(t)[x]/(M) ---------------------------------------------------

/// F_p(t)[x]/(M) for M monic in x with F_p[t] coefficients. Elements are
/// kept as num/den with num in F_p[t][x] reduced mod M and den in F_p[t].
class QuotientRing {
public:
    struct Elem {
        BivarPoly num;
        FpPoly den;
    };

    explicit QuotientRing(BivarPoly M, std::size_t power_sums = 0) : M_(std::move(M)) {
        if (M_.degree() < 1 || !(M_.lead() == FpPoly::one(M_.ctx())))
            throw domain_error("quotient modulus must be monic in x of positive degree");
        extend_power_sums(power_sums ? power_sums : 2 * static_cast<std::size_t>(M_.degree()));
    }

    std::uint32_t p() const { return M_.ctx(); }
    int degree() const { return M_.degree(); }
    const BivarPoly& modulus() const { return M_; }

    Elem one() const { return {bivar_constant(FpPoly::one(p())), FpPoly::one(p())}; }
    Elem x() const { return from(bivar_x(p())); }
    Elem from(const BivarPoly& a) const { return {reduce(a), FpPoly::one(p())}; }
    Elem from(const BivarPoly& a, const FpPoly& den) const {
        if (den.is_zero()) throw domain_error("zero denominator in quotient ring element");
        return {reduce(a), den};
    }

    BivarPoly reduce(BivarPoly a) const {
        const int N = degree();
        if (a.degree() < N) return a;
        std::vector<FpPoly> c = a.coeffs();
        const auto& m = M_.coeffs();
        for (int k = static_cast<int>(c.size()) - 1; k >= N; --k) {
            if (c[k].is_zero()) continue;
            FpPoly top = std::move(c[k]);
            c[k] = FpPoly(p());
            for (int i = 0; i < N; ++i)
                if (!m[i].is_zero()) c[k - N + i] -= top * m[i];
        }
        c.resize(static_cast<std::size_t>(N), FpPoly(p()));
        return BivarPoly(p(), std::move(c));
    }

    Elem mul(const Elem& a, const Elem& b) const { return {reduce(a.num * b.num), a.den * b.den}; }
    Elem scale(const Elem& a, Fp s) const { return {FpPoly::constant(s) * a.num, a.den}; }
    Elem times_x(const Elem& a) const { return {reduce(a.num.shift(1)), a.den}; }

    Elem pow(Elem b, std::uint64_t e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, b);
            e >>= 1;
            if (e) b = mul(b, b);
        }
        return r;
    }

    /// Horner evaluation of q(y) with y an element of the ring.
    Elem eval(const BivarPoly& q, const Elem& y) const {
        Elem acc{BivarPoly(p()), FpPoly::one(p())};
        for (std::size_t i = q.size(); i-- > 0;) {
            acc = mul(acc, y);
            // bring q_i over the running denominator
            acc.num = acc.num + bivar_constant(q.coeffs()[i] * acc.den);
        }
        return acc;
    }

    /// Tr(x^k) in F_p[t] from the Newton identities.
    const FpPoly& power_sum(std::size_t k) const {
        if (k >= psum_.size()) throw domain_error("power sum index beyond the precomputed range");
        return psum_[k];
    }

    /// Trace of a, i.e. the sum of a over the roots of M.
    FpRatFunc trace(const Elem& a) const { return trace_shifted(a, 0); }

    /// Tr(x^i * a) using power sums of index up to i + N - 1, without
    /// reducing x^i * a.
    FpRatFunc trace_shifted(const Elem& a, std::size_t i) const {
        FpPoly s(p());
        for (std::size_t k = 0; k < a.num.size(); ++k)
            if (!a.num.coeffs()[k].is_zero()) s += a.num.coeffs()[k] * power_sum(i + k);
        return FpRatFunc(s, a.den);
    }

private:
    void extend_power_sums(std::size_t upto) {
        const int N = degree();
        const auto& c = M_.coeffs();  // M = x^N + c_{N-1} x^{N-1} + ... + c_0
        psum_.clear();
        psum_.push_back(FpPoly::constant(detail::fp_int(p(), N)));
        for (std::size_t k = 1; k <= upto; ++k) {
            FpPoly s(p());
            for (std::size_t i = 1; i < k && i <= static_cast<std::size_t>(N); ++i) {
                const FpPoly& a = c[N - i];
                if (!a.is_zero()) s += a * psum_[k - i];
            }
            if (k <= static_cast<std::size_t>(N)) s += detail::fp_int(p(), static_cast<long>(k)) * c[N - k];
            psum_.push_back(-s);
        }
    }

    BivarPoly M_;
    std::vector<FpPoly> psum_;
};

/// Inverse of d/dx phi^m modulo phi^m for phi = x^d + f, from the chain rule
/// phi^m_x = prod_{k<m} d * (phi^k(x))^(d-1) and y^-1 = -Q(y)/Phi(0) when
/// phi^m = Phi(y) = y Q(y) + Phi(0), y = phi^k(x).
inline QuotientRing::Elem inverse_phi_x(const QuotientRing& R, int d, const FpPoly& f, int m) {
    const std::uint32_t p = f.ctx();
    QuotientRing::Elem acc = R.one();
    QuotientRing::Elem y = R.x();
    for (int k = 0; k < m; ++k) {
        BivarPoly Phi = phi_iter_partials(d, f, m - k).phi;
        FpPoly Phi0 = Phi.constant_term();
        if (Phi0.is_zero()) throw domain_error("phi^" + std::to_string(m - k) + "(0) = 0: modulus is not squarefree");
        std::vector<FpPoly> q(Phi.coeffs().begin() + 1, Phi.coeffs().end());
        QuotientRing::Elem Qy = R.eval(BivarPoly(p, std::move(q)), y);
        QuotientRing::Elem yinv{-Qy.num, Qy.den * Phi0};
        acc = R.mul(acc, R.pow(yinv, static_cast<std::uint64_t>(d - 1)));
        if (k + 1 < m) {
            // y <- phi(y)
            y = R.pow(y, static_cast<std::uint64_t>(d));
            y.num = y.num + bivar_constant(f * y.den);
        }
    }
    Fp dm = detail::fp_int(p, 1);
    for (int k = 0; k < m; ++k) dm *= detail::fp_int(p, d);
    return R.scale(acc, dm.inverse());
}

/// Sum of (h_num/h_den)(P) over the roots P of the modulus, via an inverse
/// of h_den computed by the extended Euclidean algorithm over F_p(t).
inline FpRatFunc trace_in_quotient(const BivarPoly& h_num, const BivarPoly& h_den, const BivarPoly& modulus) {
    QuotientRing R(modulus, static_cast<std::size_t>(modulus.degree()));
    Poly<FpRatFunc> M = to_ratfunc_coeffs(modulus);
    Poly<FpRatFunc> inv = inverse_mod(to_ratfunc_coeffs(h_den), M);
    Poly<FpRatFunc> g = (to_ratfunc_coeffs(h_num) * inv) % M;
    FpRatFunc acc(modulus.ctx());
    for (std::size_t k = 0; k < g.size(); ++k) acc += g.coeffs()[k] * FpRatFunc(R.power_sum(k));
    return acc;
}

// --- discriminant criterion and closed forms --------------------------------------------

/// f * (f^d + f) != 0: the criterion for phi^2 to be separable.
inline bool disc_phi2_nonzero(int d, const FpPoly& f) {
    if (f.is_zero()) return false;
    return !(f.pow(static_cast<std::uint64_t>(d)) + f).is_zero();
}

struct ClosedForm {
    friend bool operator==(const ClosedForm&, const ClosedForm&) = default;
    FpRatFunc value;
    bool vanishes = false;
    std::string reason;  // "f' = 0", "d = 1 mod p" or empty
};

/// (1-d) f' / (2 d^4 (f^d + f)).
inline ClosedForm ks_closed_form_hyperelliptic(int d, const FpPoly& f) {
    const std::uint32_t p = f.ctx();
    detail::require_tame(d, p);
    if (p == 2) throw unsupported_error("hyperelliptic closed form needs odd characteristic");
    FpPoly D = f.pow(static_cast<std::uint64_t>(d)) + f;
    if (D.is_zero()) throw domain_error("f (f^d + f) = 0: phi^2 has zero discriminant");
    Fp c = detail::fp_int(p, 1 - d) / (detail::fp_int(p, 2) * detail::fp_int(p, d).pow(4));
    ClosedForm r{FpRatFunc(c * f.derivative(), D), false, ""};
    if (f.derivative().is_zero()) r = {r.value, true, "f' = 0"};
    else if (detail::fp_int(p, d - 1).is_zero()) r = {r.value, true, "d = 1 mod p"};
    return r;
}

/// Entries are root averages (1/d^m) sum_s ..., the normalization under
/// which m_{d-2,0} equals (1-d) f' / (2 d^4 (f^d + f)); raw() gives the
/// plain sum over the d^m roots.
struct KSMatrix {
    friend bool operator==(const KSMatrix&, const KSMatrix&) = default;
    int d = 0;
    int m = 0;
    std::uint32_t p = 0;
    FpPoly f;
    std::vector<std::vector<FpRatFunc>> entries;  // 0 <= i, j < size

    std::size_t size() const { return entries.size(); }
    const FpRatFunc& at(std::size_t i, std::size_t j) const { return entries.at(i).at(j); }
    FpRatFunc raw(std::size_t i, std::size_t j) const {
        long n = 1;
        for (int k = 0; k < m; ++k) n *= d;
        return FpRatFunc::constant(algebra<Fp>::from_int(p, n)) * at(i, j);
    }
    bool all_zero() const {
        for (const auto& row : entries)
            for (const auto& e : row)
                if (!e.is_zero()) return false;
        return true;
    }
};

namespace detail {

/// scalar * phi^m_t / (phi^m_x)^2 in F_p(t)[x]/(phi^m).
inline QuotientRing::Elem ks_kernel(const QuotientRing& R, const IteratePartials& ip, int d, const FpPoly& f, int m,
                                    Fp scalar) {
    QuotientRing::Elem inv = inverse_phi_x(R, d, f, m);
    QuotientRing::Elem G = R.mul(R.from(ip.phi_t), R.mul(inv, inv));
    return R.scale(G, scalar);
}

inline void require_hyperelliptic(int d, const FpPoly& f, int m) {
    detail::require_tame(d, f.ctx());
    if (d % 2 == 0) throw domain_error("hyperelliptic KS matrix needs odd d (even d goes through C_{d,2})");
    if (f.ctx() == 2) throw unsupported_error("hyperelliptic KS matrix needs odd characteristic");
    if (m != 1 && m != 2) throw domain_error("level must be 1 or 2");
    if (m == 1 && f.is_zero()) throw domain_error("singular curve: x^d + f with f = 0");
    if (m == 2 && !disc_phi2_nonzero(d, f))
        throw domain_error("singular curve: disc phi^2 = 0 since f (f^d + f) = 0");
}

/// 1 / (c * d^m).
inline Fp averaged(std::uint32_t p, int c, int d, int m) {
    Fp r = fp_int(p, c);
    for (int k = 0; k < m; ++k) r *= fp_int(p, d);
    return r.inverse();
}

}  // namespace detail

/// KS matrix of C_{2,m}(x^d + f) on the basis x^i dx/y, 0 <= i < (d^m-1)/2,
/// from sum_s P_s^{i+j} phi^m_t(P_s) / (2 phi^m_x(P_s)^2) averaged over roots.
inline KSMatrix ks_matrix_hyperelliptic(int d, const FpPoly& f, int m, std::uint64_t degree_cap = 100000) {
    detail::require_hyperelliptic(d, f, m);
    const std::uint32_t p = f.ctx();
    IteratePartials ip = phi_iter_partials(d, f, m, degree_cap);
    const std::size_t N = static_cast<std::size_t>(ip.phi.degree());
    const std::size_t n = (N - 1) / 2;
    QuotientRing R(ip.phi, 2 * N);
    QuotientRing::Elem G = detail::ks_kernel(R, ip, d, f, m, detail::averaged(p, 2, d, m));
    KSMatrix K{d, m, p, f, std::vector<std::vector<FpRatFunc>>(n, std::vector<FpRatFunc>(n, FpRatFunc(p)))};
    QuotientRing::Elem xj = G;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) K.entries[i][j] = R.trace_shifted(xj, i);
        xj = R.times_x(xj);
    }
    return K;
}

/// A single normalized entry m_{i,j}, with x^{i+j} G reduced in the ring.
inline FpRatFunc ks_entry_hyperelliptic(int d, const FpPoly& f, int m, std::size_t i, std::size_t j,
                                        std::uint64_t degree_cap = 100000) {
    detail::require_hyperelliptic(d, f, m);
    IteratePartials ip = phi_iter_partials(d, f, m, degree_cap);
    QuotientRing R(ip.phi);
    QuotientRing::Elem G = detail::ks_kernel(R, ip, d, f, m, detail::averaged(f.ctx(), 2, d, m));
    for (std::size_t k = 0; k < i + j; ++k) G = R.times_x(G);
    return R.trace(G);
}

struct SuperellipticEntry {
    friend bool operator==(const SuperellipticEntry&, const SuperellipticEntry&) = default;
    FpRatFunc trace_value;  // root average, as for KSMatrix
    FpRatFunc raw_sum;      // plain sum over the d^2 roots
    FpRatFunc closed_form;   // (1-d) f' / (d^5 (f^d + f))
    FpRatFunc scaled_hyper;  // (2/d) (1-d) f' / (2 d^4 (f^d + f))
    bool agree = false;
};

/// m_{(d-2,d-1),(0,1)} on C_{d,2}(x^d + f) from sum_s P_s^{d-2} phi_t(P_s) / (d phi_x(P_s)^2),
/// normalized like KSMatrix.
inline SuperellipticEntry ks_entry_superelliptic(int d, const FpPoly& f, std::uint64_t degree_cap = 100000) {
    const std::uint32_t p = f.ctx();
    detail::require_tame(d, p);
    if (!disc_phi2_nonzero(d, f)) throw domain_error("singular curve: disc phi^2 = 0 since f (f^d + f) = 0");
    IteratePartials ip = phi_iter_partials(d, f, 2, degree_cap);
    QuotientRing R(ip.phi);
    QuotientRing::Elem G = detail::ks_kernel(R, ip, d, f, 2, detail::fp_int(p, d).inverse());
    for (int k = 0; k < d - 2; ++k) G = R.times_x(G);
    SuperellipticEntry e;
    e.raw_sum = R.trace(G);
    e.trace_value = FpRatFunc::constant(detail::averaged(p, 1, d, 2)) * e.raw_sum;
    FpPoly D = f.pow(static_cast<std::uint64_t>(d)) + f;
    Fp dd = detail::fp_int(p, d);
    e.closed_form = FpRatFunc((detail::fp_int(p, 1 - d) / dd.pow(5)) * f.derivative(), D);
    if (p != 2) {
        FpRatFunc hyper = ks_closed_form_hyperelliptic(d, f).value;
        e.scaled_hyper = FpRatFunc::constant(detail::fp_int(p, 2) / dd) * hyper;
    } else {
        e.scaled_hyper = e.closed_form;
    }
    e.agree = e.trace_value == e.closed_form && e.closed_form == e.scaled_hyper;
    return e;
}

// --- curves, genus and j-invariants ---------------------------------------------------

/// Squarefree in x over F_p(t): a specialization t = a with the same degree
/// that is squarefree suffices; otherwise gcd(F, dF/dx) over F_p(t).
inline bool squarefree_in_x(const BivarPoly& F) {
    const std::uint32_t p = F.ctx();
    for (std::uint32_t a = 0; a < p && a < 64; ++a) {
        Fp av = Fp::raw(p, a);
        if (F.lead()(av).is_zero()) continue;
        std::vector<Fp> c;
        for (const auto& k : F.coeffs()) c.push_back(k(av));
        FpPoly g(p, std::move(c));
        if (gcd(g, g.derivative()).degree() == 0) return true;
    }
    Poly<FpRatFunc> G = to_ratfunc_coeffs(F);
    return gcd(G, G.derivative()).degree() == 0;
}

struct SuperellipticCurve {
    int ell = 2;
    BivarPoly F;
    int m = 1;
    int d = 2;

    SuperellipticCurve(int ell_, BivarPoly F_, int m_, int d_) : ell(ell_), F(std::move(F_)), m(m_), d(d_) {
        if (ell < 2) throw domain_error("ell must be >= 2");
        if (ell % static_cast<int>(F.ctx()) == 0) throw unsupported_error("p divides ell");
        if (!squarefree_in_x(F)) throw domain_error("right-hand side is not squarefree in x");
    }
};

/// ((ell-1)(N-1) + 1 - gcd(ell, N)) / 2 for y^ell = F, F squarefree of degree N.
inline long genus_superelliptic(int ell, long N) {
    if (ell < 2 || N < 1) throw domain_error("genus needs ell >= 2 and N >= 1");
    return ((ell - 1) * (N - 1) + 1 - std::gcd(static_cast<long>(ell), N)) / 2;
}

inline long genus_superelliptic(const SuperellipticCurve& C) { return genus_superelliptic(C.ell, C.F.degree()); }

template <class K>
struct JInvariant {
    friend bool operator==(const JInvariant&, const JInvariant&) = default;
    K j;
    K c4;
    K delta;
    bool constant = false;
};

/// j of E: Y^2 = (X - c)((X - gamma)^2 + c) as c4^3 / Delta of the monic cubic.
template <class K>
JInvariant<K> j_invariant_quadratic(const K& gamma, const K& c) {
    const auto ctx = algebra<K>::ctx(c);
    if (algebra<K>::characteristic(ctx) == 2) throw unsupported_error("j-invariant of y^2 = cubic needs odd characteristic");
    auto k = [&](long v) { return algebra<K>::from_int(ctx, v); };
    K a2 = -(k(2) * gamma) - c;
    K a4 = gamma * gamma + c + k(2) * gamma * c;
    K a6 = -(c * (gamma * gamma + c));
    K b2 = k(4) * a2, b4 = k(2) * a4, b6 = k(4) * a6;
    K b8 = k(4) * a2 * a6 - a4 * a4;
    K c4 = b2 * b2 - k(24) * b4;
    K delta = -(b2 * b2 * b8) - k(8) * b4 * b4 * b4 - k(27) * b6 * b6 + k(9) * b2 * b4 * b6;
    if (algebra<K>::is_zero(delta)) throw domain_error("singular cubic: discriminant vanishes");
    K j = c4 * c4 * c4 / delta;
    bool constant = true;
    if constexpr (requires { j.is_constant(); }) constant = j.is_constant();
    return {j, c4, delta, constant};
}

}  // namespace orbitlab
