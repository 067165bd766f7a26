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

// Command dispatch behind the orbitlab executable. run_command is pure apart
// from the timestamp, so tests drive it directly.

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "orbitlab/reports.hpp"

namespace orbitlab::cli {

using report::json;

class usage_error : public error {
public:
    using error::error;
};

enum exit_code : int { ok = 0, usage = 1, domain = 2, resource = 3, indeterminate = 4 };

struct RunConfig {
    std::string command;
    std::string field = "Q";  // Q | Fp_t | Q_t
    std::uint32_t p = 0;
    std::string phi;
    std::string base = "0";
    int N = 8;
    std::optional<int> ell;
    std::vector<std::string> S;
    bool S_given = false;
    long B = 2;
    int level = 2;
    std::string entry;  // "i,j"; d may appear, as in "d-2,0"
    bool superelliptic = false;
    int d = 2;
    int n = 2;
    bool enumerate = false;
    std::string gamma;
    std::string c;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool factor_route = false;
    bool basepoints = false;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw usage_error(msg);
}

/// Calls fn.template operator()<K>(ctx) for the configured field.
template <class Fn>
json with_field(const RunConfig& c, Fn&& fn) {
    if (c.field == "Q") return fn.template operator()<BigRat>(NoContext{});
    if (c.field == "Q_t") return fn.template operator()<QRatFunc>(NoContext{});
    if (c.field == "Fp_t") {
        require(c.p != 0, "--field Fp_t needs -p");
        PrimeModulus{c.p};  // validates
        return fn.template operator()<FpRatFunc>(c.p);
    }
    throw usage_error("unknown field '" + c.field + "' (expected Q, Fp_t or Q_t)");
}

template <class K>
DynSys<K> parse_phi(const RunConfig& c, typename algebra<K>::context ctx, const Limits& lim) {
    require(!c.phi.empty(), "--phi is required");
    return DynSys<K>(to_poly<K>(parse_expr(c.phi), ctx, lim.degree_cap));
}

template <class K>
K parse_value(const std::string& s, typename algebra<K>::context ctx, const Limits& lim) {
    return to_value<K>(parse_expr(s), ctx, lim.degree_cap);
}

template <class K>
std::vector<place_t<K>> parse_places(const RunConfig& c, typename algebra<K>::context ctx, const Limits& lim) {
    using ops = field_ops<K>;
    std::vector<place_t<K>> S;
    if (!c.S_given) {
        if constexpr (ops::function_field) S.push_back(place_t<K>::infinity());
        return S;
    }
    for (const auto& s : c.S) {
        if (s.empty()) continue;
        if constexpr (ops::function_field) {
            if (s == "inf") {
                S.push_back(place_t<K>::infinity());
                continue;
            }
            K v = parse_value<K>(s, ctx, lim);
            if (v.den().degree() != 0 || v.num().degree() < 1) throw domain_error("place " + s + " is not a polynomial");
            auto pi = v.num().monic();
            auto fs = ops::factor(K(pi), lim.factor).factors;
            if (fs.size() != 1 || fs[0].second != 1) throw domain_error("place " + s + " is not irreducible");
            S.push_back(place_t<K>::finite(pi));
        } else {
            BigInt q;
            if (q.set_str(s, 10) != 0 || q < 2 || !is_probable_prime(q)) throw domain_error("place " + s + " is not a prime");
            S.push_back(QPlace{q});
        }
    }
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    return S;
}

/// phi^n(b) for n <= N, refusing once a value outgrows the degree cap
/// (degree height over F(t), bit length over Q).
template <class K>
void guard_orbit(const DynSys<K>& phi, const K& b, int N, const Limits& lim) {
    K x = b;
    for (int n = 1; n <= N; ++n) {
        x = phi(x);
        double size;
        if constexpr (field_ops<K>::function_field) size = static_cast<double>(field_ops<K>::height(x));
        else size = field_ops<K>::log_height(x) / std::log(2.0) / 64.0;
        if (size > static_cast<double>(lim.degree_cap))
            throw size_error("phi^" + std::to_string(n) + "(b) exceeds the degree cap " + std::to_string(lim.degree_cap));
    }
}

inline long eval_index(const std::string& s, int d) {
    std::string t;
    for (char ch : s) t += ch == 'd' ? "(" + std::to_string(d) + ")" : std::string(1, ch);
    BigRat v = to_value<BigRat>(parse_expr(t), NoContext{});
    if (v.den() != 1 || v.sign() < 0) throw usage_error("entry index '" + s + "' is not a nonnegative integer");
    return v.num().get_si();
}

template <class K>
json header(const RunConfig& c, typename algebra<K>::context) {
    json j = report::envelope(c.command);
    j["field"] = field_ops<K>::name;
    if constexpr (!std::is_same_v<K, BigRat> && !std::is_same_v<K, QRatFunc>) j["p"] = c.p;
    j["seed"] = c.seed;
    return j;
}

inline FactorConfig factor_config(const RunConfig& c, const Limits& lim) {
    FactorConfig f = lim.factor;
    f.seed = c.seed;
    return f;
}

// --- commands ------------------------------------------------------------------------------

inline json cmd_orbit(const RunConfig& c, const Limits& lim) {
    return with_field(c, [&]<class K>(typename algebra<K>::context ctx) {
        auto phi = parse_phi<K>(c, ctx, lim);
        K b = parse_value<K>(c.base, ctx, lim);
        require(c.N >= 1, "-N must be >= 1");
        guard_orbit(phi, b, c.N, lim);
        json j = header<K>(c, ctx);
        j["phi"] = report::poly(phi.poly());
        j["orbit"] = report::to_json(build_orbit(phi, b, c.N, factor_config(c, lim)));
        j["canonical_height"] = report::to_json(canonical_height(phi, b, c.N));
        auto pre = is_preperiodic(phi, b, c.N);
        json cls{{"kind", to_string(pre.kind)}, {"certified_at", pre.certified_at}, {"threshold_float", pre.threshold}};
        json cyc = json::array();
        for (const auto& v : pre.cycle) cyc.push_back(report::str(v));
        cls["cycle"] = cyc;
        j["classification"] = cls;
        return j;
    });
}

inline json cmd_zsig(const RunConfig& c, const Limits& lim) {
    return with_field(c, [&]<class K>(typename algebra<K>::context ctx) {
        auto phi = parse_phi<K>(c, ctx, lim);
        K b = parse_value<K>(c.base, ctx, lim);
        require(c.N >= 1, "-N must be >= 1");
        guard_orbit(phi, b, c.N, lim);
        std::vector<place_t<K>> S;
        if (c.S_given) S = parse_places<K>(c, ctx, lim);
        json j = header<K>(c, ctx);
        auto rep = zsigmondy_report(phi, b, c.N, c.ell, factor_config(c, lim), c.S_given ? &S : nullptr);
        j["S"] = report::places(S);
        j["zsig_set"] = rep.zsig_set;
        if (rep.ell_zsig_set) j["ell_zsig_set"] = *rep.ell_zsig_set;
        j["report"] = report::to_json(rep);
        return j;
    });
}

inline json cmd_avg(const RunConfig& c, const Limits& lim) {
    return with_field(c, [&]<class K>(typename algebra<K>::context ctx) -> json {
        if constexpr (std::is_same_v<K, QRatFunc>) {
            throw domain_error("avg needs a finite box: use Q or Fp_t");
        } else {
            auto phi = parse_phi<K>(c, ctx, lim);
            auto S = parse_places<K>(c, ctx, lim);
            require(c.N >= 1 && c.B >= 0, "avg needs N >= 1 and B >= 0");
            AvgOptions opt;
            opt.threads = c.threads;
            opt.use_factorization = c.factor_route;
            opt.factor = factor_config(c, lim);
            DensityReport<K> rep;
            if constexpr (std::is_same_v<K, FpRatFunc>) rep = avg_zsigmondy(phi, S, static_cast<int>(c.B), c.N, opt);
            else rep = avg_zsigmondy(phi, S, c.B, c.N, opt);
            json j = header<K>(c, ctx);
            j["report"] = report::to_json(rep, c.basepoints);
            return j;
        }
    });
}

inline json cmd_ks(const RunConfig& c, const Limits& lim) {
    require(c.field == "Fp_t", "ks needs --field Fp_t");
    require(c.p != 0, "--field Fp_t needs -p");
    PrimeModulus{c.p};
    const std::uint32_t p = c.p;
    auto phi = parse_phi<FpRatFunc>(c, p, lim);
    if (!phi.is_unicritical() || phi.f().den().degree() != 0)
        throw domain_error("ks needs phi = x^d + f with f a polynomial in t");
    const int d = phi.degree();
    const FpPoly f = phi.f().num();
    json j = header<FpRatFunc>(c, p);
    j["phi"] = report::poly(phi.poly());
    j["d"] = d;
    j["level"] = c.level;
    const bool corner_closed = c.level == 2;
    std::optional<ClosedForm> cf;
    if (corner_closed) cf = ks_closed_form_hyperelliptic(d, f);
    if (!c.entry.empty()) {
        const auto comma = c.entry.find(',');
        require(comma != std::string::npos, "--entry expects i,j");
        const long i = eval_index(c.entry.substr(0, comma), d), jj = eval_index(c.entry.substr(comma + 1), d);
        long dm_int = 1;
        for (int k = 0; k < c.level; ++k) dm_int *= d;
        const long size = (dm_int - 1) / 2;
        if (i >= size || jj >= size) throw domain_error("entry index outside the " + std::to_string(size) + "x" + std::to_string(size) + " matrix");
        FpRatFunc v = ks_entry_hyperelliptic(d, f, c.level, static_cast<std::size_t>(i), static_cast<std::size_t>(jj), lim.degree_cap);
        j["entry"] = json::array({i, jj});
        j["value"] = report::str(v);
        FpRatFunc dm = FpRatFunc::constant(algebra<Fp>::from_int(p, dm_int));
        j["raw_value"] = report::str(dm * v);
        if (corner_closed && i + jj == d - 2) {
            j["closed_form"] = report::str(cf->value);
            j["closed_form_match"] = v == cf->value;
        }
    } else {
        KSMatrix m = ks_matrix_hyperelliptic(d, f, c.level, lim.degree_cap);
        bool hankel = true;
        std::vector<const FpRatFunc*> by_sum(2 * m.size(), nullptr);
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = 0; b < m.size(); ++b) {
                const FpRatFunc*& first = by_sum[a + b];
                if (!first) first = &m.at(a, b);
                else hankel = hankel && *first == m.at(a, b);
            }
        j["matrix"] = report::to_json(m);
        j["hankel"] = hankel;
        j["all_zero"] = m.all_zero();
        if (corner_closed && static_cast<std::size_t>(d - 2) < m.size()) {
            j["closed_form"] = report::str(cf->value);
            j["closed_form_match"] = m.at(static_cast<std::size_t>(d - 2), 0) == cf->value;
        }
    }
    if (c.superelliptic) {
        SuperellipticEntry s = ks_entry_superelliptic(d, f, lim.degree_cap);
        j["superelliptic"] = json{{"value", report::str(s.trace_value)},
                                  {"raw_sum", report::str(s.raw_sum)},
                                  {"closed_form", report::str(s.closed_form)},
                                  {"two_over_d_hyperelliptic", report::str(s.scaled_hyper)},
                                  {"agree", s.agree}};
    }
    return j;
}

inline json cmd_jinv(const RunConfig& c, const Limits& lim) {
    require(!c.gamma.empty() && !c.c.empty(), "jinv needs --gamma and --c");
    return with_field(c, [&]<class K>(typename algebra<K>::context ctx) {
        K g = parse_value<K>(c.gamma, ctx, lim), cc = parse_value<K>(c.c, ctx, lim);
        json j = header<K>(c, ctx);
        j["gamma"] = report::str(g);
        j["c"] = report::str(cc);
        j["result"] = report::to_json(j_invariant_quadratic(g, cc));
        return j;
    });
}

inline json cmd_galois_cert(const RunConfig& c, const Limits& lim) {
    return with_field(c, [&]<class K>(typename algebra<K>::context ctx) {
        auto phi = parse_phi<K>(c, ctx, lim);
        if (!phi.is_unicritical()) throw domain_error("galois-cert needs phi = x^d + f");
        require(c.N >= 1, "-N must be >= 1");
        const int d = phi.degree();
        const FactorConfig fc = factor_config(c, lim);
        json certs = json::array();
        if (!algebra<K>::is_zero(phi.f())) certs.push_back(report::to_json(dth_power_obstruction(phi.f(), d, fc)));
        const K zero = algebra<K>::zero(ctx);
        guard_orbit(phi, zero, c.N, lim);
        for (int n = 1; n <= c.N; ++n) certs.push_back(report::to_json(dfree_primitive_certificate(phi, n, zero, fc)));
        if constexpr (field_ops<K>::function_field) {
            if (phi.f().den().degree() == 0)
                for (int n = 1; n <= c.N; ++n)
                    certs.push_back(report::to_json(orbit_squarefree_check(d, phi.f().num(), n, lim.degree_cap)));
        }
        json j = header<K>(c, ctx);
        j["phi"] = report::poly(phi.poly());
        j["certificates"] = certs;
        if (d >= 3 && is_prime_u64(static_cast<std::uint64_t>(d))) {
            j["index_bound"] = report::to_json(index_bound(d));
            j["mason_iteration_bound"] = mason_iteration_bound(static_cast<std::uint64_t>(d));
        }
        return j;
    });
}

inline json cmd_wreath(const RunConfig& c, const Limits&) {
    require(c.d >= 2 && c.n >= 1, "wreath needs -d >= 2 and -n >= 1");
    json j = report::envelope(c.command);
    j["seed"] = c.seed;
    j["d"] = c.d;
    j["n"] = c.n;
    j["order"] = wreath_order(c.d, c.n).get_str();
    j["order_exponent"] = BigInt((ipow(BigInt(c.d), static_cast<unsigned long>(c.n)) - 1) / (c.d - 1)).get_str();
    if (c.d >= 3) {
        j["index_bound"] = report::to_json(index_bound(c.d));
        j["mason_iteration_bound"] = mason_iteration_bound(static_cast<std::uint64_t>(c.d));
        j["mason_literal_scan"] = mason_literal_scan(static_cast<std::uint64_t>(c.d));
    }
    if (c.enumerate) {
        WreathCheck w = check_wreath(c.d, c.n, c.seed);
        j["enumeration"] = report::to_json(w);
        j["axioms_pass"] = w.ok();
    }
    return j;
}

}  // namespace detail

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> v{"orbit", "zsig", "avg", "ks", "jinv", "galois-cert", "wreath"};
    return v;
}

/// The report document for one command.
inline json run_command(const RunConfig& c, const Limits& lim = limits_from_env()) {
    if (c.command == "orbit") return detail::cmd_orbit(c, lim);
    if (c.command == "zsig") return detail::cmd_zsig(c, lim);
    if (c.command == "avg") return detail::cmd_avg(c, lim);
    if (c.command == "ks") return detail::cmd_ks(c, lim);
    if (c.command == "jinv") return detail::cmd_jinv(c, lim);
    if (c.command == "galois-cert") return detail::cmd_galois_cert(c, lim);
    if (c.command == "wreath") return detail::cmd_wreath(c, lim);
    throw usage_error("unknown command '" + c.command + "'");
}

/// Flat rows for --csv.
inline json csv_rows(const json& doc) {
    json rows = json::array();
    const std::string cmd = doc.at("command").get<std::string>();
    auto join = [](const json& a) {
        std::string s;
        for (const auto& v : a) s += (s.empty() ? "" : ";") + (v.is_string() ? v.get<std::string>() : v.dump());
        return s;
    };
    if (cmd == "orbit") {
        for (const auto& e : doc.at("orbit").at("entries")) {
            std::string fac;
            if (!e.at("factorization").is_null())
                for (const auto& f : e.at("factorization").at("factors"))
                    fac += (fac.empty() ? "" : ";") + f.at(0).get<std::string>() + "^" + f.at(1).dump();
            rows.push_back(json{{"n", e.at("n")}, {"value", e.at("value")}, {"factors", fac}});
        }
    } else if (cmd == "zsig") {
        for (const auto& r : doc.at("report").at("records"))
            rows.push_back(json{{"n", r.at("n")}, {"value", r.at("value")}, {"zero", r.at("zero")},
                                {"primitive", join(r.at("primitive"))}});
    } else if (cmd == "avg") {
        for (const auto& r : doc.at("report").at("rows")) {
            json o = r;
            o["t_counts"] = join(r.at("t_counts"));
            rows.push_back(o);
        }
    } else if (cmd == "ks") {
        if (doc.contains("matrix")) {
            const auto& m = doc.at("matrix").at("entries");
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t jx = 0; jx < m[i].size(); ++jx) rows.push_back(json{{"i", i}, {"j", jx}, {"value", m[i][jx]}});
        } else {
            rows.push_back(json{{"i", doc.at("entry")[0]}, {"j", doc.at("entry")[1]}, {"value", doc.at("value")}});
        }
    } else if (cmd == "jinv") {
        rows.push_back(doc.at("result"));
    } else if (cmd == "galois-cert") {
        for (const auto& c : doc.at("certificates")) {
            const auto& w = c.at("witness");
            rows.push_back(json{{"kind", c.at("kind")},
                                {"n", c.at("n")},
                                {"verdict", c.at("verdict")},
                                {"place", w.is_null() ? json("") : w.at("place")},
                                {"exponent", w.is_null() ? json("") : w.at("exponent")}});
        }
    } else if (cmd == "wreath") {
        json o{{"d", doc.at("d")}, {"n", doc.at("n")}, {"order", doc.at("order")}};
        if (doc.contains("axioms_pass")) o["axioms_pass"] = doc.at("axioms_pass");
        rows.push_back(o);
    }
    return rows;
}

/// Exit status for an exception escaping run_command.
inline int exit_code_for(std::exception_ptr e) {
    try {
        std::rethrow_exception(e);
    } catch (const usage_error&) {
        return usage;
    } catch (const indeterminate_error&) {
        return indeterminate;
    } catch (const incomplete_factorization&) {
        return indeterminate;
    } catch (const size_error&) {
        return resource;
    } catch (const error&) {
        return domain;
    } catch (const std::bad_alloc&) {
        return resource;
    } catch (...) {
        return domain;
    }
}

}  // namespace orbitlab::cli
