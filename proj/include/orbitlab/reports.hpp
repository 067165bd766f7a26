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

// JSON views of the result types. Exact values are canonical strings that
// parse back through parse_expr; floats appear only as *_float views.

#include <chrono>
#include <ctime>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbitlab/expr.hpp"
#include "orbitlab/galois_wreath.hpp"
#include "orbitlab/ks_geometry.hpp"
#include "orbitlab/zsigmondy.hpp"

namespace orbitlab::report {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// Document skeleton; "generated_at" is the only field that varies between
/// identical runs.
inline json envelope(const std::string& command) {
    json j;
    j["schema_version"] = schema_version;
    j["command"] = command;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["generated_at"] = buf;
    return j;
}

// --- scalars ----------------------------------------------------------------------------

template <class K>
std::string str(const K& x) {
    return field_ops<K>::str(x);
}

template <class K>
K value_from(const json& j, typename algebra<K>::context c) {
    return to_value<K>(parse_expr(j.get<std::string>()), c);
}

inline std::string str(const BigRat& x) { return x.str(); }
inline BigRat rat_from(const json& j) { return to_value<BigRat>(parse_expr(j.get<std::string>()), NoContext{}); }

inline std::string str(const QPlace& v) { return v.str(); }
template <Field F>
std::string str(const FnPlace<F>& v) {
    return v.str();
}

template <class K>
typename field_ops<K>::place place_from(const json& j, typename algebra<K>::context c) {
    const std::string s = j.get<std::string>();
    if constexpr (field_ops<K>::function_field) {
        using Pl = typename field_ops<K>::place;
        if (s == "inf") return Pl::infinity();
        K v = to_value<K>(parse_expr(s), c);
        return Pl::finite(v.num());
    } else {
        return QPlace{BigInt(s, 10)};
    }
}

template <class P>
json places(const std::vector<P>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(str(p));
    return a;
}

template <class K>
std::vector<typename field_ops<K>::place> places_from(const json& j, typename algebra<K>::context c) {
    std::vector<typename field_ops<K>::place> out;
    for (const auto& e : j) out.push_back(place_from<K>(e, c));
    return out;
}

template <class K>
json poly(const Poly<K>& f) {
    return to_string(f, "x");
}

template <class K>
Poly<K> poly_from(const json& j, typename algebra<K>::context c) {
    return to_poly<K>(parse_expr(j.get<std::string>()), c);
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

inline json opt_rat(const std::optional<BigRat>& v) { return v ? json(v->str()) : json(nullptr); }
inline std::optional<BigRat> opt_rat_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return rat_from(j);
}

// --- factorizations and orbits -----------------------------------------------------

template <class K>
json factored(const typename field_ops<K>::factored& f) {
    json a = json::array();
    for (const auto& [v, e] : f.factors) a.push_back(json::array({str(v), e}));
    return json{{"unit", str(f.unit)}, {"factors", a}};
}

template <class K>
typename field_ops<K>::factored factored_from(const json& j, typename algebra<K>::context c) {
    typename field_ops<K>::factored f{value_from<K>(j.at("unit"), c), {}};
    for (const auto& e : j.at("factors")) f.factors.emplace_back(place_from<K>(e.at(0), c), e.at(1).get<int>());
    return f;
}

template <class K>
json to_json(const OrbitTable<K>& t) {
    json entries = json::array();
    for (const auto& e : t.entries) {
        json r{{"n", e.n}, {"value", str(e.value)}};
        r["factorization"] = e.factorization ? factored<K>(*e.factorization) : json(nullptr);
        r["failure"] = e.failure;
        entries.push_back(r);
    }
    return json{{"basepoint", str(t.basepoint)}, {"entries", entries}};
}

template <class K>
OrbitTable<K> orbit_from_json(const json& j, typename algebra<K>::context c) {
    OrbitTable<K> t{value_from<K>(j.at("basepoint"), c), {}};
    for (const auto& r : j.at("entries")) {
        OrbitEntry<K> e;
        e.n = r.at("n").get<int>();
        e.value = value_from<K>(r.at("value"), c);
        if (!r.at("factorization").is_null()) e.factorization = factored_from<K>(r.at("factorization"), c);
        e.failure = r.at("failure").get<std::string>();
        t.entries.push_back(std::move(e));
    }
    return t;
}

// --- Zsigmondy ---------------------------------------------------------------------------

template <class K>
json to_json(const ZsigReport<K>& z) {
    json recs = json::array();
    for (const auto& r : z.records) {
        json o{{"n", r.n}, {"value", str(r.value)}, {"zero", r.zero}};
        o["factorization"] = r.factorization ? factored<K>(*r.factorization) : json(nullptr);
        o["primitive"] = places(r.primitive);
        o["ell_primitive"] = places(r.ell_primitive);
        recs.push_back(o);
    }
    json j{{"phi", poly(z.phi)}, {"basepoint", str(z.basepoint)}, {"N", z.N}, {"ell", opt(z.ell)}};
    j["records"] = recs;
    j["zsig_set"] = z.zsig_set;
    j["ell_zsig_set"] = opt(z.ell_zsig_set);
    return j;
}

template <class K>
ZsigReport<K> zsig_from_json(const json& j, typename algebra<K>::context c) {
    ZsigReport<K> z;
    z.phi = poly_from<K>(j.at("phi"), c);
    z.basepoint = value_from<K>(j.at("basepoint"), c);
    z.N = j.at("N").get<int>();
    if (!j.at("ell").is_null()) z.ell = j.at("ell").get<int>();
    for (const auto& o : j.at("records")) {
        ZsigRecord<K> r;
        r.n = o.at("n").get<int>();
        r.value = value_from<K>(o.at("value"), c);
        r.zero = o.at("zero").get<bool>();
        if (!o.at("factorization").is_null()) r.factorization = factored_from<K>(o.at("factorization"), c);
        r.primitive = places_from<K>(o.at("primitive"), c);
        r.ell_primitive = places_from<K>(o.at("ell_primitive"), c);
        z.records.push_back(std::move(r));
    }
    z.zsig_set = j.at("zsig_set").get<std::vector<int>>();
    if (!j.at("ell_zsig_set").is_null()) z.ell_zsig_set = j.at("ell_zsig_set").get<std::vector<int>>();
    return z;
}

// --- densities ------------------------------------------------------------------------------

inline json to_json(const DensityRow& r) {
    json o{{"B", r.B},           {"count", r.count},   {"wandering", r.wandering}, {"preperiodic", r.preperiodic},
           {"undetermined", r.undetermined}, {"flagged", r.flagged}, {"sum", r.sum},
           {"sum_pessimistic", r.sum_pessimistic}};
    o["ratio"] = opt_rat(r.ratio);
    o["ratio_float"] = r.ratio ? json(r.ratio->to_double()) : json(nullptr);
    o["ratio_pessimistic"] = opt_rat(r.ratio_pessimistic);
    o["t_counts"] = r.t_counts;
    return o;
}

inline DensityRow density_row_from_json(const json& o) {
    DensityRow r;
    r.B = o.at("B").get<long>();
    r.count = o.at("count").get<long>();
    r.wandering = o.at("wandering").get<long>();
    r.preperiodic = o.at("preperiodic").get<long>();
    r.undetermined = o.at("undetermined").get<long>();
    r.flagged = o.at("flagged").get<long>();
    r.sum = o.at("sum").get<long>();
    r.sum_pessimistic = o.at("sum_pessimistic").get<long>();
    r.ratio = opt_rat_from(o.at("ratio"));
    r.ratio_pessimistic = opt_rat_from(o.at("ratio_pessimistic"));
    r.t_counts = o.at("t_counts").get<std::vector<long>>();
    return r;
}

template <class K>
json to_json(const DensityReport<K>& d, bool with_basepoints = true) {
    json j{{"phi", poly(d.phi)}, {"S", places(d.S)}, {"P", places(d.P)}, {"N", d.N}, {"B_max", d.B_max}};
    json rows = json::array();
    for (const auto& r : d.rows) rows.push_back(to_json(r));
    j["rows"] = rows;
    json bs = json::array();
    if (with_basepoints)
        for (const auto& b : d.basepoints)
            bs.push_back(json{{"b", str(b.b)},
                              {"height", b.height},
                              {"kind", to_string(b.kind)},
                              {"zset", b.zset},
                              {"flagged", b.flagged},
                              {"flag_reason", b.flag_reason},
                              {"subset_violations", b.subset_violations}});
    j["basepoints"] = bs;
    j["subset_checked"] = d.subset_checked;
    j["subset_violations"] = d.subset_violations;
    return j;
}

inline OrbitKind orbit_kind_from(const std::string& s) {
    if (s == "preperiodic") return OrbitKind::preperiodic;
    if (s == "wandering") return OrbitKind::wandering;
    return OrbitKind::undetermined;
}

template <class K>
DensityReport<K> density_from_json(const json& j, typename algebra<K>::context c) {
    DensityReport<K> d;
    d.phi = poly_from<K>(j.at("phi"), c);
    d.S = places_from<K>(j.at("S"), c);
    d.P = places_from<K>(j.at("P"), c);
    d.N = j.at("N").get<int>();
    d.B_max = j.at("B_max").get<long>();
    for (const auto& r : j.at("rows")) d.rows.push_back(density_row_from_json(r));
    for (const auto& o : j.at("basepoints")) {
        BasepointResult<K> b;
        b.b = value_from<K>(o.at("b"), c);
        b.height = o.at("height").get<long>();
        b.kind = orbit_kind_from(o.at("kind").get<std::string>());
        b.zset = o.at("zset").get<std::vector<int>>();
        b.flagged = o.at("flagged").get<bool>();
        b.flag_reason = o.at("flag_reason").get<std::string>();
        b.subset_violations = o.at("subset_violations").get<int>();
        d.basepoints.push_back(std::move(b));
    }
    d.subset_checked = j.at("subset_checked").get<long>();
    d.subset_violations = j.at("subset_violations").get<long>();
    return d;
}

// --- heights ------------------------------------------------------------------------------------

inline json to_json(const HeightEstimate& e) {
    return json{{"iterations", e.iterations},
                {"value", opt_rat(e.exact_value)},
                {"radius", opt_rat(e.exact_radius)},
                {"value_float", e.value},
                {"radius_float", e.radius},
                {"constant_float", e.constant}};
}

inline HeightEstimate height_from_json(const json& j) {
    HeightEstimate e;
    e.iterations = j.at("iterations").get<int>();
    e.exact_value = opt_rat_from(j.at("value"));
    e.exact_radius = opt_rat_from(j.at("radius"));
    e.value = j.at("value_float").get<double>();
    e.radius = j.at("radius_float").get<double>();
    e.constant = j.at("constant_float").get<double>();
    return e;
}

// --- Kodaira-Spencer ------------------------------------------------------------------------------

inline json to_json(const KSMatrix& m) {
    json rows = json::array();
    for (const auto& r : m.entries) {
        json row = json::array();
        for (const auto& e : r) row.push_back(str(e));
        rows.push_back(row);
    }
    return json{{"d", m.d}, {"m", m.m}, {"p", m.p}, {"f", to_string(m.f)}, {"entries", rows}};
}

inline KSMatrix ks_from_json(const json& j) {
    KSMatrix m;
    m.d = j.at("d").get<int>();
    m.m = j.at("m").get<int>();
    m.p = j.at("p").get<std::uint32_t>();
    m.f = to_value<FpRatFunc>(parse_expr(j.at("f").get<std::string>()), m.p).num();
    for (const auto& r : j.at("entries")) {
        std::vector<FpRatFunc> row;
        for (const auto& e : r) row.push_back(value_from<FpRatFunc>(e, m.p));
        m.entries.push_back(std::move(row));
    }
    return m;
}

// --- j-invariants ----------------------------------------------------------------------------------

template <class K>
json to_json(const JInvariant<K>& j) {
    return json{{"j", str(j.j)}, {"c4", str(j.c4)}, {"delta", str(j.delta)}, {"constant", j.constant}};
}

template <class K>
JInvariant<K> jinv_from_json(const json& o, typename algebra<K>::context c) {
    return JInvariant<K>{value_from<K>(o.at("j"), c), value_from<K>(o.at("c4"), c), value_from<K>(o.at("delta"), c),
                         o.at("constant").get<bool>()};
}

// --- certificates and wreath data ----------------------------------------------------------------

inline CertKind cert_kind_from(const std::string& s) {
    for (CertKind k : {CertKind::irreducibility, CertKind::dfree_primitive, CertKind::squarefree_orbit,
                       CertKind::index_bound})
        if (s == to_string(k)) return k;
    throw domain_error("unknown certificate kind " + s);
}

inline json to_json(const Certificate& c) {
    json vals = json::object();
    for (const auto& [k, v] : c.values) vals[k] = v;
    json w = nullptr;
    if (c.witness_place || c.witness_exponent) w = json{{"place", opt(c.witness_place)}, {"exponent", opt(c.witness_exponent)}};
    return json{{"kind", to_string(c.kind)},
                {"verdict", c.certified ? "certified" : "no certificate"},
                {"n", c.n},
                {"subject", c.subject},
                {"witness", w},
                {"values", vals}};
}

inline Certificate certificate_from_json(const json& j) {
    Certificate c;
    c.kind = cert_kind_from(j.at("kind").get<std::string>());
    c.certified = j.at("verdict").get<std::string>() == "certified";
    c.n = j.at("n").get<int>();
    c.subject = j.at("subject").get<std::string>();
    if (!j.at("witness").is_null()) {
        const auto& w = j.at("witness");
        if (!w.at("place").is_null()) c.witness_place = w.at("place").get<std::string>();
        if (!w.at("exponent").is_null()) c.witness_exponent = w.at("exponent").get<long>();
    }
    for (const auto& [k, v] : j.at("values").items()) c.values.emplace_back(k, v.get<std::string>());
    return c;
}

inline json to_json(const WreathCheck& c) {
    return json{{"d", c.d},
                {"n", c.n},
                {"order", c.order.get_str()},
                {"enumerated", c.enumerated},
                {"distinct_permutations", c.distinct_permutations},
                {"identity_ok", c.identity_ok},
                {"inverse_ok", c.inverse_ok},
                {"associativity_ok", c.associativity_ok},
                {"pair_law_ok", c.pair_law_ok},
                {"truncation_hom_ok", c.truncation_hom_ok},
                {"kernel_size", c.kernel_size},
                {"expected_kernel", c.expected_kernel.get_str()},
                {"image_size", c.image_size},
                {"axioms_pass", c.ok()}};
}

inline WreathCheck wreath_check_from_json(const json& j) {
    WreathCheck c;
    c.d = j.at("d").get<int>();
    c.n = j.at("n").get<int>();
    c.order = BigInt(j.at("order").get<std::string>(), 10);
    c.enumerated = j.at("enumerated").get<std::uint64_t>();
    c.distinct_permutations = j.at("distinct_permutations").get<std::uint64_t>();
    c.identity_ok = j.at("identity_ok").get<bool>();
    c.inverse_ok = j.at("inverse_ok").get<bool>();
    c.associativity_ok = j.at("associativity_ok").get<bool>();
    c.pair_law_ok = j.at("pair_law_ok").get<bool>();
    c.truncation_hom_ok = j.at("truncation_hom_ok").get<bool>();
    c.kernel_size = j.at("kernel_size").get<std::uint64_t>();
    c.expected_kernel = BigInt(j.at("expected_kernel").get<std::string>(), 10);
    c.image_size = j.at("image_size").get<std::uint64_t>();
    return c;
}

inline json to_json(const IndexBound& b) {
    return json{{"d", b.d}, {"exponent", b.exponent.get_str()}, {"value", b.value ? json(b.value->get_str()) : json(nullptr)}};
}

inline IndexBound index_bound_from_json(const json& j) {
    IndexBound b;
    b.d = j.at("d").get<int>();
    b.exponent = BigInt(j.at("exponent").get<std::string>(), 10);
    if (!j.at("value").is_null()) b.value = BigInt(j.at("value").get<std::string>(), 10);
    return b;
}

// --- CSV ---------------------------------------------------------------------------------------------

inline std::string csv_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

/// Rows of flat objects as CSV, columns in the first row's key order.
inline std::string csv(const json& rows) {
    std::ostringstream out;
    if (!rows.is_array() || rows.empty()) return "";
    bool first = true;
    for (const auto& [k, v] : rows.front().items()) {
        out << (first ? "" : ",") << csv_cell(k);
        first = false;
    }
    out << '\n';
    for (const auto& r : rows) {
        first = true;
        for (const auto& [k, v] : rows.front().items()) {
            out << (first ? "" : ",") << (r.contains(k) ? csv_cell(r.at(k)) : "");
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace orbitlab::report
