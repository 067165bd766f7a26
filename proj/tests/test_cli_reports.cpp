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

#include <random>

#include "test_util.hpp"

using namespace orbitlab;
using namespace testutil;
using report::json;

namespace {

json reparse(const json& j) { return json::parse(j.dump()); }

int code_of(const cli::RunConfig& c, const Limits& lim = {}) {
    try {
        cli::run_command(c, lim);
    } catch (...) {
        return cli::exit_code_for(std::current_exception());
    }
    return 0;
}

ExprPtr random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    switch (pick(rng)) {
        case 0: return Expr::integer(BigInt(static_cast<unsigned long>(rng() % 1000)));
        case 1: return Expr::sym(rng() % 2 ? 'x' : 't');
        case 2: return Expr::binary(Expr::Kind::add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 3: return Expr::binary(Expr::Kind::sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 4: return Expr::binary(Expr::Kind::mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 5: return Expr::binary(Expr::Kind::div, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        case 6: return Expr::power(random_expr(rng, depth - 1), static_cast<std::uint32_t>(rng() % 5));
        default: return Expr::negate(random_expr(rng, depth - 1));
    }
}

cli::RunConfig config(const std::string& cmd) {
    cli::RunConfig c;
    c.command = cmd;
    return c;
}

}  // namespace

TEST(Parser, Examples) {
    const std::uint32_t p = 5;
    auto phi = to_poly<FpRatFunc>(parse_expr("x^2 + t"), p);
    EXPECT_EQ(phi, unicrit_fp(p, 2, {0, 1}).poly());
    EXPECT_EQ(phi.degree(), 2);

    auto g = to_poly<FpRatFunc>(parse_expr("(x - 1)^2 + t^3"), p);
    Poly<FpRatFunc> want(p, {FpRatFunc(fpoly(p, {1, 0, 0, 1})), FpRatFunc(fpoly(p, {-2})), FpRatFunc(fpoly(p, {1}))});
    EXPECT_EQ(g, want);
    EXPECT_EQ(to_poly<BigRat>(parse_expr("(x - 1)^2 + 3"), NoContext{}), qp({4, -2, 1}));

    try {
        parse_expr("x^2 + + t");
        FAIL() << "expected a syntax error";
    } catch (const parse_error& e) {
        EXPECT_EQ(e.offset(), 6u);
    }
    EXPECT_THROW(parse_expr("x + y"), parse_error);
    EXPECT_THROW(parse_expr("x^99999999999"), parse_error);
    EXPECT_THROW(parse_expr("x^2^3"), parse_error);
    EXPECT_THROW(parse_expr("(x + 1"), parse_error);
    EXPECT_THROW(parse_expr(""), parse_error);
    EXPECT_THROW(to_poly<BigRat>(parse_expr("x + t"), NoContext{}), domain_error);
    EXPECT_THROW(to_poly<BigRat>(parse_expr("1/x"), NoContext{}), domain_error);
}

TEST(Parser, PrecedenceAndAssociativity) {
    auto v = [](const char* s) { return to_value<BigRat>(parse_expr(s), NoContext{}); };
    EXPECT_EQ(v("-2^2"), BigRat(-4L));
    EXPECT_EQ(v("1 - 2 - 3"), BigRat(-4L));
    EXPECT_EQ(v("2*3^2"), BigRat(18L));
    EXPECT_EQ(v("2 + 3*4"), BigRat(14L));
    EXPECT_EQ(v("(2 + 3)*4"), BigRat(20L));
    EXPECT_EQ(v("12/2/3"), BigRat(2L));
    EXPECT_EQ(v("2^0"), BigRat(1L));
    EXPECT_EQ(v("--3"), BigRat(3L));
    EXPECT_EQ(v("1/2 + 1/3"), BigRat(BigInt(5), BigInt(6)));
    auto t = t_of(7);
    EXPECT_EQ(to_value<FpRatFunc>(parse_expr("1/(t + 1)"), 7u), FpRatFunc(fpoly(7, {1})) / (t + FpRatFunc(fpoly(7, {1}))));
}

TEST(Parser, PrintParseRoundTrip) {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 2000; ++k) {
        auto e = random_expr(rng, 4);
        std::string s = print_expr(e);
        auto back = parse_expr(s);
        EXPECT_TRUE(equal(e, back)) << s << " -> " << print_expr(back);
        EXPECT_EQ(print_expr(back), s);
    }
}

TEST(RunCommand, Examples) {
    auto z = config("zsig");
    z.field = "Fp_t";
    z.p = 3;
    z.phi = "x^2 + t";
    z.N = 8;
    auto zd = cli::run_command(z);
    EXPECT_EQ(zd.at("zsig_set"), json::array());
    EXPECT_EQ(zd.at("schema_version"), 1);

    auto k = config("ks");
    k.field = "Fp_t";
    k.p = 5;
    k.phi = "x^3 + t";
    k.entry = "d-2,0";
    auto kd = cli::run_command(k);
    EXPECT_EQ(kd.at("value"), "4/(t^3 + t)");
    EXPECT_EQ(kd.at("closed_form_match"), true);

    auto w = config("wreath");
    w.d = 2;
    w.n = 3;
    w.enumerate = true;
    auto wd = cli::run_command(w);
    EXPECT_EQ(wd.at("order"), "128");
    EXPECT_EQ(wd.at("axioms_pass"), true);

    auto o = config("orbit");
    o.phi = "x^2 + 1";
    o.N = 4;
    auto od = cli::run_command(o);
    EXPECT_EQ(od.at("orbit").at("entries").at(3).at("value"), "26");

    auto j = config("jinv");
    j.field = "Q_t";
    j.gamma = "0";
    j.c = "t";
    EXPECT_EQ(cli::run_command(j).at("result").at("constant"), false);

    auto a = config("avg");
    a.field = "Fp_t";
    a.p = 3;
    a.phi = "x^2 + t";
    a.B = 2;
    a.N = 3;
    EXPECT_EQ(cli::run_command(a).at("report").at("rows").at(2).at("count"), 27);

    auto g = config("galois-cert");
    g.field = "Fp_t";
    g.p = 3;
    g.phi = "x^2 + t";
    g.N = 3;
    auto gd = cli::run_command(g);
    bool seen = false;
    for (const auto& c : gd.at("certificates"))
        if (c.at("kind") == "dfree-primitive" && c.at("n") == 3) {
            seen = true;
            EXPECT_EQ(c.at("witness").at("place"), "t^3 + 2*t^2 + t + 1");
        }
    EXPECT_TRUE(seen);
}

TEST(RunCommand, CsvRows) {
    auto o = config("orbit");
    o.phi = "x^2 + 1";
    o.N = 4;
    auto rows = cli::csv_rows(cli::run_command(o));
    ASSERT_EQ(rows.size(), 4u);
    auto text = report::csv(rows);
    EXPECT_NE(text.find("n,value,factors"), std::string::npos);
    EXPECT_NE(text.find("26,2^1;13^1"), std::string::npos);
}

TEST(RunCommand, Determinism) {
    std::vector<cli::RunConfig> cfgs;
    auto a = config("avg");
    a.field = "Fp_t";
    a.p = 3;
    a.phi = "x^2 + t";
    a.B = 2;
    a.N = 4;
    a.basepoints = true;
    cfgs.push_back(a);
    auto w = config("wreath");
    w.d = 3;
    w.n = 2;
    w.enumerate = true;
    w.seed = 17;
    cfgs.push_back(w);
    auto g = config("galois-cert");
    g.phi = "x^2 + t";
    g.field = "Q_t";
    g.N = 3;
    cfgs.push_back(g);
    for (auto c : cfgs) {
        c.threads = 1;
        json x = cli::run_command(c);
        c.threads = 4;
        json y = cli::run_command(c);
        x.erase("generated_at");
        y.erase("generated_at");
        EXPECT_EQ(x.dump(), y.dump()) << c.command;
    }
}

TEST(RunCommand, ExitCodes) {
    EXPECT_EQ(code_of(config("bogus")), cli::usage);
    auto bad_p = config("zsig");
    bad_p.field = "Fp_t";
    bad_p.p = 4;
    bad_p.phi = "x^2 + t";
    EXPECT_EQ(code_of(bad_p), cli::domain);
    auto syntax = config("orbit");
    syntax.phi = "x^2 + + t";
    EXPECT_EQ(code_of(syntax), cli::domain);
    auto big = config("zsig");
    big.phi = "x^2 + 1";
    big.N = 40;
    EXPECT_EQ(code_of(big), cli::resource);
    auto hard = config("zsig");
    hard.phi = "x^2 + 1";
    hard.N = 8;
    Limits lim;
    lim.factor.bound = BigInt(1000);
    EXPECT_EQ(code_of(hard, lim), cli::indeterminate);
    EXPECT_EQ(code_of(hard), cli::ok);
}

TEST(Reports, RoundTripOrbitAndZsig) {
    auto phi = unicrit_fp(3, 2, {0, 1});
    auto orbit = build_orbit(phi, FpRatFunc(3u), 5);
    EXPECT_EQ(report::orbit_from_json<FpRatFunc>(reparse(report::to_json(orbit)), 3u), orbit);
    auto q = build_orbit(poly_q({1, 0, 1}), BigRat(BigInt(1), BigInt(3)), 4);
    EXPECT_EQ(report::orbit_from_json<BigRat>(reparse(report::to_json(q)), NoContext{}), q);

    auto z = zsigmondy_report(phi, t_of(3), 4, 2);
    EXPECT_EQ(report::zsig_from_json<FpRatFunc>(reparse(report::to_json(z)), 3u), z);
    auto zq = zsigmondy_report(poly_q({1, 0, 1}), BigRat(0L), 6, 3);
    EXPECT_EQ(report::zsig_from_json<BigRat>(reparse(report::to_json(zq)), NoContext{}), zq);
}

TEST(Reports, RoundTripDensityAndHeights) {
    auto phi = unicrit_fp(3, 2, {0, 1});
    auto d = avg_zsigmondy(phi, {FnPlace<Fp>::infinity()}, 1, 3);
    EXPECT_EQ(report::density_from_json<FpRatFunc>(reparse(report::to_json(d)), 3u), d);
    auto dq = avg_zsigmondy(poly_q({1, 0, 1}), {QPlace{BigInt(2)}}, 2L, 3);
    EXPECT_EQ(report::density_from_json<BigRat>(reparse(report::to_json(dq)), NoContext{}), dq);

    auto h = canonical_height(phi, FpRatFunc(3u), 6);
    EXPECT_EQ(report::height_from_json(reparse(report::to_json(h))), h);
    auto hq = canonical_height(poly_q({1, 0, 1}), BigRat(3L), 5);
    EXPECT_EQ(report::height_from_json(reparse(report::to_json(hq))), hq);
}

TEST(Reports, RoundTripGeometryAndGroups) {
    auto m = ks_matrix_hyperelliptic(3, fpoly(7, {1, 0, 1}), 2);
    EXPECT_EQ(report::ks_from_json(reparse(report::to_json(m))), m);
    auto j = j_invariant_quadratic(t_of(5), t_of(5) * t_of(5));
    EXPECT_EQ(report::jinv_from_json<FpRatFunc>(reparse(report::to_json(j)), 5u), j);
    auto jq = j_invariant_quadratic(QRatFunc(NoContext{}), QRatFunc::var(NoContext{}));
    EXPECT_EQ(report::jinv_from_json<QRatFunc>(reparse(report::to_json(jq)), NoContext{}), jq);

    auto c1 = dfree_primitive_certificate(unicrit_fp(3, 2, {0, 1}), 3);
    EXPECT_EQ(report::certificate_from_json(reparse(report::to_json(c1))), c1);
    auto c2 = orbit_squarefree_check(2, fpoly(2, {0, 1}), 4);
    EXPECT_EQ(report::certificate_from_json(reparse(report::to_json(c2))), c2);
    auto c3 = dth_power_obstruction(BigRat(36L), 2);
    EXPECT_EQ(report::certificate_from_json(reparse(report::to_json(c3))), c3);

    auto w = check_wreath(2, 3);
    EXPECT_EQ(report::wreath_check_from_json(reparse(report::to_json(w))), w);
    for (auto b : {index_bound(3, true), index_bound(5)})
        EXPECT_EQ(report::index_bound_from_json(reparse(report::to_json(b))), b);
}
