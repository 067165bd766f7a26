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

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "orbitlab/orbitlab.hpp"

namespace {

using orbitlab::cli::RunConfig;

struct Output {
    bool csv = false;
    std::string path;
};

void add_field_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--field", c.field, "Q, Fp_t or Q_t")->capture_default_str();
    sub->add_option("-p,--prime", c.p, "characteristic for Fp_t");
    sub->add_option("--seed", c.seed, "seed for randomized factoring")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbitlab: exact experiments in arithmetic dynamics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags");

    RunConfig c;
    Output out;
    int ell = 0;
    CLI::Option* places_opt = nullptr;

    auto common_out = [&](CLI::App* sub) {
        auto fmt = sub->add_option_group("format");
        fmt->add_flag("--json", "JSON report (default)");
        fmt->add_flag("--csv", out.csv, "CSV table instead of JSON");
        fmt->require_option(0, 1);
        sub->add_option("-o,--output", out.path, "write to a file instead of stdout");
    };

    auto* orbit = app.add_subcommand("orbit", "orbit table, canonical height, classification");
    add_field_options(orbit, c);
    orbit->add_option("--phi", c.phi, "map in x, e.g. \"x^2 + t\"")->required();
    orbit->add_option("--base", c.base, "basepoint")->capture_default_str();
    orbit->add_option("-N,--iterations", c.N, "number of iterates")->capture_default_str();
    common_out(orbit);

    auto* zsig = app.add_subcommand("zsig", "Zsigmondy set of one orbit");
    add_field_options(zsig, c);
    zsig->add_option("--phi", c.phi)->required();
    zsig->add_option("--base", c.base)->capture_default_str();
    zsig->add_option("-N,--iterations", c.N)->capture_default_str();
    zsig->add_option("-l,--ell", ell, "also compute the ell-free variant");
    auto* zs = zsig->add_option("-S,--places", c.S, "places excluded from primitive divisors")->delimiter(',');
    common_out(zsig);

    auto* avg = app.add_subcommand("avg", "exact averages of |Z(phi, b) cap [1,N]| over a height box");
    add_field_options(avg, c);
    avg->add_option("--phi", c.phi)->required();
    avg->add_option("-N,--iterations", c.N)->capture_default_str();
    avg->add_option("-B,--bound", c.B, "height bound")->capture_default_str();
    places_opt = avg->add_option("-S,--places", c.S, "S, comma separated; inf for the infinite place")->delimiter(',');
    avg->add_option("--threads", c.threads, "0 for all cores")->capture_default_str();
    avg->add_flag("--factor-route", c.factor_route, "count through full factorizations");
    avg->add_flag("--basepoints", c.basepoints, "include per-basepoint rows");
    common_out(avg);

    auto* ks = app.add_subcommand("ks", "Kodaira-Spencer matrix of y^2 = phi^m(x)");
    add_field_options(ks, c);
    ks->add_option("--phi", c.phi, "x^d + f")->required();
    ks->add_option("--level", c.level, "iterate m")->capture_default_str();
    ks->add_option("--entry", c.entry, "single entry i,j (d may appear, e.g. d-2,0)");
    ks->add_flag("--superelliptic", c.superelliptic, "also the (d-2,d-1),(0,1) entry on y^d = phi^2(x)");
    common_out(ks);

    auto* jinv = app.add_subcommand("jinv", "j-invariant of y^2 = (x - c)((x - gamma)^2 + c)");
    add_field_options(jinv, c);
    jinv->add_option("--gamma", c.gamma)->required();
    jinv->add_option("--c", c.c)->required();
    common_out(jinv);

    auto* gal = app.add_subcommand("galois-cert", "certificates for the iterated Galois tower of x^d + f");
    add_field_options(gal, c);
    gal->add_option("--phi", c.phi)->required();
    gal->add_option("-N,--iterations", c.N)->capture_default_str();
    common_out(gal);

    auto* wr = app.add_subcommand("wreath", "order, index and Mason bounds; brute-force group checks");
    wr->add_option("-d,--degree", c.d)->capture_default_str();
    wr->add_option("-n,--depth", c.n)->capture_default_str();
    wr->add_flag("--enumerate", c.enumerate, "enumerate the group and check the axioms");
    wr->add_option("--seed", c.seed)->capture_default_str();
    common_out(wr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return orbitlab::cli::usage;
    }

    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    if (ell) c.ell = ell;
    c.S_given = (places_opt && places_opt->count() > 0) || zs->count() > 0;

    int code = orbitlab::cli::ok;
    try {
        auto doc = orbitlab::cli::run_command(c);
        std::string text = out.csv ? orbitlab::report::csv(orbitlab::cli::csv_rows(doc)) : doc.dump(2) + "\n";
        if (out.path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out.path);
            if (!f) throw orbitlab::cli::usage_error("cannot write " + out.path);
            f << text;
        }
    } catch (...) {
        code = orbitlab::cli::exit_code_for(std::current_exception());
        try {
            throw;
        } catch (const std::exception& e) {
            std::cerr << "orbitlab: " << e.what() << "\n";
        } catch (...) {
            std::cerr << "orbitlab: unknown error\n";
        }
    }
    return code;
}
