// tfpsi: runs one experiment suite and writes report.json plus CSV artifacts.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "tfpsi/suites.hpp"

using nlohmann::json;

namespace {

struct Flags {
    std::string config_file;
    std::optional<long> n, alpha, beta;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out, window, window_file;
    std::optional<std::string> symbol, symbol_file;
    std::optional<double> amplitude;
    std::optional<long> degree, bandwidth;
    std::optional<std::uint64_t> symbol_seed;
    std::optional<std::string> weight, q;
    std::optional<double> s, delta, b;
    std::vector<std::string> options, tolerances;
    bool quiet = false;
};

// key=value, the value parsed as JSON when possible and kept as a string otherwise.
std::pair<std::string, json> split_assignment(const std::string& text, const std::string& flag) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw tfpsi::Error(tfpsi::ErrorKind::config, flag + ": expected key=value, got '" + text + "'");
    }
    const std::string key = text.substr(0, eq);
    const std::string raw = text.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    return {key, value};
}

json build_config(const Flags& f) {
    json j = json::object();
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw tfpsi::Error(tfpsi::ErrorKind::config, "--config: cannot read " + f.config_file);
        j = json::parse(in, nullptr, false);
        if (j.is_discarded()) throw tfpsi::Error(tfpsi::ErrorKind::parse, f.config_file + ": not valid JSON");
    }
    auto set = [&](const char* key, const auto& v) {
        if (v) j[key] = *v;
    };
    set("n", f.n);
    set("alpha", f.alpha);
    set("beta", f.beta);
    set("seed", f.seed);
    set("outDir", f.out);
    set("windowKind", f.window);
    set("windowFile", f.window_file);

    auto sub = [&](const char* section, const char* key, const auto& v) {
        if (v) j[section][key] = *v;
    };
    sub("symbol", "preset", f.symbol);
    sub("symbol", "path", f.symbol_file);
    sub("symbol", "amplitude", f.amplitude);
    sub("symbol", "degree", f.degree);
    sub("symbol", "bandwidth", f.bandwidth);
    sub("symbol", "seed", f.symbol_seed);
    if (f.symbol_file && !f.symbol) j["symbol"]["preset"] = "fromFile";
    if (f.window_file && !f.window) j["windowKind"] = "customFile";

    sub("algebra", "weightKind", f.weight);
    sub("algebra", "s", f.s);
    sub("algebra", "delta", f.delta);
    sub("algebra", "b", f.b);
    if (f.q) j["algebra"]["q"] = (*f.q == "1") ? json(1) : json(*f.q);

    for (const auto& o : f.options) {
        auto [k, v] = split_assignment(o, "--opt");
        j["suite"][k] = v;
    }
    for (const auto& t : f.tolerances) {
        auto [k, v] = split_assignment(t, "--tol");
        j["tolerances"][k] = v;
    }
    if (!j.contains("outDir")) j["outDir"] = "tfpsi-out";
    return j;
}

int exit_code(tfpsi::ErrorKind k) { return k == tfpsi::ErrorKind::numerical ? 2 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite time-frequency laboratory for Weyl pseudodifferential operators"};
    app.require_subcommand(1);
    Flags f;

    app.add_option("--config", f.config_file, "JSON experiment config");
    app.add_option("--n", f.n, "modulus N (odd)");
    app.add_option("--alpha", f.alpha, "time lattice step");
    app.add_option("--beta", f.beta, "frequency lattice step");
    app.add_option("--seed", f.seed, "experiment seed");
    app.add_option("--out", f.out, "output directory (default tfpsi-out)");
    app.add_option("--window", f.window, "periodizedGaussian, delta or customFile");
    app.add_option("--window-file", f.window_file, "window signal (.csv or .bin)");
    app.add_option("--symbol", f.symbol, "constant, bump, trigPoly, randomBandlimited, rough or fromFile");
    app.add_option("--symbol-file", f.symbol_file, "symbol for the fromFile preset");
    app.add_option("--amplitude", f.amplitude, "bump amplitude or constant value");
    app.add_option("--degree", f.degree, "trigPoly degree");
    app.add_option("--bandwidth", f.bandwidth, "randomBandlimited bandwidth");
    app.add_option("--symbol-seed", f.symbol_seed, "symbol seed (defaults to --seed)");
    app.add_option("--weight", f.weight, "flat, polynomial or subexponential");
    app.add_option("--s", f.s, "polynomial weight exponent");
    app.add_option("--delta", f.delta, "subexponential rate");
    app.add_option("--b", f.b, "subexponential power");
    app.add_option("--q", f.q, "algebra exponent: 1 or inf");
    app.add_option("--opt", f.options, "suite option key=value (repeatable)");
    app.add_option("--tol", f.tolerances, "tolerance override key=value (repeatable)");
    app.add_flag("--quiet", f.quiet, "print only the pass line");

    // Global flags are also accepted after the subcommand name.
    app.fallthrough();
    std::string chosen;
    for (const auto& name : tfpsi::suite_names()) {
        app.add_subcommand(name, "run the " + name + " suite")->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const tfpsi::ExperimentConfig config = tfpsi::config_from_json(build_config(f));
        const tfpsi::Report report = tfpsi::run_suite(chosen, config);
        if (f.quiet) {
            std::cout << chosen << ": " << (report.pass ? "pass" : "FAIL") << '\n';
        } else {
            std::cout << tfpsi::to_json(report).dump(2) << '\n';
        }
        if (!report.pass) {
            std::cerr << chosen << ": failed checks:";
            for (const auto& name : report.failures) std::cerr << ' ' << name << '=' << report.metrics.at(name);
            std::cerr << '\n';
            return 2;
        }
        return 0;
    } catch (const tfpsi::Error& e) {
        std::cerr << "tfpsi: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "tfpsi: " << e.what() << '\n';
        return 1;
    }
}
