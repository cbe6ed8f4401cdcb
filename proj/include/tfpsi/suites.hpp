#pragma once

// Experiment runner shared by the CLI and the acceptance binary. Each suite builds its objects from an
// ExperimentConfig, runs the library checks and collects a flat metric map. Pass/fail is decided here
// against the configured tolerances, never inside the library.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfpsi/seqalg.hpp"

namespace tfpsi {

struct SymbolPreset {
    std::string kind = "default";  // default, constant, bump, trigPoly, randomBandlimited, rough, fromFile
    double amplitude = 0.3;        // bump amplitude, or the value of the constant symbol
    long degree = 2;
    long bandwidth = 3;
    std::optional<std::uint64_t> seed;  // falls back to the experiment seed
    std::string path;
};

struct ExperimentConfig {
    long n = 33;
    long alpha = 3;
    long beta = 3;
    std::string window_kind = "periodizedGaussian";  // periodizedGaussian, delta, customFile
    std::string window_file;
    WeightSpec weight = WeightSpec::flat();
    Exponent q = Exponent::one;
    SymbolPreset symbol;
    std::uint64_t seed = 7;
    std::filesystem::path out_dir;  // empty: no artifacts written
    std::map<std::string, double> tolerances;  // overrides of the defaults below
    nlohmann::json suite = nlohmann::json::object();  // suite-specific options

    PhaseLattice lattice() const { return PhaseLattice(n, alpha, beta); }
    AlgebraSpec algebra() const { return AlgebraSpec::make(weight, q, lattice()); }
};

/// Reads a config file or object; unknown or malformed fields raise a config error naming the field.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Normalized echo with every default filled in. outDir is left out so reports do not depend on it.
nlohmann::json config_echo(const ExperimentConfig& c);

struct Report {
    std::string suite;
    nlohmann::json config;
    std::map<std::string, double> metrics;
    std::vector<std::string> failures;  // names of the tolerance checks that did not hold
    std::vector<std::string> artifacts;  // file names relative to outDir
    bool pass = false;
    double wall_time_ms = 0.0;
};

nlohmann::json to_json(const Report& r);
/// Serialized report without the timing field, for byte comparisons.
std::string report_bytes_without_timing(const Report& r);

const std::vector<std::string>& suite_names();
/// Default tolerance table; keys are the names accepted under "tolerances" in a config.
const std::map<std::string, double>& default_tolerances();

/// Runs one suite. Writes report.json and CSV artifacts when outDir is set.
Report run_suite(const std::string& name, const ExperimentConfig& config);

}  // namespace tfpsi
