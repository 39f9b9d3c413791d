#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exbound/analysis.hpp"
#include "exbound/landau.hpp"
#include "exbound/splitting.hpp"
#include "exbound/volatility.hpp"

namespace exbound {

/// Settings of the integral-equation benchmark run.
struct BenchmarkConfig {
    int m_taus = 200;
    int quad_nodes_per_panel = 12;
    double tol = 1e-9;
    int max_iter = 400;
    double damping = 1.0;
    std::string tau_grid = "uniform";  // or "graded"
};

struct ConvergeConfig {
    std::vector<double> h_list = {0.03, 0.012, 0.006};
    double cfl_ratio = 0.5;
    int reference_nodes = 800;
};

struct SweepConfig {
    std::string family = "rapm";  // or "barles-soner"
    double cost = 0.01;           // transaction cost measure for the rapm family
    std::vector<double> r_list = {1, 2, 5, 10, 20, 40, 100};
    std::vector<double> a_list = {0.01, 0.02, 0.05, 0.1, 0.2, 0.35};
};

struct PriceConfig {
    std::vector<double> s_values;
};

/// Fully resolved run settings: every field has a value after parsing, so the
/// serialized form reproduces the run exactly.
struct RunConfig {
    MarketParams market{10.0, 0.1, 0.05, 1.0};
    VolatilitySpec model = VolatilitySpec::constant(0.2);
    Grid grid{3.0, 750, 225000};
    SolverControls controls;
    BenchmarkConfig benchmark;
    ConvergeConfig converge;
    SweepConfig sweep;
    PriceConfig price;
};

/// Parses and validates a config document. Unknown keys anywhere are rejected;
/// all type invariants are enforced before anything runs.
RunConfig parse_config(const nlohmann::json& doc);

/// The resolved document: parse_config(to_json(cfg)) round-trips.
nlohmann::json to_json(const RunConfig& cfg);

/// Applies `key.path=value` to a raw document; the value is parsed as JSON
/// when possible and taken as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

SweepFamily sweep_family_from_string(const std::string& name);

}  // namespace exbound
