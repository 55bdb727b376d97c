#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "frontfix/binomial.hpp"
#include "frontfix/model.hpp"
#include "frontfix/rk_embedded.hpp"
#include "frontfix/semi_discrete.hpp"
#include "frontfix/tableau.hpp"

namespace frontfix::harness {

enum class Integrator { adaptive, rk4, cn };

/// Optional pass/fail check on a price run. quantity is "price", "delta"
/// or "f_b"; spot is ignored for f_b.
struct GateSpec {
    std::string quantity;
    double spot = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
};

/// One JSON document describing a run. Unknown keys are rejected so typos
/// in committed fixtures fail loudly.
struct HarnessConfig {
    std::string name = "run";
    MarketParams params;
    double x_max = 3.0;
    double h = 0.01;
    std::vector<double> grids;
    Integrator integrator = Integrator::adaptive;
    PairId pair = PairId::DP;
    std::string pair_file;
    std::vector<PairId> pairs;
    double epsilon = 1e-5;
    std::vector<double> tolerances;
    double k_max = 0.05;
    double fixed_step = 1e-5;
    std::vector<double> spots;
    TreeConfig oracle;
    bool oracle_enabled = true;
    bool probe = false;
    DiscretizationOptions discretization;
    std::vector<GateSpec> gates;
    bool warmup = true;
    bool full_protocol = false;
    std::size_t snapshot_every = 0;

    static HarnessConfig from_json(const nlohmann::json& doc);
    static HarnessConfig load(const std::string& path);
    nlohmann::json to_json() const;

    GridSpec grid() const { return GridSpec::with_spacing(x_max, h); }
};

/// Comma-separated list of positive numbers.
std::vector<double> parse_number_list(const std::string& text);

std::string to_string(Integrator integrator);

}  // namespace frontfix::harness
