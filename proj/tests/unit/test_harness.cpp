#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "frontfix/error.hpp"
#include "frontfix/harness/commands.hpp"
#include "frontfix/harness/config.hpp"
#include "frontfix/harness/convergence.hpp"
#include "frontfix/harness/tables.hpp"
#include "frontfix/harness/worker_pool.hpp"

using namespace frontfix;
using namespace frontfix::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HarnessConfig small_config() {
    HarnessConfig cfg;
    cfg.name = "small";
    cfg.params = MarketParams{100.0, 0.05, 0.03, 0.2, 0.5};
    cfg.h = 0.05;
    cfg.spots = {90.0, 100.0};
    cfg.oracle.steps = 500;
    return cfg;
}

}  // namespace

TEST_CASE("number lists") {
    CHECK(parse_number_list("0.1,0.05") == std::vector<double>{0.1, 0.05});
    CHECK(parse_number_list("0.01") == std::vector<double>{0.01});
    CHECK_THROWS_AS(parse_number_list("0.1,,0.05"), SolverError);
    CHECK_THROWS_AS(parse_number_list("0.1,x"), SolverError);
    CHECK_THROWS_AS(parse_number_list("-0.1"), SolverError);
}

TEST_CASE("config documents") {
    const auto cfg = HarnessConfig::from_json(nlohmann::json::parse(R"({
        "name": "t", "params": {"rate": 0.07, "volatility": 0.4}, "grid": {"h": 0.03},
        "pair": "BS", "epsilon": 1e-4, "spots": [100], "oracle": {"method": "LR", "steps": 101},
        "discretization": {"cubic_form": "rederived"},
        "gates": [{"quantity": "price", "spot": 100, "target": 5.0, "tolerance": 0.1}]})"));
    CHECK(cfg.params.rate == 0.07);
    CHECK(cfg.params.strike == 100.0);
    CHECK(cfg.h == 0.03);
    CHECK(cfg.pair == PairId::BS);
    CHECK(cfg.oracle.method == TreeMethod::LeisenReimer);
    CHECK(cfg.discretization.cubic_form == CubicSlopeForm::rederived);
    REQUIRE(cfg.gates.size() == 1);
    const auto again = HarnessConfig::from_json(cfg.to_json());
    CHECK(again.to_json() == cfg.to_json());

    CHECK_THROWS_AS(HarnessConfig::from_json(nlohmann::json::parse(R"({"epsilom": 1e-5})")), SolverError);
    CHECK_THROWS_AS(HarnessConfig::from_json(nlohmann::json::parse(R"({"pair": "XX"})")), SolverError);
    CHECK_THROWS_AS(HarnessConfig::from_json(nlohmann::json::parse(R"({"params": {"volatility": 0}})")), SolverError);
    CHECK_THROWS_AS(HarnessConfig::load("no_such_config.json"), SolverError);
}

TEST_CASE("committed fixtures parse") {
    for (const auto& entry : fs::directory_iterator(fs::path(FRONTFIX_SOURCE_DIR) / "configs")) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(HarnessConfig::load(entry.path().string()));
    }
}

TEST_CASE("worker pool") {
    std::vector<int> hits(257, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 3) throw std::runtime_error("boom"); }),
                    std::runtime_error);
    CHECK(worker_count(0) >= 1);
    setenv("SOLVER_THREADS", "2", 1);
    CHECK(worker_count(100) <= 2);
    CHECK(worker_count(1) == 1);
    unsetenv("SOLVER_THREADS");
}

TEST_CASE("nested grids") {
    CHECK_NOTHROW(require_nested({0.1, 0.05, 0.025}));
    CHECK_THROWS_AS(require_nested({0.1, 0.03}), SolverError);
    CHECK_THROWS_AS(require_nested({0.05, 0.1}), SolverError);
}

TEST_CASE("single grid study has no errors or orders") {
    const auto c = run_convergence(ConvergenceMode::rk4, MarketParams{100.0, 0.05, 0.0, 0.2, 0.01}, 3.0, {0.1}, 1e-4);
    CHECK(c.boundary.errors.empty());
    CHECK(c.boundary.orders.empty());
    CHECK(c.boundary_values.size() == 1);
}

TEST_CASE("price with no spots reports the boundary only") {
    HarnessConfig cfg = small_config();
    cfg.spots.clear();
    const Report r = cmd_price(cfg);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].section == "boundary");
    CHECK(r.all_pass());
}

TEST_CASE("price gates decide the outcome") {
    HarnessConfig cfg = small_config();
    cfg.gates = {GateSpec{"price", 100.0, 5.1496, 5e-2}};
    CHECK(cmd_price(cfg).all_pass());
    cfg.gates = {GateSpec{"price", 100.0, 6.0, 1e-3}};
    CHECK_FALSE(cmd_price(cfg).all_pass());
}

TEST_CASE("oracle command") {
    HarnessConfig cfg = small_config();
    cfg.oracle.steps = 15001;
    cfg.spots = {110.0};
    cfg.gates = {GateSpec{"price", 110.0, 1.9491, 2e-3}};
    const Report r = cmd_oracle(cfg);
    CHECK(r.all_pass());
    for (const auto& row : r.rows) CHECK(row.source == Source::oracle);
}

TEST_CASE("reports are byte-identical across runs apart from timing") {
    const fs::path dir_a = fs::temp_directory_path() / "frontfix_report_a";
    const fs::path dir_b = fs::temp_directory_path() / "frontfix_report_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    const HarnessConfig cfg = small_config();
    cmd_price(cfg).write(dir_a, &cfg.params);
    cmd_price(cfg).write(dir_b, &cfg.params);
    for (const char* file : {"small.csv", "small_gates.csv", "snapshot_small.csv", "snapshot_small.json",
                             "trace_DP_h0.05_eps1e-05.csv"}) {
        CAPTURE(file);
        CHECK(slurp(dir_a / file) == slurp(dir_b / file));
    }
    const std::string csv = slurp(dir_a / "small.csv");
    CHECK(csv.rfind("section,label,key,value,source\n", 0) == 0);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const bool tagged = line.ends_with(",solver") || line.ends_with(",oracle") || line.ends_with(",paper-reference");
        CHECK(tagged);
    }
    CHECK(slurp(dir_a / "trace_DP_h0.05_eps1e-05.csv").rfind("tau,k\n", 0) == 0);
    CHECK(slurp(dir_a / "snapshot_small.csv").rfind("x,u,v\n", 0) == 0);
    const auto side = nlohmann::json::parse(slurp(dir_a / "snapshot_small.json"));
    CHECK(side.contains("f_b"));
    CHECK(side.contains("tau"));
    CHECK(side.contains("params"));
}

TEST_CASE("bench records a file-defined pair alongside the bundled ones") {
    HarnessConfig cfg = small_config();
    cfg.params.maturity = 0.05;
    cfg.pairs = {PairId::DP, PairId::PP};
    cfg.pair_file = std::string(FRONTFIX_SOURCE_DIR) + "/configs/pairs/file_pair_example.json";
    cfg.warmup = false;
    const Report r = cmd_pairs_bench(cfg);
    REQUIRE(r.runs.size() == 2);
    // the example file carries Dormand-Prince coefficients, so both runs agree
    CHECK(r.runs[0].final_boundary == r.runs[1].final_boundary);
}

TEST_CASE("table runner rejects unknown tables") {
    CHECK_THROWS_AS(run_table(4, TableOptions{}), SolverError);
}
