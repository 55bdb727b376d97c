// frontfix: American put pricing on a front-fixed grid.
//
//   frontfix price --config configs/price_dividend.json --out out
//   frontfix table 3 --out out/table3
//
// Exit status is 0 iff every gate in the report passes, 1 when a gate
// fails, 2 on a usage or configuration error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "frontfix/error.hpp"
#include "frontfix/harness/commands.hpp"
#include "frontfix/harness/config.hpp"
#include "frontfix/harness/tables.hpp"
#include "frontfix/kernels.hpp"

using namespace frontfix;
using namespace frontfix::harness;

namespace {

struct CommonFlags {
    std::string config;
    std::string out = "out";
    std::string pair;
    std::optional<double> eps;
    std::string grid;
    bool full_protocol = false;
};

void add_common(CLI::App* sub, CommonFlags& f, bool config_required) {
    auto* opt = sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    if (config_required) opt->required();
    sub->add_option("--out", f.out, "output directory")->capture_default_str();
    sub->add_option("--pair", f.pair, "embedded pair: DP, CK, BS, ST, or a pair JSON file");
    sub->add_option("--eps", f.eps, "local error tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--grid", f.grid, "grid spacing, or a comma-separated list for studies");
    sub->add_flag("--full-protocol", f.full_protocol, "finer grids and time steps (slow)");
}

PairId require_pair(const std::string& text) {
    if (auto id = parse_pair_id(text)) return *id;
    throw SolverError(ErrorKind::invalid_config, "unknown pair '" + text + "'");
}

bool looks_like_file(const std::string& s) { return s.find('/') != std::string::npos || s.ends_with(".json"); }

HarnessConfig make_config(const CommonFlags& f) {
    HarnessConfig cfg = f.config.empty() ? HarnessConfig{} : HarnessConfig::load(f.config);
    if (!f.pair.empty()) {
        if (looks_like_file(f.pair)) {
            cfg.pair_file = f.pair;
        } else {
            cfg.pair = require_pair(f.pair);
            cfg.pair_file.clear();
            cfg.pairs = {cfg.pair};
        }
    }
    if (f.eps) {
        cfg.epsilon = *f.eps;
        cfg.tolerances = {*f.eps};
    }
    if (!f.grid.empty()) {
        cfg.grids = parse_number_list(f.grid);
        cfg.h = cfg.grids.front();
    }
    cfg.full_protocol = cfg.full_protocol || f.full_protocol;
    return cfg;
}

TableOptions make_table_options(const CommonFlags& f) {
    TableOptions opts;
    opts.full_protocol = f.full_protocol;
    if (!f.pair.empty()) {
        if (looks_like_file(f.pair)) opts.pair_file = f.pair;
        else opts.pair = require_pair(f.pair);
    }
    opts.epsilon = f.eps;
    if (!f.grid.empty()) opts.grids = parse_number_list(f.grid);
    return opts;
}

int finish(const Report& report, const std::string& out, const MarketParams* params) {
    report.write(out, params);
    report.print(std::cout);
    std::cout << "reports written to " << out << "\n";
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"American put pricing with a front-fixing compact scheme"};
    app.require_subcommand(1);

    CommonFlags price_f, conv_f, bench_f, oracle_f, table_f;
    auto* price = app.add_subcommand("price", "price one configuration");
    add_common(price, price_f, true);
    auto* conv = app.add_subcommand("convergence", "successive-grid convergence study");
    add_common(conv, conv_f, true);
    auto* bench = app.add_subcommand("pairs-bench", "compare embedded pairs across grids and tolerances");
    add_common(bench, bench_f, true);
    auto* oracle = app.add_subcommand("oracle", "binomial reference prices and deltas");
    add_common(oracle, oracle_f, true);
    auto* table = app.add_subcommand("table", "reproduce a numerical table (1, 2, 3, 5 or 6)");
    add_common(table, table_f, false);
    int table_number = 0;
    table->add_option("number", table_number, "table number")->required()->check(CLI::IsMember({1, 2, 3, 5, 6}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::cerr << "kernels: " << kernels::to_string(kernels::active().isa) << "\n";
        if (*price) {
            const HarnessConfig cfg = make_config(price_f);
            return finish(cmd_price(cfg), price_f.out, &cfg.params);
        }
        if (*conv) {
            const HarnessConfig cfg = make_config(conv_f);
            return finish(cmd_convergence(cfg), conv_f.out, &cfg.params);
        }
        if (*bench) {
            const HarnessConfig cfg = make_config(bench_f);
            return finish(cmd_pairs_bench(cfg), bench_f.out, &cfg.params);
        }
        if (*oracle) {
            const HarnessConfig cfg = make_config(oracle_f);
            return finish(cmd_oracle(cfg), oracle_f.out, &cfg.params);
        }
        if (*table) {
            const Report r = run_table(table_number, make_table_options(table_f));
            return finish(r, table_f.out, nullptr);
        }
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
