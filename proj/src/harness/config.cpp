#include "frontfix/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "frontfix/error.hpp"

namespace frontfix::harness {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw SolverError(ErrorKind::invalid_config, what); }

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) bad("unknown key '" + it.key() + "' in " + where);
    }
}

PairId pair_of(const std::string& text) {
    const auto id = parse_pair_id(text);
    if (!id) bad("unknown pair id '" + text + "'");
    return *id;
}

}  // namespace

std::string to_string(Integrator integrator) {
    switch (integrator) {
        case Integrator::adaptive: return "adaptive";
        case Integrator::rk4: return "rk4";
        case Integrator::cn: return "cn";
    }
    return "?";
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const double value = std::stod(item, &used);
            if (used != item.size() || !(value > 0.0)) throw std::invalid_argument(item);
            out.push_back(value);
        } catch (const std::exception&) {
            bad("not a positive number: '" + item + "'");
        }
    }
    if (out.empty()) bad("empty number list");
    return out;
}

HarnessConfig HarnessConfig::from_json(const json& doc) {
    HarnessConfig c;
    try {
        reject_unknown(doc,
                       {"name", "params", "grid", "integrator", "pair", "pair_file", "pairs", "epsilon", "tolerances",
                        "k_max", "fixed_step", "spots", "oracle", "probe", "discretization", "gates", "warmup",
                        "full_protocol", "snapshot_every"},
                       "config");
        c.name = doc.value("name", c.name);
        if (doc.contains("params")) {
            const auto& p = doc["params"];
            reject_unknown(p, {"strike", "rate", "dividend", "volatility", "maturity"}, "params");
            c.params.strike = p.value("strike", c.params.strike);
            c.params.rate = p.value("rate", c.params.rate);
            c.params.dividend = p.value("dividend", c.params.dividend);
            c.params.volatility = p.value("volatility", c.params.volatility);
            c.params.maturity = p.value("maturity", c.params.maturity);
        }
        if (doc.contains("grid")) {
            const auto& g = doc["grid"];
            reject_unknown(g, {"x_max", "h", "grids"}, "grid");
            c.x_max = g.value("x_max", c.x_max);
            c.h = g.value("h", c.h);
            if (g.contains("grids")) c.grids = g["grids"].get<std::vector<double>>();
        }
        if (doc.contains("integrator")) {
            const auto name = doc["integrator"].get<std::string>();
            if (name == "adaptive") c.integrator = Integrator::adaptive;
            else if (name == "rk4") c.integrator = Integrator::rk4;
            else if (name == "cn") c.integrator = Integrator::cn;
            else bad("unknown integrator '" + name + "'");
        }
        if (doc.contains("pair")) c.pair = pair_of(doc["pair"].get<std::string>());
        c.pair_file = doc.value("pair_file", c.pair_file);
        if (doc.contains("pairs")) {
            for (const auto& p : doc["pairs"]) c.pairs.push_back(pair_of(p.get<std::string>()));
        }
        c.epsilon = doc.value("epsilon", c.epsilon);
        if (doc.contains("tolerances")) c.tolerances = doc["tolerances"].get<std::vector<double>>();
        c.k_max = doc.value("k_max", c.k_max);
        c.fixed_step = doc.value("fixed_step", c.fixed_step);
        if (doc.contains("spots")) c.spots = doc["spots"].get<std::vector<double>>();
        if (doc.contains("oracle")) {
            const auto& o = doc["oracle"];
            reject_unknown(o, {"enabled", "steps", "method"}, "oracle");
            c.oracle_enabled = o.value("enabled", c.oracle_enabled);
            c.oracle.steps = o.value("steps", c.oracle.steps);
            const auto method = o.value("method", std::string("CRR"));
            if (method == "CRR") c.oracle.method = TreeMethod::CRR;
            else if (method == "LR" || method == "LeisenReimer") c.oracle.method = TreeMethod::LeisenReimer;
            else bad("unknown tree method '" + method + "'");
        }
        c.probe = doc.value("probe", c.probe);
        if (doc.contains("discretization")) {
            const auto& d = doc["discretization"];
            reject_unknown(d, {"cubic_form", "coupling"}, "discretization");
            const auto form = d.value("cubic_form", std::string("printed"));
            if (form == "printed") c.discretization.cubic_form = CubicSlopeForm::printed;
            else if (form == "rederived") c.discretization.cubic_form = CubicSlopeForm::rederived;
            else bad("unknown cubic_form '" + form + "'");
            const auto coupling = d.value("coupling", std::string("chain_rule"));
            if (coupling == "chain_rule") c.discretization.coupling = DeltaCoupling::chain_rule;
            else if (coupling == "printed") c.discretization.coupling = DeltaCoupling::printed;
            else bad("unknown coupling '" + coupling + "'");
        }
        if (doc.contains("gates")) {
            for (const auto& g : doc["gates"]) {
                reject_unknown(g, {"quantity", "spot", "target", "tolerance"}, "gate");
                GateSpec spec{g.at("quantity").get<std::string>(), g.value("spot", 0.0), g.at("target").get<double>(),
                              g.at("tolerance").get<double>()};
                if (spec.quantity != "price" && spec.quantity != "delta" && spec.quantity != "f_b") {
                    bad("gate quantity must be price, delta or f_b");
                }
                c.gates.push_back(spec);
            }
        }
        c.warmup = doc.value("warmup", c.warmup);
        c.full_protocol = doc.value("full_protocol", c.full_protocol);
        c.snapshot_every = doc.value("snapshot_every", c.snapshot_every);
    } catch (const json::exception& e) {
        bad(std::string("config: ") + e.what());
    }
    c.params.validate();
    if (!(c.epsilon > 0.0)) bad("epsilon must be positive");
    if (!(c.fixed_step > 0.0)) bad("fixed_step must be positive");
    return c;
}

HarnessConfig HarnessConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        bad("config " + path + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json HarnessConfig::to_json() const {
    using nlohmann::json;
    json doc;
    doc["name"] = name;
    doc["params"] = {{"strike", params.strike}, {"rate", params.rate}, {"dividend", params.dividend},
                     {"volatility", params.volatility}, {"maturity", params.maturity}};
    doc["grid"] = {{"x_max", x_max}, {"h", h}, {"grids", grids}};
    doc["integrator"] = to_string(integrator);
    doc["pair"] = std::string(frontfix::to_string(pair));
    std::vector<std::string> pair_names;
    for (PairId p : pairs) pair_names.emplace_back(frontfix::to_string(p));
    doc["pairs"] = pair_names;
    doc["epsilon"] = epsilon;
    doc["tolerances"] = tolerances;
    doc["k_max"] = k_max;
    doc["fixed_step"] = fixed_step;
    doc["spots"] = spots;
    doc["oracle"] = {{"enabled", oracle_enabled}, {"steps", oracle.steps},
                     {"method", oracle.method == TreeMethod::CRR ? "CRR" : "LR"}};
    doc["probe"] = probe;
    doc["discretization"] = {
        {"cubic_form", discretization.cubic_form == CubicSlopeForm::printed ? "printed" : "rederived"},
        {"coupling", discretization.coupling == DeltaCoupling::chain_rule ? "chain_rule" : "printed"}};
    json gate_list = json::array();
    for (const auto& g : gates) {
        gate_list.push_back({{"quantity", g.quantity}, {"spot", g.spot}, {"target", g.target}, {"tolerance", g.tolerance}});
    }
    doc["gates"] = gate_list;
    doc["warmup"] = warmup;
    doc["full_protocol"] = full_protocol;
    doc["snapshot_every"] = snapshot_every;
    if (!pair_file.empty()) doc["pair_file"] = pair_file;
    return doc;
}

}  // namespace frontfix::harness
