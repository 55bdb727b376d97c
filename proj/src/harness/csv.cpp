#include "frontfix/harness/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "frontfix/error.hpp"

namespace frontfix::harness {

std::string to_string(Source source) {
    switch (source) {
        case Source::solver: return "solver";
        case Source::oracle: return "oracle";
        case Source::paper_reference: return "paper-reference";
    }
    return "unknown";
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SolverError(ErrorKind::invalid_config, "cannot write " + path.string());
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(fields[i]);
        }
        out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
}

Gate gate_within(std::string name, double measured, double target, double tolerance, Source target_source) {
    Gate g{std::move(name), GateKind::within, measured, Source::solver, target, target_source, tolerance, false, {}};
    g.pass = std::isfinite(measured) && std::abs(measured - target) <= tolerance;
    return g;
}

Gate gate_at_least(std::string name, double measured, double floor) {
    Gate g{std::move(name), GateKind::at_least, measured, Source::solver, floor, Source::paper_reference, 0.0, false, {}};
    g.pass = std::isfinite(measured) && measured >= floor;
    return g;
}

Gate gate_at_most(std::string name, double measured, double ceiling) {
    Gate g{std::move(name), GateKind::at_most, measured, Source::solver, ceiling, Source::paper_reference, 0.0, false, {}};
    g.pass = std::isfinite(measured) && measured <= ceiling;
    return g;
}

Gate gate_holds(std::string name, bool condition, std::string note) {
    Gate g{std::move(name), GateKind::holds, condition ? 1.0 : 0.0, Source::solver, 1.0, Source::solver, 0.0, condition,
           std::move(note)};
    return g;
}

void Report::add(std::string section, std::string label, std::string key, double value, Source source) {
    rows.push_back({std::move(section), std::move(label), std::move(key), value, source});
}

bool Report::all_pass() const {
    for (const auto& g : gates) {
        if (!g.pass) return false;
    }
    return true;
}

void Report::append(const Report& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    runs.insert(runs.end(), other.runs.begin(), other.runs.end());
    traces.insert(traces.end(), other.traces.begin(), other.traces.end());
    snapshots.insert(snapshots.end(), other.snapshots.begin(), other.snapshots.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

namespace {

std::string kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::within: return "within";
        case GateKind::at_least: return "at_least";
        case GateKind::at_most: return "at_most";
        case GateKind::holds: return "holds";
    }
    return "?";
}

nlohmann::json stats_json(const RunStats& s) {
    return {{"wall_seconds", s.total_cpu_seconds},
            {"accepted_steps", s.accepted_steps},
            {"rejected_steps", s.rejected_steps},
            {"failed_attempts", s.failed_attempts},
            {"rhs_evaluations", s.rhs_evaluations},
            {"min_step", s.min_step},
            {"avg_step", s.avg_step},
            {"max_step", s.max_step},
            {"tau_of_min_step", s.tau_of_min_step},
            {"max_accepted_error_ratio", s.max_accepted_error_ratio},
            {"controller_violations", s.controller_violations},
            {"max_boundary_rise", s.max_boundary_rise},
            {"max_robin_defect", s.max_robin_defect},
            {"diverged", s.diverged},
            {"tau_of_failure", s.tau_of_failure}};
}

}  // namespace

void write_trace(const std::filesystem::path& path, const std::vector<StepTraceEntry>& trace) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.size());
    for (const auto& e : trace) rows.push_back({format_number(e.tau), format_number(e.k)});
    write_csv(path, {"tau", "k"}, rows);
}

void write_snapshot(const std::filesystem::path& dir, const std::string& label, const SolverState& state,
                    const MarketParams* params) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < state.u.size(); ++i) {
        rows.push_back({format_number(state.grid.node(i)), format_number(state.u[i]), format_number(state.v[i])});
    }
    write_csv(dir / ("snapshot_" + label + ".csv"), {"x", "u", "v"}, rows);
    nlohmann::json side = {{"f_b", state.f_b}, {"tau", state.tau}, {"x_max", state.grid.x_max},
                           {"intervals", state.grid.intervals}, {"strike", state.strike}};
    if (params) {
        side["params"] = {{"strike", params->strike}, {"rate", params->rate}, {"dividend", params->dividend},
                          {"volatility", params->volatility}, {"maturity", params->maturity}};
    }
    std::ofstream out(dir / ("snapshot_" + label + ".json"));
    out << std::setw(2) << side << '\n';
}

void Report::write(const std::filesystem::path& dir, const MarketParams* params) const {
    std::filesystem::create_directories(dir);
    std::vector<std::vector<std::string>> data;
    for (const auto& r : rows) {
        data.push_back({r.section, r.label, r.key, format_number(r.value), to_string(r.source)});
    }
    write_csv(dir / (name + ".csv"), {"section", "label", "key", "value", "source"}, data);

    std::vector<std::vector<std::string>> gate_rows;
    for (const auto& g : gates) {
        gate_rows.push_back({g.name, kind_name(g.kind), format_number(g.measured), to_string(g.measured_source),
                             format_number(g.target), to_string(g.target_source), format_number(g.tolerance),
                             g.pass ? "pass" : "fail", g.note});
    }
    write_csv(dir / (name + "_gates.csv"),
              {"gate", "kind", "measured", "measured_source", "target", "target_source", "tolerance", "result", "note"},
              gate_rows);

    if (!runs.empty()) {
        std::vector<std::vector<std::string>> run_rows;
        for (const auto& r : runs) {
            const auto& s = r.stats;
            run_rows.push_back({r.label, format_number(r.epsilon), format_number(r.final_boundary),
                                std::to_string(s.accepted_steps), std::to_string(s.rejected_steps),
                                std::to_string(s.failed_attempts), std::to_string(s.rhs_evaluations),
                                format_number(s.min_step), format_number(s.avg_step), format_number(s.max_step),
                                format_number(s.tau_of_min_step), format_number(s.max_accepted_error_ratio),
                                s.diverged ? "yes" : "no", format_number(s.total_cpu_seconds), "solver"});
        }
        write_csv(dir / (name + "_runs.csv"),
                  {"run", "epsilon", "f_b", "accepted", "rejected", "failed", "rhs_evaluations", "min_step", "avg_step",
                   "max_step", "tau_of_min_step", "max_error_ratio", "diverged", "wall_seconds", "source"},
                  run_rows);
    }

    for (const auto& [label, trace] : traces) write_trace(dir / ("trace_" + label + ".csv"), trace);
    for (const auto& [label, state] : snapshots) write_snapshot(dir, label, state, params);

    nlohmann::json doc = metadata;
    doc["name"] = name;
    doc["all_pass"] = all_pass();
    doc["notes"] = notes;
    auto& jg = doc["gates"] = nlohmann::json::array();
    for (const auto& g : gates) {
        jg.push_back({{"gate", g.name}, {"kind", kind_name(g.kind)}, {"measured", g.measured},
                      {"target", g.target}, {"tolerance", g.tolerance}, {"pass", g.pass},
                      {"target_source", to_string(g.target_source)}, {"note", g.note}});
    }
    auto& jr = doc["runs"] = nlohmann::json::array();
    for (const auto& r : runs) {
        jr.push_back({{"run", r.label}, {"epsilon", r.epsilon}, {"f_b", r.final_boundary}, {"stats", stats_json(r.stats)}});
    }
    std::ofstream out(dir / (name + ".json"));
    out << std::setw(2) << doc << '\n';
}

void Report::print(std::ostream& out) const {
    out << "== " << name << " ==\n";
    // Sections in order of first appearance, rows within a section in insertion order.
    std::vector<std::string> sections;
    for (const auto& r : rows) {
        if (std::find(sections.begin(), sections.end(), r.section) == sections.end()) sections.push_back(r.section);
    }
    for (const auto& section : sections) {
        out << "[" << section << "]\n";
        for (const auto& r : rows) {
            if (r.section != section) continue;
            out << "  " << std::left << std::setw(28) << r.label << std::setw(16) << r.key << std::right << std::setw(18)
            << format_number(r.value) << "  (" << to_string(r.source) << ")\n";
        }
    }
    for (const auto& n : notes) out << "note: " << n << '\n';
    for (const auto& g : gates) {
        out << (g.pass ? "PASS " : "FAIL ") << g.name << ": measured " << format_number(g.measured);
        switch (g.kind) {
            case GateKind::within:
                out << " target " << format_number(g.target) << " +/- " << format_number(g.tolerance);
                break;
            case GateKind::at_least: out << " >= " << format_number(g.target); break;
            case GateKind::at_most: out << " <= " << format_number(g.target); break;
            case GateKind::holds: break;
        }
        if (!g.note.empty()) out << " (" << g.note << ")";
        out << '\n';
    }
}

}  // namespace frontfix::harness
