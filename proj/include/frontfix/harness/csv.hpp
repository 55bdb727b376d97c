#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "frontfix/model.hpp"
#include "frontfix/rk_embedded.hpp"

namespace frontfix::harness {

/// Provenance of a reported number.
enum class Source { solver, oracle, paper_reference };

std::string to_string(Source source);

/// Shortest round-trip-ish decimal (%.12g), so reports are byte-stable.
std::string format_number(double value);

std::string csv_escape(const std::string& field);

/// Writes a CSV file with a header row; throws on I/O failure.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct ReportRow {
    std::string section;
    std::string label;
    std::string key;
    double value = 0.0;
    Source source = Source::solver;
};

enum class GateKind { within, at_least, at_most, holds };

struct Gate {
    std::string name;
    GateKind kind = GateKind::within;
    double measured = 0.0;
    Source measured_source = Source::solver;
    double target = 0.0;
    Source target_source = Source::paper_reference;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

/// |measured - target| <= tolerance.
Gate gate_within(std::string name, double measured, double target, double tolerance,
                 Source target_source = Source::paper_reference);
Gate gate_at_least(std::string name, double measured, double floor);
Gate gate_at_most(std::string name, double measured, double ceiling);
Gate gate_holds(std::string name, bool condition, std::string note);

struct RunRecord {
    std::string label;
    double maturity = 0.0;
    double epsilon = 0.0;
    double final_boundary = 0.0;
    RunStats stats;
};

struct Report {
    std::string name;
    std::vector<ReportRow> rows;
    std::vector<Gate> gates;
    std::vector<RunRecord> runs;
    std::vector<std::pair<std::string, std::vector<StepTraceEntry>>> traces;
    std::vector<std::pair<std::string, SolverState>> snapshots;
    std::vector<std::string> notes;
    nlohmann::json metadata = nlohmann::json::object();

    void add(std::string section, std::string label, std::string key, double value, Source source);
    bool all_pass() const;
    void append(const Report& other);

    /// <name>.csv, <name>_gates.csv, <name>_runs.csv, <name>.json, one
    /// trace_<label>.csv per trace and snapshot_<label>.csv/.json per snapshot.
    void write(const std::filesystem::path& dir, const MarketParams* params = nullptr) const;

    void print(std::ostream& out) const;
};

/// x, u, v columns plus a sidecar JSON with f_b, tau and the parameters.
void write_snapshot(const std::filesystem::path& dir, const std::string& label, const SolverState& state,
                    const MarketParams* params);

void write_trace(const std::filesystem::path& path, const std::vector<StepTraceEntry>& trace);

}  // namespace frontfix::harness
