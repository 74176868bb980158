#pragma once

// Structured experiment reports (JSON) and CSV scan output. Every CSV starts
// with a `# config=<hash>` line followed by a header row; pass flags are
// functions of the recorded numbers only.

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "besovflow/norms.hpp"

namespace besovflow {

struct ExperimentReport {
    std::string claim;        // stable identifier, e.g. "pressure-double"
    std::string description;  // what was measured
    std::vector<double> fitted;
    double theoretical_floor = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_seconds = 0.0;
    std::vector<std::string> deviations;
    nlohmann::json details;
};

nlohmann::json to_json(const ExperimentReport& r);
void write_report(const ExperimentReport& r, const std::string& path);

// FNV-1a over the canonical config text; stamped into every CSV.
std::string config_hash(const std::string& canonical_config);

void write_scan_csv(const NormScan& scan, const std::string& path,
                    const std::string& config_hash);

// Flat key = value configuration with [section] headers; later keys override
// earlier ones, flags override file values.
struct ConfigMap {
    std::map<std::string, std::string> values;

    static ConfigMap parse_file(const std::string& path);
    void set(const std::string& key, const std::string& value) { values[key] = value; }
    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string canonical() const;  // sorted key=value lines
};

}  // namespace besovflow
