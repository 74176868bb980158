#include "besovflow/report.hpp"

#include <fstream>
#include <sstream>

namespace besovflow {

nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["claim"] = r.claim;
    j["description"] = r.description;
    j["fitted"] = r.fitted;
    j["theoretical_floor"] = r.theoretical_floor;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["runtime_seconds"] = r.runtime_seconds;
    j["deviations"] = r.deviations;
    if (!r.details.is_null()) j["details"] = r.details;
    return j;
}

void write_report(const ExperimentReport& r, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("write_report: cannot open " + path);
    os << to_json(r).dump(2) << "\n";
}

std::string config_hash(const std::string& canonical_config) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical_config) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_scan_csv(const NormScan& scan, const std::string& path,
                    const std::string& config_hash) {
    std::ofstream os(path);
    if (!os) throw IoError("write_scan_csv: cannot open " + path);
    os << "# config=" << config_hash << "\n";
    os << "scale,value,estimator_id\n";
    os.precision(17);
    for (std::size_t i = 0; i < scan.scales.size(); ++i)
        os << scan.scales[i] << "," << scan.values[i] << "," << scan.estimator_id << "\n";
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("config: cannot open " + path);
    ConfigMap cfg;
    std::string line, section;
    while (std::getline(is, line)) {
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2) + ".";
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("config: expected key = value: " + line);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        cfg.values[section + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

std::string ConfigMap::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : std::stod(it->second);
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : std::stoi(it->second);
}

std::string ConfigMap::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : values) os << k << "=" << v << "\n";
    return os.str();
}

}  // namespace besovflow
