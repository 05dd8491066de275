#pragma once

// Versioned JSON run reports: every numeric claim carries its tolerance and
// the oracle that produced it.

#include <chrono>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace gadget {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0;
    double tolerance = 0;
    std::string oracle; // dense eig | exact algebra | BFS count | ...
    std::string note;
};

struct RunReport {
    static constexpr int schema_version = 1;
    std::string command;
    std::string model_fingerprint;
    std::vector<CheckResult> checks;
    std::map<std::string, double> timings_ms;
    std::map<std::string, std::string> extra;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    CheckResult& add(std::string name, bool pass, double measured,
                     double tolerance, std::string oracle,
                     std::string note = "") {
        checks.push_back({std::move(name), pass, measured, tolerance,
                          std::move(oracle), std::move(note)});
        return checks.back();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["command"] = command;
        if (!model_fingerprint.empty())
            j["model_fingerprint"] = model_fingerprint;
        j["all_pass"] = all_pass();
        for (const auto& c : checks)
            j["checks"].push_back({{"name", c.name},
                                   {"pass", c.pass},
                                   {"measured", c.measured},
                                   {"tolerance", c.tolerance},
                                   {"oracle", c.oracle},
                                   {"note", c.note}});
        for (const auto& [k, v] : timings_ms) j["timings_ms"][k] = v;
        for (const auto& [k, v] : extra) j["extra"][k] = v;
        return j;
    }

    void write(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("report: cannot write " + path);
        f << to_json().dump(2) << "\n";
    }
};

class Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

} // namespace gadget
