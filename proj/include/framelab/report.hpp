#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace framelab {

using json = nlohmann::ordered_json;

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string criterion;  // human-readable threshold, e.g. "|A-1| <= 1e-8"
};

/// Experiment report: inputs echo, quantitative results, and per-check
/// verdicts. Everything written to disk is a deterministic function of the
/// configuration and seed; timing is returned to the caller for console
/// display but never serialized, so identical runs give identical bytes.
struct Report {
    std::string experiment;
    json inputs = json::object();
    json results = json::object();
    std::vector<CheckResult> checks;

    bool pass() const {
        for (const CheckResult& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }

    CheckResult& add_check(const std::string& name, bool ok, double value,
                           const std::string& criterion) {
        checks.push_back({name, ok, value, criterion});
        return checks.back();
    }

    json to_json() const {
        json j;
        j["experiment"] = experiment;
        j["inputs"] = inputs;
        j["results"] = results;
        json arr = json::array();
        for (const CheckResult& c : checks) {
            json jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            jc["value"] = c.value;
            jc["criterion"] = c.criterion;
            arr.push_back(jc);
        }
        j["checks"] = arr;
        j["pass"] = pass();
        return j;
    }
};

inline void write_report(const std::string& path, const Report& report) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "IoError", "cannot open " + path + " for writing");
    out << report.to_json().dump(2) << '\n';
    require(out.good(), "IoError", "failed writing " + path);
}

}  // namespace framelab
