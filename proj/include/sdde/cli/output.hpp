/*
   Copyright 2026 The sdde-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sdde/core/errors.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/estimates/bound_report.hpp"

namespace sdde::cli {

inline constexpr const char* kCodeVersion = "0.1.0";

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// 17 significant digits: parses back to the same double.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Non-finite numbers become null in JSON.
inline nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const McEstimate& e) {
    return {{"mean", num(e.mean)},
            {"std_error", num(e.std_error)},
            {"n_samples", e.n_samples},
            {"confidence_radius", num(e.confidence_radius)},
            {"confidence_level", num(e.confidence_level)}};
}

inline nlohmann::json to_json(const std::vector<McEstimate>& v) {
    auto out = nlohmann::json::array();
    for (const auto& e : v) out.push_back(to_json(e));
    return out;
}

inline nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.parameters) params[k] = num(v);
    nlohmann::json j{{"name", r.name},     {"lhs", to_json(r.lhs)},    {"rhs", num(r.rhs)},
                     {"has_rhs", r.has_rhs()}, {"satisfied", r.satisfied()}, {"stable", r.stable()},
                     {"parameters", params}, {"ladder", to_json(r.ladder)}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

/// Rows of (time, statistic, value, std_error). The time column carries the
/// abscissa of the statistic: a time, a step size or a perturbation size.
class CsvSeries {
public:
    void add(double time, const std::string& statistic, double value, double std_error = 0.0) {
        rows_.push_back({time, statistic, value, std_error});
    }
    void add(double time, const std::string& statistic, const McEstimate& e) { add(time, statistic, e.mean, e.std_error); }
    bool empty() const noexcept { return rows_.empty(); }

    std::string str() const {
        std::string out = "time,statistic,value,std_error\n";
        for (const auto& r : rows_) out += g17(r.time) + "," + r.statistic + "," + g17(r.value) + "," + g17(r.se) + "\n";
        return out;
    }

private:
    struct Row {
        double time;
        std::string statistic;
        double value;
        double se;
    };
    std::vector<Row> rows_;
};

/// Whitespace-separated columns with a '#' header line, for gnuplot and friends.
struct PlotData {
    std::string name;
    std::string header;
    std::vector<std::pair<double, double>> rows;

    std::string str() const {
        std::string out = "# " + header + "\n";
        for (const auto& [x, y] : rows) out += g17(x) + " " + g17(y) + "\n";
        return out;
    }
};

/// Everything an experiment produces. Filled incrementally so a failure
/// still leaves the finished parts on disk.
struct Artifacts {
    nlohmann::json report = nlohmann::json::object();
    CsvSeries series;
    std::vector<PlotData> plots;
    /// Extra files (name, contents).
    std::vector<std::pair<std::string, std::string>> files;

    PlotData& plot(const std::string& name, const std::string& header) {
        plots.push_back({name, header, {}});
        return plots.back();
    }
};

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
    os << contents;
    if (!os) throw ConfigError("failed writing " + path.string());
}

/// Writes the artifacts into `dir` and returns the file names, in write order.
inline std::vector<std::string> flush_artifacts(const Artifacts& a, const std::filesystem::path& dir) {
    std::vector<std::string> names;
    auto put = [&](const std::string& name, const std::string& contents) {
        write_file(dir / name, contents);
        names.push_back(name);
    };
    put("report.json", a.report.dump(2) + "\n");
    if (!a.series.empty()) put("series.csv", a.series.str());
    for (const auto& p : a.plots) put("plot_" + p.name + ".dat", p.str());
    for (const auto& [name, contents] : a.files) put(name, contents);
    return names;
}

}  // namespace sdde::cli
