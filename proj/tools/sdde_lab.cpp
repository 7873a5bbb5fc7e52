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

// sdde_lab: run and validate SDDE experiments from JSON config files.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sdde/cli/config.hpp"
#include "sdde/cli/runner.hpp"

namespace {

using sdde::cli::json;

// Exit 2 with a JSON error for anything that stops before the experiment starts.
int fail_early(const json& j) {
    std::cout << j.dump(2) << "\n";
    return 2;
}

std::optional<json> load(const std::string& path, int& code) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        code = fail_early({{"status", "io_error"}, {"message", "cannot read " + path}});
        return std::nullopt;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return sdde::cli::parse_document(ss.str());
    } catch (const sdde::cli::ParseFailure& e) {
        code = fail_early({{"status", "parse_error"}, {"file", path}, {"line", e.line()}, {"column", e.column()},
                           {"message", e.what()}});
        return std::nullopt;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SDDE simulation and verification lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "runs";
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;

    struct Entry {
        sdde::cli::Experiment kind;
        CLI::App* cmd;
    };
    std::vector<Entry> runs;
    const std::pair<sdde::cli::Experiment, const char*> help[] = {
        {sdde::cli::Experiment::simulate, "simulate an ensemble and report moment curves"},
        {sdde::cli::Experiment::verify_bound, "check an exponential-moment, Girsanov, Hoelder or Khasminskii bound"},
        {sdde::cli::Experiment::stability, "fit the stability slope over a perturbation ladder"},
        {sdde::cli::Experiment::zvonkin, "solve the backward PDE, find the contraction window, run coupled pairs"},
        {sdde::cli::Experiment::maximal, "Hardy-Littlewood maximal-function checks"},
        {sdde::cli::Experiment::gronwall, "stochastic Gronwall harness"},
        {sdde::cli::Experiment::krylov, "occupation estimates for a shrinking family"},
    };
    for (const auto& [kind, text] : help) {
        CLI::App* cmd = app.add_subcommand(sdde::cli::to_string(kind), text);
        cmd->add_option("--config", config_path, "JSON config file")->required();
        cmd->add_option("--out", out_dir, "output root; runs land in <out>/<experiment>-<hash>");
        cmd->add_option("--threads", threads, "worker threads (default: SDDE_LAB_THREADS, then all cores)");
        cmd->add_option("--seed", seed, "master seed, overrides the config");
        runs.push_back({kind, cmd});
    }
    CLI::App* validate = app.add_subcommand("validate", "report every violated constraint without running");
    validate->add_option("--config", config_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    int code = 0;
    const auto cfg = load(config_path, code);
    if (!cfg) return code;

    if (validate->parsed()) {
        const auto v = sdde::cli::validate_config(*cfg);
        json out{{"valid", v.ok()}, {"violations", v.violations}};
        if (v.experiment) out["experiment"] = sdde::cli::to_string(*v.experiment);
        std::cout << out.dump(2) << "\n";
        return v.ok() ? 0 : 2;
    }
    for (const auto& r : runs) {
        if (!r.cmd->parsed()) continue;
        sdde::cli::RunOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        opt.seed = seed;
        try {
            const auto outcome = sdde::cli::run_experiment(*cfg, r.kind, opt);
            std::cout << outcome.summary.dump(2) << "\n";
            return outcome.exit_code;
        } catch (const std::exception& e) {
            // output directory trouble and the like
            std::cout << json{{"status", "failed"}, {"error_type", sdde::cli::error_type(e)}, {"message", e.what()}}.dump(2)
                      << "\n";
            return 1;
        }
    }
    return 0;
}
