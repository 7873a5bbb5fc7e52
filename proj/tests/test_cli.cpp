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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sdde/cli/config.hpp"
#include "sdde/cli/output.hpp"
#include "sdde/cli/runner.hpp"

using namespace sdde;
using namespace sdde::cli;
namespace fs = std::filesystem;

namespace {

json ou_config() {
    return json::parse(R"({
      "experiment": "simulate",
      "grid": {"dim": 1, "delay": 0.25, "horizon": 1.0, "step": 0.0625},
      "coefficients": {"drift": {"id": "ou", "theta": 1.0}, "diffusion": {"id": "identity"},
                       "functional": {"id": "discrete_delay", "c": 0.5}},
      "initial": {"constant": 1.0},
      "mc": {"n_paths": 200, "seed": 4},
      "params": {"checkpoints": 4}
    })");
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(::testing::TempDir()) / ("sdde_cli_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST(CliOutput, Fnv1aKnownValues) {
    EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
    EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
    EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(CliOutput, CsvRoundTripsDoubles) {
    CsvSeries s;
    const double x = 0.1 + 0.2;
    s.add(1.0 / 3.0, "stat", x, 1e-300);
    const std::string text = s.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "time,statistic,value,std_error");
    std::istringstream is(text.substr(text.find('\n') + 1));
    std::string t, name, v, se;
    std::getline(is, t, ',');
    std::getline(is, name, ',');
    std::getline(is, v, ',');
    std::getline(is, se);
    EXPECT_EQ(std::stod(t), 1.0 / 3.0);
    EXPECT_EQ(name, "stat");
    EXPECT_EQ(std::stod(v), x);
    EXPECT_EQ(std::stod(se), 1e-300);
}

TEST(CliValidate, ValidConfigHasNoViolations) {
    const auto v = validate_config(ou_config());
    EXPECT_TRUE(v.ok()) << (v.violations.empty() ? "" : v.violations[0]);
    ASSERT_TRUE(v.experiment);
    EXPECT_EQ(*v.experiment, Experiment::simulate);
}

TEST(CliValidate, ReportsEveryViolation) {
    std::ifstream is(std::string(SDDE_TEST_DATA) + "/invalid_pq.json");
    std::stringstream ss;
    ss << is.rdbuf();
    const auto v = validate_config(parse_document(ss.str()));
    EXPECT_FALSE(v.ok());
    EXPECT_TRUE(mentions(v.violations, "d/p + 2/q = 2 >= 1")) << v.violations.size();
    EXPECT_TRUE(mentions(v.violations, "not a multiple of step"));
    EXPECT_GE(v.violations.size(), 2u);
}

TEST(CliValidate, StrictSchema) {
    auto c = ou_config();
    c["grid"]["colour"] = "blue";
    c["mc"].erase("seed");
    c["coefficients"]["drift"]["theta"] = "fast";
    const auto v = validate_config(c);
    EXPECT_TRUE(mentions(v.violations, "grid.colour: unknown key"));
    EXPECT_TRUE(mentions(v.violations, "mc.seed: missing"));
    EXPECT_TRUE(mentions(v.violations, "coefficients.drift.theta: must be a number"));
    EXPECT_EQ(v.violations.size(), 3u);

    const auto mismatch = validate_config(ou_config(), Experiment::krylov);
    EXPECT_TRUE(mentions(mismatch.violations, "does not match subcommand"));

    auto unused = ou_config();
    unused["experiment"] = "gronwall";
    EXPECT_TRUE(mentions(validate_config(unused).violations, "grid: section is not used"));
}

TEST(CliValidate, CrossFieldRanges) {
    auto c = ou_config();
    c["experiment"] = "verify-bound";
    c["coefficients"]["drift"] = {{"id", "zero"}};
    c["coefficients"]["functional"] = {{"id", "zero"}};
    c["params"] = {{"bound", "exp_sup_moment"}, {"alpha", 0.6}, {"variant", "driftless_explicit"}, {"checkpoints", 2}};
    EXPECT_TRUE(mentions(validate_config(c).violations, "must stay below 0.5"));
    c["params"]["alpha"] = 0.2;
    EXPECT_TRUE(validate_config(c).ok());

    auto k = ou_config();
    k["experiment"] = "krylov";
    k["params"] = {{"eps", {1.0, 0.5}}, {"p_prime", 1.5}, {"q_prime", 1.5}};
    EXPECT_TRUE(mentions(validate_config(k).violations, "d/p' + 2/q' = 2 >= 2"));
    k["params"]["p_prime"] = 1.0;
    EXPECT_TRUE(mentions(validate_config(k).violations, "params.p_prime: must exceed 1"));
}

TEST(CliValidate, ParseErrorLocation) {
    std::ifstream is(std::string(SDDE_TEST_DATA) + "/unparseable.json");
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        parse_document(ss.str());
        FAIL() << "expected a parse failure";
    } catch (const ParseFailure& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 21u);
    }
}

TEST(CliRun, ZeroCoefficientsGiveConstantPaths) {
    auto c = ou_config();
    c["coefficients"] = json::parse(R"({"drift": {"id": "zero"}, "diffusion": {"id": "zero"}, "functional": {"id": "zero"}})");
    c["initial"]["constant"] = 0.5;
    RunOptions opt;
    opt.out_dir = scratch("zero");
    const auto out = run_experiment(c, Experiment::simulate, opt);
    ASSERT_EQ(out.exit_code, 0) << out.summary.dump();
    const json rep = json::parse(slurp(out.run_dir / "report.json"));
    for (const auto& cp : rep.at("checkpoints")) {
        EXPECT_EQ(cp.at("mean_x1").at("mean").get<double>(), 0.5);
        EXPECT_EQ(cp.at("mean_x1").at("std_error").get<double>(), 0.0);
        EXPECT_EQ(cp.at("mean_sup_sq_norm").at("mean").get<double>(), 0.25);
    }
    const json man = json::parse(slurp(out.run_dir / "manifest.json"));
    EXPECT_EQ(man.at("config_hash"), config_hash(c));
    EXPECT_EQ(out.run_dir.filename().string(), "simulate-" + config_hash(c));
    for (const auto& f : man.at("files")) EXPECT_TRUE(fs::exists(out.run_dir / f.get<std::string>()));
}

TEST(CliRun, DriftlessExpSupBoundSatisfied) {
    auto c = ou_config();
    c["experiment"] = "verify-bound";
    c["coefficients"]["drift"] = {{"id", "zero"}};
    c["coefficients"]["functional"] = {{"id", "zero"}};
    c["grid"]["step"] = 1.0 / 256;
    c["initial"]["constant"] = 0.0;
    c["mc"]["n_paths"] = 20000;
    c["params"] = {{"bound", "exp_sup_moment"}, {"alpha", 0.2}, {"variant", "driftless_explicit"}, {"checkpoints", 4}};
    RunOptions opt;
    opt.out_dir = scratch("expsup");
    const auto out = run_experiment(c, Experiment::verify_bound, opt);
    ASSERT_EQ(out.exit_code, 0) << out.summary.dump();
    const json rep = json::parse(slurp(out.run_dir / "report.json"));
    EXPECT_TRUE(rep.at("bound").at("satisfied").get<bool>());
    EXPECT_NEAR(rep.at("bound").at("rhs").get<double>(), 2.1640, 1e-4);
    EXPECT_TRUE(rep.at("one_sided_oracle").at("exceeded").get<bool>());
    EXPECT_TRUE(fs::exists(out.run_dir / "plot_sup_moment.dat"));
}

TEST(CliRun, RerunIsByteIdentical) {
    auto c = ou_config();
    c["coefficients"]["drift"] = json::parse(R"({"id": "singular", "beta": 0.2, "amplitude": 1.0, "p": 4, "q": 4, "radius": 1.0})");
    RunOptions a, b;
    a.out_dir = scratch("det_a");
    b.out_dir = scratch("det_b");
    a.threads = 1;
    b.threads = 3;
    const auto ra = run_experiment(c, Experiment::simulate, a);
    const auto rb = run_experiment(c, Experiment::simulate, b);
    ASSERT_EQ(ra.exit_code, 0);
    ASSERT_EQ(rb.exit_code, 0);
    for (const char* f : {"series.csv", "report.json", "plot_sup_moment.dat"})
        EXPECT_EQ(slurp(ra.run_dir / f), slurp(rb.run_dir / f)) << f;
    EXPECT_FALSE(slurp(ra.run_dir / "series.csv").empty());
}

TEST(CliRun, SeedOverrideChangesRun) {
    RunOptions a, b;
    a.out_dir = b.out_dir = scratch("seed");
    b.seed = 99;
    const auto ra = run_experiment(ou_config(), Experiment::simulate, a);
    const auto rb = run_experiment(ou_config(), Experiment::simulate, b);
    EXPECT_NE(ra.run_dir, rb.run_dir);
    EXPECT_NE(slurp(ra.run_dir / "series.csv"), slurp(rb.run_dir / "series.csv"));
    EXPECT_EQ(json::parse(slurp(rb.run_dir / "manifest.json")).at("seed"), 99);
}

TEST(CliRun, InvalidConfigExitsTwoWithoutOutputs) {
    auto c = ou_config();
    c["grid"]["delay"] = 0.3;
    RunOptions opt;
    opt.out_dir = scratch("invalid");
    const auto out = run_experiment(c, Experiment::simulate, opt);
    EXPECT_EQ(out.exit_code, 2);
    EXPECT_EQ(out.summary.at("status"), "invalid");
    EXPECT_FALSE(fs::exists(opt.out_dir));
}

TEST(CliRun, ExperimentFailureLeavesRecord) {
    // no window reaches a Lipschitz constant of 1e-6 for the singular drift
    const json c = json::parse(R"({
      "experiment": "zvonkin",
      "grid": {"dim": 1, "delay": 0.5, "horizon": 1.0, "step": 0.015625},
      "coefficients": {"drift": {"id": "singular", "beta": 0.2, "amplitude": 1.0, "p": 4, "q": 4, "radius": 1.0},
                       "diffusion": {"id": "identity"}, "functional": {"id": "zero"}},
      "initial": {"constant": 0.0},
      "mc": {"n_paths": 10, "seed": 1},
      "params": {"nx": 101, "n_time": 32, "halfwidth": "auto", "boundary": "dirichlet", "target": 1e-6,
                 "perturbation": 0.3, "multiplier_c": 1.0}
    })");
    RunOptions opt;
    opt.out_dir = scratch("failure");
    const auto out = run_experiment(c, Experiment::zvonkin, opt);
    EXPECT_EQ(out.exit_code, 1);
    const json fail = json::parse(slurp(out.run_dir / "failure.json"));
    EXPECT_EQ(fail.at("error_type"), "WindowNotFoundError");
    // the PDE part finished before the failure
    EXPECT_TRUE(fs::exists(out.run_dir / "pde_grid.txt"));
    EXPECT_TRUE(fs::exists(out.run_dir / "plot_lipschitz.dat"));
    EXPECT_EQ(json::parse(slurp(out.run_dir / "report.json")).at("status"), "failed");
    std::istringstream grid(slurp(out.run_dir / "pde_grid.txt"));
    EXPECT_EQ(read_grid_file(grid).grid().nx, 101);
}

TEST(CliRun, MaximalAndGronwallReports) {
    RunOptions opt;
    opt.out_dir = scratch("misc");
    const json m = json::parse(R"({"experiment": "maximal",
      "params": {"function": "smooth_ramp", "dim": 1, "halfwidth": 4.0, "n": 400, "sample_halfwidth": 1.0,
                 "pairs": 500, "ladder": "dense", "lp": [2], "seed": 3}})");
    const auto rm = run_experiment(m, Experiment::maximal, opt);
    ASSERT_EQ(rm.exit_code, 0) << rm.summary.dump();
    const json rep = json::parse(slurp(rm.run_dir / "report.json"));
    EXPECT_TRUE(rep.at("interval_oracle").at("within_one_cell").get<bool>());
    EXPECT_NEAR(rep.at("fitted_constant").get<double>(), 0.5, 1e-9);

    const json g = json::parse(R"({"experiment": "gronwall", "mc": {"n_paths": 1, "seed": 0},
      "params": {"process": "deterministic", "C": 2.0, "K": 1.0, "p": 0.5, "T": 1.0, "step": 0.0625, "scale": 10.0}})");
    const auto rg = run_experiment(g, Experiment::gronwall, opt);
    ASSERT_EQ(rg.exit_code, 0) << rg.summary.dump();
    const json gr = json::parse(slurp(rg.run_dir / "report.json"));
    EXPECT_NEAR(gr.at("sup_moment").at("mean").get<double>(), gr.at("reference").get<double>(), 1e-12);
    EXPECT_LT(gr.at("scaling_error").get<double>(), 1e-12);
}
