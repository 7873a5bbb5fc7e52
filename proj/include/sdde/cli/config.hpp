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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdde/coefficients/catalog.hpp"
#include "sdde/core/conditions.hpp"
#include "sdde/core/errors.hpp"
#include "sdde/core/mc_estimate.hpp"
#include "sdde/core/path.hpp"
#include "sdde/core/time_grid.hpp"
#include "sdde/estimates/moments.hpp"
#include "sdde/sde/engine.hpp"

namespace sdde::cli {

using json = nlohmann::json;

enum class Experiment { simulate, verify_bound, stability, zvonkin, maximal, gronwall, krylov };

inline const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
    static const std::vector<std::pair<Experiment, std::string>> names{
        {Experiment::simulate, "simulate"}, {Experiment::verify_bound, "verify-bound"},
        {Experiment::stability, "stability"}, {Experiment::zvonkin, "zvonkin"},
        {Experiment::maximal, "maximal"},   {Experiment::gronwall, "gronwall"},
        {Experiment::krylov, "krylov"}};
    return names;
}

inline std::string to_string(Experiment e) {
    for (const auto& [k, n] : experiment_names())
        if (k == e) return n;
    return "unknown";
}

inline std::optional<Experiment> parse_experiment(const std::string& s) {
    for (const auto& [k, n] : experiment_names())
        if (n == s) return k;
    return std::nullopt;
}

/// Unparseable document; line and column are 1-based.
class ParseFailure : public Error {
public:
    ParseFailure(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

inline json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is one past the offending character
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseFailure(e.what(), line, column);
    }
}

// ---- schema checking --------------------------------------------------------

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Collects every violation instead of stopping at the first.
class Checker {
public:
    std::vector<std::string> violations;

    void fail(const std::string& path, const std::string& msg) { violations.push_back(path + ": " + msg); }

    /// Flags keys outside `allowed`.
    void only(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
        for (const auto& [k, v] : obj.items())
            if (!allowed.count(k)) fail(path + "." + k, "unknown key");
    }

    const json* section(const json& obj, const std::string& path, const std::string& key, bool required) {
        if (!obj.contains(key)) {
            if (required) fail(path.empty() ? key : path + "." + key, "missing required section");
            return nullptr;
        }
        const json& v = obj.at(key);
        if (!v.is_object()) {
            fail(path.empty() ? key : path + "." + key, "must be an object");
            return nullptr;
        }
        return &v;
    }

    std::optional<double> number(const json& obj, const std::string& path, const std::string& key, bool required = true) {
        if (!obj.contains(key)) {
            if (required) fail(path + "." + key, "missing required number");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "must be a number");
            return std::nullopt;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(path + "." + key, "must be finite");
            return std::nullopt;
        }
        return x;
    }

    std::optional<double> positive(const json& obj, const std::string& path, const std::string& key, bool required = true) {
        auto x = number(obj, path, key, required);
        if (x && !(*x > 0.0)) {
            fail(path + "." + key, "must be positive, got " + fmt(*x));
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::int64_t> integer(const json& obj, const std::string& path, const std::string& key,
                                        std::int64_t min, bool required = true) {
        if (!obj.contains(key)) {
            if (required) fail(path + "." + key, "missing required integer");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(path + "." + key, "must be an integer");
            return std::nullopt;
        }
        const auto x = v.get<std::int64_t>();
        if (x < min) {
            fail(path + "." + key, "must be at least " + std::to_string(min));
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::uint64_t> seed(const json& obj, const std::string& path, const std::string& key) {
        if (!obj.contains(key)) {
            fail(path + "." + key, "missing required integer");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail(path + "." + key, "must be a nonnegative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    std::optional<std::string> text(const json& obj, const std::string& path, const std::string& key,
                                    const std::set<std::string>& choices, bool required = true) {
        if (!obj.contains(key)) {
            if (required) fail(path + "." + key, "missing required string");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_string()) {
            fail(path + "." + key, "must be a string");
            return std::nullopt;
        }
        auto s = v.get<std::string>();
        if (!choices.empty() && !choices.count(s)) {
            std::string list;
            for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
            fail(path + "." + key, "unknown value '" + s + "' (expected one of " + list + ")");
            return std::nullopt;
        }
        return s;
    }

    std::optional<bool> flag(const json& obj, const std::string& path, const std::string& key, bool required = true) {
        if (!obj.contains(key)) {
            if (required) fail(path + "." + key, "missing required boolean");
            return std::nullopt;
        }
        if (!obj.at(key).is_boolean()) {
            fail(path + "." + key, "must be a boolean");
            return std::nullopt;
        }
        return obj.at(key).get<bool>();
    }

    std::optional<std::vector<double>> numbers(const json& obj, const std::string& path, const std::string& key,
                                               bool required = true) {
        if (!obj.contains(key)) {
            if (required) fail(path + "." + key, "missing required array");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_array() || v.empty()) {
            fail(path + "." + key, "must be a nonempty array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) {
                fail(path + "." + key, "must contain finite numbers only");
                return std::nullopt;
            }
            out.push_back(e.get<double>());
        }
        return out;
    }
};

// n * step == length up to rounding
inline bool is_multiple(double length, double step) {
    const double r = length / step;
    return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

}  // namespace detail

/// Sections each experiment reads. Sections outside the set are violations.
struct SectionUse {
    bool grid = false;
    bool coefficients = false;
    bool initial = false;
    bool mc_paths = false;
};

inline SectionUse sections_for(Experiment e, const json& params) {
    switch (e) {
        case Experiment::simulate:
        case Experiment::stability:
        case Experiment::krylov:
        case Experiment::zvonkin: return {true, true, true, true};
        case Experiment::verify_bound: {
            const bool khas = params.is_object() && params.value("bound", std::string()) == "khasminskii";
            return khas ? SectionUse{false, false, false, true} : SectionUse{true, true, true, true};
        }
        case Experiment::maximal: return {false, false, false, false};
        case Experiment::gronwall: return {false, false, false, true};
    }
    return {};
}

struct ValidationResult {
    std::optional<Experiment> experiment;
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

struct GridFacts {
    int d = 1;
    double delay = 0.0, horizon = 0.0, step = 0.0;
    bool ok = false;
};

inline GridFacts check_grid(Checker& c, const json& g) {
    GridFacts f;
    c.only(g, "grid", {"dim", "delay", "horizon", "step"});
    const auto d = c.integer(g, "grid", "dim", 1);
    const auto r = c.positive(g, "grid", "delay");
    const auto T = c.positive(g, "grid", "horizon");
    const auto h = c.positive(g, "grid", "step");
    if (d && *d > 2) c.fail("grid.dim", "only d = 1 or d = 2 is supported");
    if (r && h && !is_multiple(*r, *h)) c.fail("grid.delay", "delay " + fmt(*r) + " is not a multiple of step " + fmt(*h));
    if (T && h && !is_multiple(*T, *h)) c.fail("grid.horizon", "horizon " + fmt(*T) + " is not a multiple of step " + fmt(*h));
    if (d && *d <= 2) f.d = static_cast<int>(*d);
    if (d && r && T && h && *d <= 2 && is_multiple(*r, *h) && is_multiple(*T, *h)) {
        f = {static_cast<int>(*d), *r, *T, *h, true};
    }
    return f;
}

inline void check_drift(Checker& c, const json& b, int d) {
    const std::string P = "coefficients.drift";
    const auto id = c.text(b, P, "id", {"zero", "constant", "ou", "box", "singular"});
    if (!id) return;
    if (*id == "zero" || *id == "box") {
        c.only(b, P, {"id"});
    } else if (*id == "constant") {
        c.only(b, P, {"id", "value"});
        if (auto v = c.numbers(b, P, "value"); v && static_cast<int>(v->size()) != d)
            c.fail(P + ".value", "needs " + std::to_string(d) + " components");
    } else if (*id == "ou") {
        c.only(b, P, {"id", "theta"});
        c.number(b, P, "theta");
    } else {
        c.only(b, P, {"id", "beta", "amplitude", "p", "q", "radius"});
        const auto beta = c.number(b, P, "beta");
        c.number(b, P, "amplitude");
        const auto p = c.positive(b, P, "p");
        const auto q = c.positive(b, P, "q");
        c.positive(b, P, "radius");
        if (beta && !(*beta > 0.0 && *beta < 1.0)) c.fail(P + ".beta", "must lie in (0, 1)");
        if (p && *p <= 1.0) c.fail(P + ".p", "must exceed 1");
        if (q && *q <= 1.0) c.fail(P + ".q", "must exceed 1");
        if (p && q && *p > 1.0 && *q > 1.0) {
            const double e = pq_exponent(d, *p, *q);
            if (!validate_pq(d, *p, *q, 1.0))
                c.fail(P, "d/p + 2/q = " + fmt(e) + " >= 1; the drift integrability condition fails");
        }
        if (beta && p && !(*beta * *p < d))
            c.fail(P, "beta * p = " + fmt(*beta * *p) + " >= d; |b| is not p-integrable");
    }
}

inline void check_diffusion(Checker& c, const json& s, int d) {
    const std::string P = "coefficients.diffusion";
    const auto id = c.text(s, P, "id", {"identity", "scalar", "diag", "sqrt", "zero"});
    if (!id) return;
    if (*id == "identity" || *id == "zero") {
        c.only(s, P, {"id"});
    } else if (*id == "sqrt") {
        c.only(s, P, {"id"});
        if (d != 1) c.fail(P, "sqrt diffusion is one-dimensional");
    } else if (*id == "scalar") {
        c.only(s, P, {"id", "c"});
        if (auto v = c.number(s, P, "c"); v && *v == 0.0) c.fail(P + ".c", "must be nonzero");
    } else {
        c.only(s, P, {"id", "values", "kappa"});
        const auto v = c.numbers(s, P, "values");
        const auto k = c.positive(s, P, "kappa");
        if (v && static_cast<int>(v->size()) != d) c.fail(P + ".values", "needs " + std::to_string(d) + " entries");
        if (k && *k < 1.0) c.fail(P + ".kappa", "must be at least 1");
        if (v && k)
            for (double x : *v)
                if (!(x * x >= 1.0 / *k && x * x <= *k)) c.fail(P + ".values", "entry " + fmt(x) + " breaks ellipticity for kappa " + fmt(*k));
    }
}

inline void check_functional(Checker& c, const json& v) {
    const std::string P = "coefficients.functional";
    const auto id = c.text(v, P, "id", {"zero", "discrete_delay", "tanh_delay", "distributed_delay", "quadratic"});
    if (!id) return;
    if (*id == "zero" || *id == "quadratic") {
        c.only(v, P, {"id"});
    } else {
        c.only(v, P, {"id", "c"});
        c.number(v, P, "c");
    }
}

inline void check_params(Checker& c, Experiment e, const json& p, const GridFacts& g) {
    const std::string P = "params";
    switch (e) {
        case Experiment::simulate: {
            c.only(p, P, {"checkpoints", "explosion_level", "drift_cutoff_level"});
            c.integer(p, P, "checkpoints", 1);
            c.positive(p, P, "explosion_level", false);
            c.integer(p, P, "drift_cutoff_level", 1, false);
            break;
        }
        case Experiment::verify_bound: {
            const auto bound = c.text(p, P, "bound", {"exp_sup_moment", "girsanov", "holder", "khasminskii"});
            if (!bound) break;
            if (*bound == "exp_sup_moment") {
                c.only(p, P, {"bound", "alpha", "variant", "checkpoints"});
                const auto a = c.number(p, P, "alpha");
                c.text(p, P, "variant", {"driftless_explicit", "singular_drift", "functional_drift"});
                c.integer(p, P, "checkpoints", 1);
                if (a && *a < 0.0) c.fail(P + ".alpha", "must be nonnegative");
            } else if (*bound == "girsanov") {
                c.only(p, P, {"bound", "payoff", "threshold", "checkpoints"});
                const auto pay = c.text(p, P, "payoff", {"terminal", "terminal_indicator"});
                if (pay && *pay == "terminal_indicator") c.number(p, P, "threshold");
                else if (p.contains("threshold")) c.fail(P + ".threshold", "only used by the terminal_indicator payoff");
                c.integer(p, P, "checkpoints", 1);
            } else if (*bound == "holder") {
                c.only(p, P, {"bound", "alphas", "factor", "levels", "driftless"});
                const auto as = c.numbers(p, P, "alphas");
                const auto f = c.integer(p, P, "factor", 2);
                const auto l = c.integer(p, P, "levels", 2);
                c.flag(p, P, "driftless");
                if (as)
                    for (double a : *as)
                        if (!(a > 0.0 && a < 1.0)) c.fail(P + ".alphas", "entry " + fmt(a) + " outside (0, 1)");
                if (f && l && g.ok) {
                    const double coarse = g.step * std::pow(static_cast<double>(*f), static_cast<double>(*l - 1));
                    if (!is_multiple(g.delay, coarse) || !is_multiple(g.horizon, coarse))
                        c.fail(P + ".factor", "coarsest step " + fmt(coarse) + " does not divide the delay and horizon");
                }
            } else {
                c.only(p, P, {"bound", "c", "eps", "T", "step"});
                const auto cc = c.number(p, P, "c");
                c.positive(p, P, "eps");
                const auto T = c.positive(p, P, "T");
                const auto h = c.positive(p, P, "step");
                if (cc && T && !(*cc >= 0.0 && *cc * *T < 1.0)) c.fail(P + ".c", "need 0 <= c T < 1");
                if (T && h && !is_multiple(*T, *h)) c.fail(P + ".T", "not a multiple of step");
            }
            break;
        }
        case Experiment::stability: {
            c.only(p, P, {"gamma", "eps", "direction"});
            c.positive(p, P, "gamma");
            c.number(p, P, "direction");
            if (auto eps = c.numbers(p, P, "eps")) {
                std::set<double> distinct;
                for (double x : *eps)
                    if (x > 0.0) distinct.insert(x);
                    else if (x < 0.0) c.fail(P + ".eps", "entries must be nonnegative");
                if (distinct.size() < 2) c.fail(P + ".eps", "needs two distinct positive values");
            }
            break;
        }
        case Experiment::krylov: {
            c.only(p, P, {"eps", "p_prime", "q_prime"});
            const auto eps = c.numbers(p, P, "eps");
            const auto pp = c.positive(p, P, "p_prime");
            const auto qq = c.positive(p, P, "q_prime");
            if (eps)
                for (double x : *eps)
                    if (!(x > 0.0)) c.fail(P + ".eps", "entries must be positive");
            if (pp && *pp <= 1.0) c.fail(P + ".p_prime", "must exceed 1");
            if (qq && *qq <= 1.0) c.fail(P + ".q_prime", "must exceed 1");
            if (pp && qq && *pp > 1.0 && *qq > 1.0 && !validate_pq(g.d, *pp, *qq, 2.0))
                c.fail(P, "d/p' + 2/q' = " + fmt(pq_exponent(g.d, *pp, *qq)) + " >= 2; the test-function condition fails");
            break;
        }
        case Experiment::zvonkin: {
            c.only(p, P, {"nx", "n_time", "halfwidth", "boundary", "target", "perturbation", "multiplier_c"});
            c.integer(p, P, "nx", 3);
            c.integer(p, P, "n_time", 1);
            if (p.contains("halfwidth") && !(p.at("halfwidth").is_string() && p.at("halfwidth") == "auto"))
                c.positive(p, P, "halfwidth");
            else if (!p.contains("halfwidth"))
                c.fail(P + ".halfwidth", "missing (a positive number or \"auto\")");
            c.text(p, P, "boundary", {"dirichlet", "neumann"});
            if (auto t = c.number(p, P, "target"); t && !(*t > 0.0 && *t < 1.0)) c.fail(P + ".target", "must lie in (0, 1)");
            c.number(p, P, "perturbation");
            c.positive(p, P, "multiplier_c");
            break;
        }
        case Experiment::maximal: {
            c.only(p, P, {"function", "dim", "halfwidth", "n", "sample_halfwidth", "pairs", "ladder", "lp", "seed"});
            c.text(p, P, "function", {"constant", "gaussian_bump", "smooth_ramp"});
            const auto d = c.integer(p, P, "dim", 1);
            const auto L = c.positive(p, P, "halfwidth");
            c.integer(p, P, "n", 2);
            const auto s = c.positive(p, P, "sample_halfwidth");
            c.integer(p, P, "pairs", 1);
            c.text(p, P, "ladder", {"dense", "geometric"});
            if (auto lp = c.numbers(p, P, "lp"))
                for (double x : *lp)
                    if (!(x > 1.0)) c.fail(P + ".lp", "exponents must exceed 1");
            c.seed(p, P, "seed");
            if (d && *d > 2) c.fail(P + ".dim", "only d = 1 or d = 2 is supported");
            if (d && *d == 2 && p.value("function", std::string()) == "smooth_ramp")
                c.fail(P + ".function", "smooth_ramp is one-dimensional");
            if (L && s && *s > *L) c.fail(P + ".sample_halfwidth", "exceeds the grid halfwidth");
            break;
        }
        case Experiment::gronwall: {
            c.only(p, P, {"process", "C", "K", "p", "T", "step", "scale"});
            c.text(p, P, "process", {"deterministic", "geometric", "reflected"});
            c.positive(p, P, "C");
            if (auto K = c.number(p, P, "K"); K && *K < 0.0) c.fail(P + ".K", "must be nonnegative");
            if (auto q = c.number(p, P, "p"); q && !(*q > 0.0 && *q < 1.0)) c.fail(P + ".p", "must lie in (0, 1)");
            const auto T = c.positive(p, P, "T");
            const auto h = c.positive(p, P, "step");
            c.positive(p, P, "scale");
            if (T && h && (!is_multiple(*T, *h) || std::llround(*T / *h) % 4 != 0))
                c.fail(P + ".step", "T / step must be an integer divisible by 4");
            break;
        }
    }
}

}  // namespace detail

// ---- building library objects from a validated document --------------------

inline TimeGrid build_grid(const json& cfg) {
    const json& g = cfg.at("grid");
    return TimeGrid::make(g.at("dim").get<int>(), g.at("delay").get<double>(), g.at("horizon").get<double>(),
                          g.at("step").get<double>());
}

inline CoefficientSet build_coefficients(const json& cfg) {
    const int d = cfg.at("grid").at("dim").get<int>();
    const double delay = cfg.at("grid").at("delay").get<double>();
    const json& c = cfg.at("coefficients");
    const json& b = c.at("drift");
    const json& s = c.at("diffusion");
    const json& v = c.at("functional");

    DriftSpec drift;
    const auto bid = b.at("id").get<std::string>();
    if (bid == "zero") drift = catalog::zero_drift(d);
    else if (bid == "constant") drift = catalog::constant_drift(b.at("value").get<std::vector<double>>());
    else if (bid == "ou") drift = catalog::ou_drift(d, b.at("theta").get<double>());
    else if (bid == "box") drift = catalog::box_drift(d);
    else
        drift = catalog::singular_drift(d, b.at("beta").get<double>(), b.at("amplitude").get<double>(),
                                        b.at("p").get<double>(), b.at("q").get<double>(), b.at("radius").get<double>());

    DiffusionSpec sigma;
    const auto sid = s.at("id").get<std::string>();
    if (sid == "identity") sigma = catalog::identity_diffusion(d);
    else if (sid == "zero") sigma = catalog::zero_diffusion(d);
    else if (sid == "sqrt") sigma = catalog::sqrt_diffusion();
    else if (sid == "scalar") sigma = catalog::scalar_diffusion(d, s.at("c").get<double>());
    else sigma = catalog::diag_diffusion(s.at("values").get<std::vector<double>>(), s.at("kappa").get<double>());

    FunctionalDriftSpec fun;
    const auto vid = v.at("id").get<std::string>();
    if (vid == "zero") fun = catalog::zero_functional(d);
    else if (vid == "quadratic") fun = catalog::quadratic_functional(d);
    else if (vid == "discrete_delay") fun = catalog::discrete_delay(d, v.at("c").get<double>());
    else if (vid == "tanh_delay") fun = catalog::tanh_delay(d, v.at("c").get<double>());
    else fun = catalog::distributed_delay(d, v.at("c").get<double>(), delay);

    return catalog::make_set(std::move(drift), std::move(sigma), std::move(fun));
}

inline PathSegment build_initial(const json& cfg, const TimeGrid& grid) {
    const json& v = cfg.at("initial").at("constant");
    if (v.is_number()) return PathSegment::constant(grid, v.get<double>());
    const auto x = v.get<std::vector<double>>();
    return PathSegment::constant(grid, std::span<const double>(x));
}

inline SimulationConfig build_simulation(const json& cfg) {
    const TimeGrid g = build_grid(cfg);
    SimulationConfig sc{g, build_coefficients(cfg), build_initial(cfg, g), cfg.at("mc").at("seed").get<std::uint64_t>(),
                        std::nullopt, std::nullopt};
    if (cfg.contains("params")) {
        const json& p = cfg.at("params");
        if (p.contains("explosion_level")) sc.explosion_level = p.at("explosion_level").get<double>();
        if (p.contains("drift_cutoff_level")) sc.drift_cutoff_level = p.at("drift_cutoff_level").get<int>();
    }
    return sc;
}

inline double confidence_level(const json& cfg) {
    const json& mc = cfg.at("mc");
    return mc.contains("confidence") ? mc.at("confidence").get<double>() : kThreeSigmaLevel;
}

/// Every violated constraint of a config document. `expected` is the
/// subcommand the document is run under, if any.
inline ValidationResult validate_config(const json& cfg, std::optional<Experiment> expected = std::nullopt) {
    ValidationResult out;
    detail::Checker c;
    if (!cfg.is_object()) {
        out.violations.push_back("document: top level must be an object");
        return out;
    }
    c.only(cfg, "document", {"experiment", "grid", "coefficients", "initial", "mc", "params"});
    const auto name = c.text(cfg, "document", "experiment", {});
    if (name) {
        out.experiment = parse_experiment(*name);
        if (!out.experiment) c.fail("document.experiment", "unknown experiment '" + *name + "'");
        else if (expected && *out.experiment != *expected)
            c.fail("document.experiment", "'" + *name + "' does not match subcommand '" + to_string(*expected) + "'");
    }
    if (!out.experiment) {
        out.violations = std::move(c.violations);
        return out;
    }
    const Experiment e = *out.experiment;
    const json empty = json::object();
    const json* params = c.section(cfg, "", "params", true);
    const SectionUse use = sections_for(e, params ? *params : empty);

    auto unused = [&](const char* key, bool used) {
        if (!used && cfg.contains(key)) c.fail(key, "section is not used by experiment '" + to_string(e) + "'");
    };
    unused("grid", use.grid);
    unused("coefficients", use.coefficients);
    unused("initial", use.initial);

    detail::GridFacts g;
    if (use.grid)
        if (const json* gs = c.section(cfg, "", "grid", true)) g = detail::check_grid(c, *gs);
    if (use.coefficients) {
        if (const json* cs = c.section(cfg, "", "coefficients", true)) {
            c.only(*cs, "coefficients", {"drift", "diffusion", "functional"});
            const int d = g.d;
            if (const json* b = c.section(*cs, "coefficients", "drift", true)) detail::check_drift(c, *b, d);
            if (const json* s = c.section(*cs, "coefficients", "diffusion", true)) detail::check_diffusion(c, *s, d);
            if (const json* v = c.section(*cs, "coefficients", "functional", true)) detail::check_functional(c, *v);
        }
    }
    if (use.initial) {
        if (const json* is = c.section(cfg, "", "initial", true)) {
            c.only(*is, "initial", {"constant"});
            if (!is->contains("constant")) {
                c.fail("initial.constant", "missing (a number or one value per dimension)");
            } else {
                const json& v = is->at("constant");
                const bool vector_ok = v.is_array() && g.ok && static_cast<int>(v.size()) == g.d &&
                                       std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
                if (!v.is_number() && !vector_ok)
                    c.fail("initial.constant", "must be a number or an array of " + std::to_string(g.d) + " numbers");
            }
        }
    }
    if (use.mc_paths) {
        if (const json* mc = c.section(cfg, "", "mc", true)) {
            c.only(*mc, "mc", {"n_paths", "seed", "confidence"});
            c.integer(*mc, "mc", "n_paths", 1);
            c.seed(*mc, "mc", "seed");
            if (auto l = c.number(*mc, "mc", "confidence", false); l && !(*l > 0.0 && *l < 1.0))
                c.fail("mc.confidence", "must lie in (0, 1)");
        }
    } else {
        unused("mc", false);
    }
    if (params) detail::check_params(c, e, *params, g);

    // Cross-field checks that need built objects.
    if (c.violations.empty() && use.coefficients) {
        try {
            const SimulationConfig sc = build_simulation(cfg);
            sc.validate();
            if (e == Experiment::verify_bound && params->at("bound") == "exp_sup_moment") {
                const auto variant = params->at("variant").get<std::string>();
                const MomentVariant v = variant == "driftless_explicit" ? MomentVariant::driftless_explicit
                                        : variant == "singular_drift"   ? MomentVariant::singular_drift
                                                                        : MomentVariant::functional_drift;
                const double a = params->at("alpha").get<double>();
                const double lim = moment_alpha_limit(v, g.d, sc.coefficients.diffusion.kappa, g.horizon);
                if (!(a < lim))
                    c.fail("params.alpha", "alpha = " + detail::fmt(a) + " must stay below " + detail::fmt(lim) +
                                               " for this variant, d, kappa and T");
            }
            if (e == Experiment::zvonkin && g.d > 2) c.fail("grid.dim", "the PDE solver supports d <= 2");
        } catch (const Error& err) {
            c.fail("coefficients", err.what());
        }
    }
    out.violations = std::move(c.violations);
    return out;
}

}  // namespace sdde::cli
