// swarmcov: coverage properties, swarm-size design, MC verification and
// parameter sweeps from the command line.

#include "report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <map>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

using nlohmann::ordered_json;
using namespace swarmcov;

namespace {

enum Exit { ok = 0, verify_failed = 1, invalid = 2, infeasible = 3 };

struct Options {
    double s = 1.0;
    double d = 1.0;
    double D = 0.0;
    double n = 1.0;
    std::string mode = "ct";
    std::string parent = "uniform";
    std::string methods;
    std::size_t trials = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    double tol = 1e-6;
    double sigma = 4.0;
    bool cmp_pmf = false;
    std::string config;
    std::string out;
    // design
    std::string property;
    double target = 0.0;
    // sweep
    std::string vary = "n";
    double from = 1.0;
    double to = 1.0;
    double step = 1.0;
};

/// Registers the shared flags. Returns the option handles so file values can
/// be overridden only by flags that were actually given.
std::map<std::string, CLI::Option*> add_common(CLI::App& cmd, Options& o, bool with_n)
{
    std::map<std::string, CLI::Option*> h;
    h["s"] = cmd.add_option("--s", o.s, "boundary length");
    h["d"] = cmd.add_option("--d", o.d, "sensing/communication range");
    h["D"] = cmd.add_option("--D", o.D, "robot diameter");
    if (with_n) {
        h["n"] = cmd.add_option("--n", o.n, "swarm size");
    }
    h["mode"] = cmd.add_option("--mode", o.mode, "ct, cf or cf_fsa");
    h["parent"] = cmd.add_option("--parent", o.parent,
                                 "uniform, triangular[:left|:right], truncated-gaussian:mu,sigma");
    h["config"] = cmd.add_option("--config", o.config, "JSON scenario file; flags override it");
    h["out"] = cmd.add_option("--out", o.out, "write output here instead of stdout");
    return h;
}

void add_mc(CLI::App& cmd, Options& o, std::map<std::string, CLI::Option*>& h)
{
    h["trials"] = cmd.add_option("--trials", o.trials, "Monte Carlo trials");
    h["seed"] = cmd.add_option("--seed", o.seed, "Monte Carlo seed");
    h["workers"] = cmd.add_option("--workers", o.workers, "worker threads (0 = all cores)");
}

/// Applies a --config document: keys at top level or under "scenario".
void apply_config(Options& o, const std::map<std::string, CLI::Option*>& given)
{
    if (o.config.empty()) {
        return;
    }
    std::ifstream in(o.config);
    require(in.good(), "cannot read config file '" + o.config + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw validation_error("config file is not valid JSON: " + std::string(e.what()));
    }
    const auto flag_given = [&](const std::string& k) {
        const auto it = given.find(k);
        return it != given.end() && it->second->count() > 0;
    };
    const auto take = [&](const ordered_json& src, const std::string& key, auto& field) {
        if (src.contains(key) && !flag_given(key)) {
            try {
                src.at(key).get_to(field);
            } catch (const std::exception&) {
                throw validation_error("config key '" + key + "' has the wrong type");
            }
        }
    };
    const ordered_json& scn = j.contains("scenario") ? j["scenario"] : j;
    take(scn, "s", o.s);
    take(scn, "d", o.d);
    take(scn, "D", o.D);
    take(scn, "n", o.n);
    take(scn, "mode", o.mode);
    take(scn, "parent", o.parent);
    take(j, "trials", o.trials);
    take(j, "seed", o.seed);
    take(j, "workers", o.workers);
    take(j, "property", o.property);
    take(j, "target", o.target);
    take(j, "tol", o.tol);
    take(j, "vary", o.vary);
    take(j, "from", o.from);
    take(j, "to", o.to);
    take(j, "step", o.step);
    if (j.contains("methods") && !flag_given("methods")) {
        if (j["methods"].is_array()) {
            std::string joined;
            for (const auto& m : j["methods"]) {
                joined += (joined.empty() ? "" : ",") + m.get<std::string>();
            }
            o.methods = joined;
        } else {
            take(j, "methods", o.methods);
        }
    }
}

std::string default_methods(report::Mode m) { return m == report::Mode::cf_fsa ? "fsa" : "exact"; }

report::Request make_request(const Options& o)
{
    report::Request r;
    r.mode = report::parse_mode(o.mode);
    r.scn = {o.s, o.d, o.D, o.n};
    r.parent = o.parent;
    r.methods = report::parse_methods(o.methods.empty() ? default_methods(r.mode) : o.methods);
    r.cmp_pmf = o.cmp_pmf;
    r.mc = {o.trials, o.seed, o.workers};
    return r;
}

ordered_json scenario_json(const Options& o, bool with_n = true)
{
    ordered_json j{{"s", o.s}, {"d", o.d}, {"D", o.D}};
    if (with_n) {
        j["n"] = o.n;
    }
    j["mode"] = o.mode;
    j["parent"] = o.parent;
    return j;
}

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

ordered_json manifest(const std::string& command, const Options& o, const ordered_json& scenario,
                      const std::vector<std::string>& methods, bool uses_mc, const Clock& clock)
{
    ordered_json m{{"command", command}, {"tool", "swarmcov"}, {"tool_version", version}};
    m["scenario"] = scenario;
    m["methods"] = methods;
    if (uses_mc) {
        m["seed"] = o.seed;
        m["trials"] = o.trials;
        m["workers"] = o.workers;
        m["generator"] = std::string(Xoshiro256ss::name);
    } else {
        m["seed"] = nullptr;
        m["generator"] = nullptr;
    }
    m["wall_time_seconds"] = clock.seconds();
    return m;
}

std::vector<std::string> method_names(const std::vector<Method>& ms)
{
    std::vector<std::string> out;
    for (Method m : ms) {
        out.emplace_back(to_string(m));
    }
    return out;
}

bool uses_mc(const std::vector<Method>& ms)
{
    return std::find(ms.begin(), ms.end(), Method::mc) != ms.end();
}

ordered_json results_json(const report::Table& table)
{
    ordered_json res = ordered_json::object();
    const auto emit = [&](const std::string& prop) {
        const auto it = table.find(prop);
        if (it == table.end()) {
            return;
        }
        ordered_json& row = res[prop];
        for (const char* m : {"exact", "fsa", "poisson", "mc"}) {
            const auto e = it->second.find(m);
            if (e != it->second.end()) {
                row[m] = {{"value", e->second.value}, {"stderr", e->second.std_error}};
            }
        }
    };
    for (const auto& p : report::property_names()) {
        emit(p);
    }
    for (std::size_t k = 1;; ++k) {
        const std::string key = "cmp_pmf_" + std::to_string(k);
        if (table.find(key) == table.end()) {
            break;
        }
        emit(key);
    }
    return res;
}

void write_output(const Options& o, const std::string& text)
{
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    require(f.good(), "cannot write output file '" + o.out + "'");
    f << text;
    require(f.good(), "failed writing output file '" + o.out + "'");
}

// ---- props -----------------------------------------------------------------

int cmd_props(const Options& o)
{
    Clock clock;
    const report::Request r = make_request(o);
    const report::Evaluation ev = report::evaluate(r);
    ordered_json doc;
    const ordered_json scn = scenario_json(o);
    doc["manifest"] = manifest("props", o, scn, method_names(r.methods), uses_mc(r.methods), clock);
    doc["scenario"] = scn;
    doc["results"] = results_json(ev.table);
    doc["manifest"]["wall_time_seconds"] = clock.seconds();
    write_output(o, doc.dump(2) + "\n");
    return ok;
}

// ---- design ----------------------------------------------------------------

int cmd_design(const Options& o)
{
    Clock clock;
    require(!o.property.empty(), "design needs --property");
    design::DesignTarget t;
    t.property = design::parse_property(o.property);
    t.value = o.target;
    const report::Mode mode = report::parse_mode(o.mode);
    t.mode = mode == report::Mode::ct ? design::Mode::ct : design::Mode::cf_fsa;
    const design::Geometry g{o.s, o.d, t.mode == design::Mode::ct ? 0.0 : o.D};
    const ordered_json scn = scenario_json(o, false);

    ordered_json doc;
    doc["manifest"] = manifest("design", o, scn, {t.mode == design::Mode::ct ? "exact" : "fsa"},
                               false, clock);
    doc["scenario"] = scn;
    doc["target"] = {{"property", std::string(design::to_string(t.property))},
                     {"value", t.value},
                     {"mode", std::string(design::to_string(t.mode))},
                     {"tol", o.tol}};
    try {
        const auto sol = design::solve_n(g, t, {o.tol, 1e-4});
        ordered_json s;
        s["roots"] = sol.roots;
        s["residuals"] = sol.residuals;
        s["residual"] = sol.residual;
        s["initial_guess"] = sol.initial_guesses;
        if (sol.maximum) {
            s["maximum"] = {{"n", sol.maximum->first}, {"value", sol.maximum->second}};
        }
        doc["solution"] = s;
        ordered_json fwd = ordered_json::array();
        for (double n : sol.roots) {
            fwd.push_back({{"n", n}, {"value", design::evaluate(g, t.property, t.mode, n)}});
        }
        doc["forward"] = fwd;
        doc["manifest"]["wall_time_seconds"] = clock.seconds();
        write_output(o, doc.dump(2) + "\n");
        return ok;
    } catch (const design::infeasible_design& e) {
        doc["error"] = e.what();
        if (std::isfinite(e.max_value())) {
            doc["maximum"] = {{"n", e.argmax()}, {"value", e.max_value()}};
        }
        doc["manifest"]["wall_time_seconds"] = clock.seconds();
        write_output(o, doc.dump(2) + "\n");
        std::cerr << "infeasible design: " << e.what() << "\n";
        return infeasible;
    }
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const Options& o)
{
    Clock clock;
    require(o.sigma > 0, "--sigma must be > 0");
    report::Request r = make_request(o);
    (void)r.scn.robots();
    const bool uniform = ParentDistribution::parse(r.parent, r.scn.s).is_uniform();
    r.methods.clear();
    if (r.mode == report::Mode::ct) {
        r.methods = {Method::exact, Method::mc};
    } else {
        r.methods = {Method::exact, Method::fsa, Method::mc};
    }
    const report::Evaluation ev = report::evaluate(r);
    const double trials = static_cast<double>(r.mc.trials);

    ordered_json checks = ordered_json::object();
    bool passed = true;
    for (const auto& prop : report::property_names()) {
        const auto row = ev.table.find(prop);
        if (row == ev.table.end() || !row->second.count("mc")) {
            continue;
        }
        // Reference: exact where it exists, otherwise the approximation
        // (reported but not gated).
        std::string ref_method;
        bool gated = true;
        for (const char* m : {"exact", "fsa", "poisson"}) {
            if (row->second.count(m)) {
                ref_method = m;
                break;
            }
        }
        if (ref_method.empty()) {
            continue;
        }
        if (ref_method != "exact") {
            gated = false;
        }
        if (!uniform && prop == "E_slen") {
            gated = false;
        }
        const PropertyEstimate ref = row->second.at(ref_method);
        const PropertyEstimate est = row->second.at("mc");
        // Standard error floor: the binomial error implied by the reference
        // for indicator properties, 1/trials in units of the reference for
        // means, so a handful of identical samples cannot give sigma = 0.
        double floor = 0.0;
        if (prop.rfind("p_", 0) == 0 || prop == "E_slen") {
            const double p = prop == "E_slen" ? ref.value / r.scn.s : ref.value;
            floor = std::sqrt(std::max(p * (1 - p), 0.0) / trials);
            if (prop == "E_slen") {
                floor *= r.scn.s;
            }
        } else {
            floor = std::max(1.0, std::abs(ref.value)) / trials;
        }
        const double sigma_used = std::max(est.std_error, floor);
        const double diff = est.value - ref.value;
        double z = 0.0;
        if (sigma_used > 0) {
            z = diff / sigma_used;
        } else if (diff != 0.0) {
            z = std::numeric_limits<double>::infinity();
        }
        const bool pass = std::abs(z) <= o.sigma;
        if (gated && !pass) {
            passed = false;
        }
        checks[prop] = {{"reference_method", ref_method},
                        {"reference", ref.value},
                        {"mc", est.value},
                        {"stderr", est.std_error},
                        {"sigma_used", sigma_used},
                        {"z", std::isfinite(z) ? ordered_json(z) : ordered_json("inf")},
                        {"gated", gated},
                        {"pass", pass}};
    }

    ordered_json doc;
    const ordered_json scn = scenario_json(o);
    doc["manifest"] = manifest("verify", o, scn, method_names(r.methods), true, clock);
    doc["manifest"]["sigma"] = o.sigma;
    doc["scenario"] = scn;
    doc["results"] = results_json(ev.table);
    doc["checks"] = checks;
    doc["passed"] = passed;
    doc["manifest"]["wall_time_seconds"] = clock.seconds();
    write_output(o, doc.dump(2) + "\n");
    return passed ? ok : verify_failed;
}

// ---- sweep -----------------------------------------------------------------

std::string csv_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_sweep(const Options& o)
{
    require(o.vary == "n" || o.vary == "d", "--vary must be n or d");
    require(o.step > 0, "--step must be > 0");
    report::Request base = make_request(o);
    std::vector<double> grid;
    if (o.to >= o.from) {
        const auto count = static_cast<std::size_t>(std::floor((o.to - o.from) / o.step + 1e-9)) + 1;
        for (std::size_t j = 0; j < count; ++j) {
            grid.push_back(o.from + o.step * static_cast<double>(j));
        }
    }
    std::vector<std::string> columns{"s", "d", "D", "n"};
    for (const auto& p : report::property_names()) {
        for (Method m : base.methods) {
            columns.push_back(p + ":" + std::string(to_string(m)));
            if (m == Method::mc) {
                columns.push_back(p + ":mc_stderr");
            }
        }
    }
    std::string csv;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        csv += (c ? "," : "") + columns[c];
    }
    csv += "\n";
    for (double x : grid) {
        report::Request r = base;
        (o.vary == "n" ? r.scn.n : r.scn.d) = x;
        report::Evaluation ev;
        for (Method m : r.methods) {
            try {
                report::evaluate_method(r, m, ev);
            } catch (const validation_error&) {
                // Method not applicable at this grid point: leave its cells empty.
            }
        }
        std::vector<std::string> cells{csv_number(r.scn.s), csv_number(r.scn.d),
                                       csv_number(r.scn.D), csv_number(r.scn.n)};
        for (const auto& p : report::property_names()) {
            const auto row = ev.table.find(p);
            for (Method m : r.methods) {
                const std::string key(to_string(m));
                const bool have = row != ev.table.end() && row->second.count(key);
                cells.push_back(have ? csv_number(row->second.at(key).value) : "");
                if (m == Method::mc) {
                    cells.push_back(have ? csv_number(row->second.at(key).std_error) : "");
                }
            }
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            csv += (c ? "," : "") + cells[c];
        }
        csv += "\n";
    }
    write_output(o, csv);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"swarmcov: coverage properties of robot swarms on a line boundary"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(version));

    Options o;
    auto* props = app.add_subcommand("props", "evaluate the coverage properties of a scenario");
    auto hp = add_common(*props, o, true);
    hp["methods"] = props->add_option("--methods", o.methods, "exact,fsa,poisson,mc");
    props->add_flag("--cmp-pmf", o.cmp_pmf, "also emit P(cmp = k) for k = 1..n");
    add_mc(*props, o, hp);

    auto* des = app.add_subcommand("design", "solve for the swarm size reaching a target");
    auto hd = add_common(*des, o, false);
    hd["property"] = des->add_option("--property", o.property,
                                     "p_mon, p_con, expected_cmp, expected_slen, expected_deg");
    hd["target"] = des->add_option("--target", o.target, "target value");
    hd["tol"] = des->add_option("--tol", o.tol, "tolerance on the property value");

    auto* ver = app.add_subcommand("verify", "cross-check closed forms against Monte Carlo");
    auto hv = add_common(*ver, o, true);
    add_mc(*ver, o, hv);
    hv["sigma"] = ver->add_option("--sigma", o.sigma, "allowed |z| band");

    auto* swp = app.add_subcommand("sweep", "tabulate properties over a grid of n or d");
    auto hs = add_common(*swp, o, true);
    hs["methods"] = swp->add_option("--methods", o.methods, "exact,fsa,poisson,mc");
    add_mc(*swp, o, hs);
    hs["vary"] = swp->add_option("--vary", o.vary, "n or d");
    hs["from"] = swp->add_option("--from", o.from, "first grid value");
    hs["to"] = swp->add_option("--to", o.to, "last grid value");
    hs["step"] = swp->add_option("--step", o.step, "grid step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalid;
    }

    try {
        if (*props) {
            apply_config(o, hp);
            return cmd_props(o);
        }
        if (*des) {
            apply_config(o, hd);
            return cmd_design(o);
        }
        if (*ver) {
            apply_config(o, hv);
            return cmd_verify(o);
        }
        apply_config(o, hs);
        return cmd_sweep(o);
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return invalid;
    } catch (const computation_error& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return invalid;
    }
}
