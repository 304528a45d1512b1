#pragma once

// Property tables shared by the CLI subcommands.

#include "swarmcov/swarmcov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace swarmcov::report {

enum class Mode { ct, cf, cf_fsa };

inline Mode parse_mode(std::string_view m)
{
    if (m == "ct") return Mode::ct;
    if (m == "cf") return Mode::cf;
    if (m == "cf_fsa") return Mode::cf_fsa;
    throw validation_error("unknown mode '" + std::string(m) + "' (expected ct, cf, cf_fsa)");
}

inline std::string_view to_string(Mode m)
{
    switch (m) {
    case Mode::ct: return "ct";
    case Mode::cf: return "cf";
    case Mode::cf_fsa: return "cf_fsa";
    }
    return "?";
}

inline Method parse_method(std::string_view m)
{
    if (m == "exact") return Method::exact;
    if (m == "fsa") return Method::fsa;
    if (m == "poisson") return Method::poisson;
    if (m == "mc") return Method::mc;
    throw validation_error("unknown method '" + std::string(m)
                           + "' (expected exact, fsa, poisson, mc)");
}

/// Comma-separated method list, duplicates dropped, order kept.
inline std::vector<Method> parse_methods(std::string_view list)
{
    std::vector<Method> out;
    std::stringstream ss{std::string(list)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const Method m = parse_method(item);
        if (std::find(out.begin(), out.end(), m) == out.end()) {
            out.push_back(m);
        }
    }
    require(!out.empty(), "at least one method is required");
    return out;
}

/// Output order of the properties in JSON and CSV.
inline const std::vector<std::string>& property_names()
{
    static const std::vector<std::string> names{"p_mon", "p_con", "p_sen", "E_cmp", "E_slen", "E_deg"};
    return names;
}

struct Request {
    CoverageScenario scn;
    Mode mode = Mode::ct;
    std::string parent = "uniform";
    std::vector<Method> methods{Method::exact};
    bool cmp_pmf = false;
    mc::EstimateOptions mc;
};

using Table = std::map<std::string, std::map<std::string, PropertyEstimate>>;

struct Evaluation {
    Table table;
    std::optional<mc::MonteCarloSummary> mc;
};

namespace detail {

inline void put(Table& t, const std::string& prop, Method m, double v, double se = 0.0)
{
    t[prop][std::string(to_string(m))] = {v, m, se};
}

inline void ct_uniform(const Request& r, Method m, Evaluation& out)
{
    const auto& scn = r.scn;
    auto& t = out.table;
    switch (m) {
    case Method::exact:
        put(t, "p_mon", m, ct::p_mon(scn));
        put(t, "p_con", m, ct::p_con(scn));
        put(t, "p_sen", m, ct::p_sen(scn));
        put(t, "E_cmp", m, ct::expected_cmp(scn));
        put(t, "E_slen", m, ct::expected_slen(scn));
        put(t, "E_deg", m, ct::expected_deg(scn));
        if (r.cmp_pmf) {
            const std::size_t n = scn.robots();
            for (std::size_t k = 1; k <= n; ++k) {
                put(t, "cmp_pmf_" + std::to_string(k), m, ct::cmp_pmf(scn, k));
            }
        }
        break;
    case Method::poisson: {
        const auto rates = asymptotics::poisson_rates(scn);
        put(t, "p_mon", m, asymptotics::p_mon_poisson(scn));
        put(t, "p_con", m, asymptotics::p_con_poisson(scn));
        put(t, "p_sen", m, asymptotics::p_sen_poisson(scn));
        put(t, "E_cmp", m, rates.lambda_cmp);
        put(t, "E_slen", m, scn.s * asymptotics::p_sen_poisson(scn));
        break;
    }
    default:
        throw validation_error("method " + std::string(to_string(m))
                               + " applies to the conflict-free modes only");
    }
}

inline void ct_nonuniform(const Request& r, const ParentDistribution& parent, Method m,
                          Evaluation& out)
{
    const auto& scn = r.scn;
    auto& t = out.table;
    // No closed form exists for p_* under a general parent: exact requests
    // fall back to the Poisson approximation and say so in the method tag.
    const auto poisson = [&] {
        const auto rates = nonuniform::poisson_rates_nu(scn, parent);
        const double sen = asymptotics::poisson_pmf(rates.lambda_sen, scn.n + 1.0);
        put(t, "p_mon", Method::poisson, asymptotics::poisson_pmf(rates.lambda_mon, scn.n + 1.0));
        put(t, "p_con", Method::poisson, asymptotics::poisson_pmf(rates.lambda_con, scn.n - 1.0));
        put(t, "p_sen", Method::poisson, sen);
        put(t, "E_slen", Method::poisson, scn.s * sen);
        return rates;
    };
    switch (m) {
    case Method::exact:
        poisson();
        put(t, "E_cmp", m, nonuniform::expected_cmp_nu(scn, parent));
        put(t, "E_deg", m, nonuniform::expected_deg_nu(scn, parent));
        break;
    case Method::poisson: put(t, "E_cmp", m, poisson().lambda_cmp); break;
    default:
        throw validation_error("method " + std::string(to_string(m))
                               + " applies to the conflict-free modes only");
    }
}

inline void cf_uniform(const Request& r, Method m, Evaluation& out)
{
    const auto& scn = r.scn;
    auto& t = out.table;
    switch (m) {
    case Method::exact:
        put(t, "p_mon", m, cf::p_mon_exact(scn));
        put(t, "p_con", m, cf::p_con_exact(scn));
        put(t, "p_sen", m, cf::p_sen_exact(scn));
        put(t, "E_cmp", m, cf::expected_cmp_exact(scn));
        put(t, "E_slen", m, cf::expected_slen_exact(scn));
        if (r.cmp_pmf) {
            const std::size_t n = scn.robots();
            for (std::size_t k = 1; k <= n; ++k) {
                put(t, "cmp_pmf_" + std::to_string(k), m, cf::cmp_pmf_exact(scn, k));
            }
        }
        break;
    case Method::fsa: {
        using cf::Property;
        const std::pair<const char*, Property> rows[] = {
            {"p_mon", Property::p_mon},         {"p_con", Property::p_con},
            {"p_sen", Property::p_sen},         {"E_cmp", Property::expected_cmp},
            {"E_slen", Property::expected_slen}, {"E_deg", Property::expected_deg}};
        for (const auto& [name, kind] : rows) {
            put(t, name, m, cf::fsa_property(scn, kind).value);
        }
        if (r.cmp_pmf) {
            const std::size_t n = scn.robots();
            for (std::size_t k = 1; k <= n; ++k) {
                put(t, "cmp_pmf_" + std::to_string(k), m,
                    cf::fsa_property(scn, Property::cmp_pmf, k).value);
            }
        }
        break;
    }
    case Method::poisson: {
        const CoverageScenario sub = cf::substituted(scn);
        const double sen = asymptotics::p_sen_poisson(sub);
        put(t, "p_mon", m, asymptotics::p_mon_poisson(sub));
        put(t, "p_con", m, asymptotics::p_con_poisson(sub));
        put(t, "p_sen", m, sen);
        put(t, "E_cmp", m, asymptotics::poisson_rates(sub).lambda_cmp);
        put(t, "E_slen", m, scn.s * sen);
        break;
    }
    default: break;
    }
}

inline void monte_carlo(const Request& r, const ParentDistribution& parent, Evaluation& out)
{
    const mc::Model model = r.mode == Mode::ct ? mc::Model::ct : mc::Model::cf;
    const auto est = mc::estimate(r.scn, model, parent, r.mc);
    auto& t = out.table;
    put(t, "p_mon", Method::mc, est.p_mon.value, est.p_mon.std_error);
    put(t, "p_con", Method::mc, est.p_con.value, est.p_con.std_error);
    put(t, "p_sen", Method::mc, est.p_sen.value, est.p_sen.std_error);
    put(t, "E_cmp", Method::mc, est.expected_cmp.value, est.expected_cmp.std_error);
    put(t, "E_slen", Method::mc, est.expected_slen.value, est.expected_slen.std_error);
    put(t, "E_deg", Method::mc, est.expected_deg.value, est.expected_deg.std_error);
    if (r.cmp_pmf) {
        const double trials = static_cast<double>(est.trials);
        for (std::size_t k = 1; k <= est.cmp_pmf.size(); ++k) {
            const double p = est.cmp_pmf[k - 1];
            put(t, "cmp_pmf_" + std::to_string(k), Method::mc, p,
                trials > 1 ? std::sqrt(p * (1 - p) / (trials - 1)) : 0.0);
        }
    }
    out.mc = est;
}

} // namespace detail

/// Evaluates one method for the request, adding its entries to `out`.
inline void evaluate_method(const Request& r, Method m, Evaluation& out)
{
    const ParentDistribution parent = ParentDistribution::parse(r.parent, r.scn.s);
    if (r.mode == Mode::ct) {
        r.scn.validate();
    } else {
        r.scn.validate_cf();
        require(parent.is_uniform(), "conflict-free modes support the uniform parent only");
    }
    if (m == Method::mc) {
        detail::monte_carlo(r, parent, out);
        return;
    }
    if (r.mode == Mode::ct) {
        if (parent.is_uniform()) {
            detail::ct_uniform(r, m, out);
        } else {
            detail::ct_nonuniform(r, parent, m, out);
        }
    } else {
        detail::cf_uniform(r, m, out);
    }
}

inline Evaluation evaluate(const Request& r)
{
    Evaluation out;
    for (Method m : r.methods) {
        evaluate_method(r, m, out);
    }
    return out;
}

} // namespace swarmcov::report
