#include "mcf/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mcf/hard_fairness.hpp"
#include "mcf/parallel.hpp"
#include "mcf/partial_reuse.hpp"
#include "mcf/simplified.hpp"

namespace mcf {

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::string kLimitExceeded = "limit-exceeded";
const std::string kOk = "ok";

std::string format_general(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string db(double value) { return format_fixed(value, 4); }
std::string six(double value) { return format_fixed(value, 6); }

void add_common_metadata(Table& table, const SweepRequest& request) {
    const ChannelParams& p = request.params;
    table.metadata = {
        {"tool", "mcfair"},
        {"version", MCF_VERSION},
        {"command", command_name(request.command)},
        {"alpha", format_general(p.alpha)},
        {"D", format_general(p.D)},
        {"delta", format_general(p.delta)},
        {"r", format_general(p.r())},
        {"M", std::to_string(p.M)},
        {"tol", format_general(request.tol)},
        {"seed", std::to_string(request.seed)},
        {"ebn0_axis", "system level: total energy per cell / (N0 * total bits per cell)"},
    };
}

// Evaluates rows[i] = fn(i) concurrently; rows keep grid order.
template <class Fn>
void fill_rows(Table& table, std::size_t n, unsigned workers, Fn&& fn) {
    table.rows.assign(n, {});
    parallel_for(n, workers, [&](std::size_t i) { table.rows[i] = fn(i); });
}

Table hf_curve(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    const auto spec = req.quadrature();
    const auto dist = CompositeGainDist::full_cell(req.params);
    const auto grid = req.c_axis.values();
    table.columns = {"c", "sc_ebn0_db", "mc_ebn0_db", "beta", "regime", "status"};
    fill_rows(table, grid.size(), req.workers, [&](std::size_t i) -> std::vector<std::string> {
        const double c = grid[i];
        const OperatingPoint sc = sc_ebn0(c, dist, spec);
        const BetaEstimate beta = beta_effective(c, dist, req.params, spec);
        const std::string regime =
            c > 0.0 ? std::string(regime_name(classify_regime(sc.ebn0_linear, beta.beta, c))) : "noise-dominated";
        try {
            const OperatingPoint mc = mc_ebn0(c, dist, req.params, spec);
            return {format_general(c), db(sc.ebn0_db), db(mc.ebn0_db), six(beta.beta), regime, kOk};
        } catch (const LimitExceeded&) {
            return {format_general(c), db(sc.ebn0_db), "", six(beta.beta), regime, kLimitExceeded};
        }
    });
    return table;
}

Table hf_limit(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    const auto dist = CompositeGainDist::full_cell(req.params);
    const double c0 = spectral_efficiency_limit(dist, req.params, req.quadrature());
    table.columns = {"M", "c0", "status"};
    table.rows.push_back({std::to_string(req.params.M), std::isfinite(c0) ? six(c0) : "inf",
                          std::isfinite(c0) ? kOk : "no-limit-below-512"});
    return table;
}

Table beta_table(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    const auto spec = req.quadrature();
    const auto dist = CompositeGainDist::full_cell(req.params);
    const auto grid = req.c_axis.values();
    const BetaEstimate nominal = nominal_beta(grid.front(), grid.back(), dist, req.params, spec);
    table.metadata.emplace_back("nominal_beta", six(nominal.beta));
    table.metadata.emplace_back("nominal_beta_c", format_general(nominal.c));
    table.columns = {"c", "beta", "beta_lower", "beta_upper"};
    fill_rows(table, grid.size(), req.workers, [&](std::size_t i) -> std::vector<std::string> {
        const BetaEstimate b = beta_effective(grid[i], dist, req.params, spec);
        return {format_general(grid[i]), six(b.beta), six(b.lower), six(b.upper)};
    });
    return table;
}

Table simplified_table(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    const auto spec = req.quadrature();
    const auto dist = CompositeGainDist::full_cell(req.params);
    const auto grid = req.c_axis.values();
    const double beta =
        req.beta >= 0.0 ? req.beta : nominal_beta(grid.front(), grid.back(), dist, req.params, spec).beta;
    table.metadata.emplace_back("beta", six(beta));
    table.metadata.emplace_back("beta_source", req.beta >= 0.0 ? "flag" : "nominal (midpoint of the c sweep)");
    table.columns = {"c", "sc_ebn0_sys_db", "simplified_ebn0_sys_db", "mc_ebn0_sys_db", "regime", "status"};
    fill_rows(table, grid.size(), req.workers, [&](std::size_t i) -> std::vector<std::string> {
        const double c = grid[i];
        const OperatingPoint sc = sc_ebn0(c, dist, spec);
        std::string mc_text;
        try {
            mc_text = db(mc_ebn0(c, dist, req.params, spec).ebn0_db);
        } catch (const LimitExceeded&) {
        }
        const std::string regime =
            c > 0.0 && beta > 0.0 ? std::string(regime_name(classify_regime(sc.ebn0_linear, beta, c))) : "noise-dominated";
        try {
            const OperatingPoint simple = simplified_mc_ebn0(c, beta, dist, spec);
            return {format_general(c), db(sc.ebn0_db), db(simple.ebn0_db), mc_text, regime, kOk};
        } catch (const LimitExceeded&) {
            return {format_general(c), db(sc.ebn0_db), "", mc_text, regime, kLimitExceeded};
        }
    });
    return table;
}

void add_partial_metadata(Table& table) {
    table.metadata.emplace_back("outer_zone_rate_fraction", format_general(kOuterZoneRateFraction));
    table.metadata.emplace_back("fairness", "relaxed: outer-zone users receive half of their requested rate");
}

Table partial_sweep(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    add_partial_metadata(table);
    const PartialReuseModel model(req.params, req.quadrature());
    const double delta = model.normalized_params().delta;
    const auto cs = req.c_axis.values();
    auto r0s = req.r0_axis.values();
    for (double& r0 : r0s) r0 = std::clamp(r0, delta, 1.0);
    table.columns = {"c", "r0", "ebn0_sys_db", "i0", "i1", "status"};
    fill_rows(table, cs.size() * r0s.size(), req.workers, [&](std::size_t i) -> std::vector<std::string> {
        const double c = cs[i / r0s.size()];
        const double r0 = r0s[i % r0s.size()];
        try {
            const PartialReuseState s = model.evaluate(c, r0);
            return {format_general(c), six(r0), db(s.point.ebn0_db), six(s.i0), six(s.i1), kOk};
        } catch (const LimitExceeded&) {
            return {format_general(c), six(r0), "", "", "", kLimitExceeded};
        }
    });
    return table;
}

Table partial_opt(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    add_partial_metadata(table);
    const PartialReuseModel model(req.params, req.quadrature());
    const auto cs = req.c_axis.values();
    table.columns = {"c", "r0_opt", "partial_ebn0_sys_db", "full_reuse_ebn0_sys_db", "gain_db", "status"};
    fill_rows(table, cs.size(), req.workers, [&](std::size_t i) -> std::vector<std::string> {
        const double c = cs[i];
        const auto opt = model.optimize_r0(c);
        std::string full_text;
        double full_db = std::numeric_limits<double>::quiet_NaN();
        try {
            full_db = model.ebn0(c, 1.0).ebn0_db;
            full_text = db(full_db);
        } catch (const LimitExceeded&) {
        }
        if (!opt.feasible) return {format_general(c), "", "", full_text, "", kLimitExceeded};
        const std::string gain = std::isnan(full_db) ? "" : db(full_db - opt.point.ebn0_db);
        return {format_general(c), six(opt.r0), db(opt.point.ebn0_db), full_text, gain, kOk};
    });
    return table;
}

void add_pfs_metadata(Table& table, const SweepRequest& req) {
    table.metadata.emplace_back("K", std::to_string(req.K));
    table.metadata.emplace_back("cells", std::to_string(req.cells));
}

Table pfs_sim(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    add_pfs_metadata(table, req);
    PfsSimConfig config;
    config.K = req.K;
    config.n_cells = req.cells;
    config.n_slots = req.slots;
    config.t_c = req.t_c;
    config.seed = req.seed;
    config.selection_rule = req.rule;
    config.n_trials = req.trials;
    config.workers = req.workers;
    table.metadata.emplace_back("slots", std::to_string(req.slots));
    table.metadata.emplace_back("trials", std::to_string(req.trials));
    table.metadata.emplace_back("t_c", format_general(req.t_c));
    table.metadata.emplace_back("burn_in", std::to_string(config.effective_burn_in()));
    table.metadata.emplace_back("rule", std::string(selection_rule_name(req.rule)));

    const auto rho_db = req.rho_db_axis.values();
    std::vector<double> rhos;
    for (double v : rho_db) rhos.push_back(from_db(v));
    const auto results = simulate_pfs_sweep(config, req.params, rhos);
    table.columns = {"rho_db", "c", "c_se", "ebn0_sys_db"};
    for (std::size_t i = 0; i < rhos.size(); ++i)
        table.rows.push_back({db(rho_db[i]), six(results[i].c_estimate), six(results[i].c_se), db(results[i].ebn0_db)});
    return table;
}

Table pfs_bounds(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    add_pfs_metadata(table, req);
    const auto spec = req.quadrature();
    table.metadata.emplace_back("mean_interference", six(mean_interference(req.params)));
    table.metadata.emplace_back("two_cell_mean_interference", six(two_cell_mean_interference(req.params)));
    const Estimate limit = pfs_capacity_limit(req.K, req.params, req.mc_samples, req.cells, req.seed);
    table.metadata.emplace_back("capacity_limit", six(limit.value));
    table.metadata.emplace_back("capacity_limit_se", six(limit.se));
    table.metadata.emplace_back("mc_samples", std::to_string(req.mc_samples));
    const auto rho_db = req.rho_db_axis.values();
    table.columns = {"rho_db", "lower_c", "upper_c", "upper_se", "lower_ebn0_sys_db", "upper_ebn0_sys_db"};
    fill_rows(table, rho_db.size(), req.workers, [&](std::size_t i) -> std::vector<std::string> {
        const double rho = from_db(rho_db[i]);
        const double lo = lower_bound(rho, req.K, req.params, spec);
        const Estimate hi = upper_bound(rho, req.K, req.params, req.mc_samples, req.seed, spec);
        return {db(rho_db[i]), six(lo), six(hi.value), six(hi.se), db(to_db(rho / lo)), db(to_db(rho / hi.value))};
    });
    return table;
}

// Quick invariant checks: each returns (value, reference, tolerance, pass).
struct Check {
    std::string name;
    double value;
    double reference;
    double tolerance;
    bool pass;
};

Check relative_check(std::string name, double value, double reference, double tol) {
    const double err = std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
    return {std::move(name), value, reference, tol, err <= tol};
}

double zeta_direct(double a, double q) {
    const long n = 100000;
    double sum = 0.0;
    for (long k = n - 1; k >= 0; --k) sum += std::pow(static_cast<double>(k) + q, -a);
    const double w = static_cast<double>(n) + q;
    return sum + std::pow(w, 1.0 - a) / (a - 1.0) + 0.5 * std::pow(w, -a) + a * std::pow(w, -a - 1.0) / 12.0;
}

double phi_series(double x, const ChannelParams& p, long terms) {
    double sum = 0.0;
    for (long j = terms; j >= 1; --j) sum += pair_kernel(x, static_cast<double>(j) * p.D, p.alpha);
    // Remaining cells behave like (jD)^-alpha.
    sum += std::pow(p.D, -p.alpha) * std::pow(static_cast<double>(terms) + 0.5, 1.0 - p.alpha) / (p.alpha - 1.0);
    return 2.0 * sum;
}

Check mean_with_se_check(std::string name, const std::vector<double>& draws, double reference, double n_se) {
    const auto n = static_cast<double>(draws.size());
    double mean = 0.0;
    for (double d : draws) mean += d;
    mean /= n;
    double ss = 0.0;
    for (double d : draws) ss += (d - mean) * (d - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    return {std::move(name), mean, reference, n_se * se, std::abs(mean - reference) <= n_se * se};
}

Table validate_table(const SweepRequest& req) {
    Table table;
    add_common_metadata(table, req);
    const ChannelParams& p = req.params;
    p.validate_hard_fairness();
    const auto spec = req.quadrature();
    const auto dist = CompositeGainDist::full_cell(p);
    std::vector<Check> checks;

    for (double q : {0.5, 1.0, 1.5})
        checks.push_back(relative_check("hurwitz_zeta(" + format_general(p.alpha) + "," + format_general(q) + ")",
                                        hurwitz_zeta(p.alpha, q), zeta_direct(p.alpha, q), 1e-10));

    const double x_edge = std::pow(p.r(), -p.alpha);  // user at the cell edge
    for (double x : {x_edge, 4.0 * x_edge, 100.0 * x_edge})
        checks.push_back(relative_check("phi_series(x=" + format_general(x) + ")", phi_kernel(x, p),
                                        phi_series(x, p, 200000), 1e-8));

    {
        ChannelParams p2 = p;
        p2.D = 2.0;
        p2.delta = std::min(p.delta, 0.5);
        for (double x : {1.0, 10.0})
            checks.push_back(relative_check("phi_even_odd_partition(x=" + format_general(x) + ")",
                                            phi0_kernel(x, p.alpha) + phi1_kernel(x, p.alpha), phi_kernel(x, p2), 1e-10));
    }

    {
        const double x = 0.1;
        double sum = 0.0;
        const long terms = 1000000;
        for (long j = terms; j >= 1; --j) sum += 1.0 / (static_cast<double>(j) * static_cast<double>(j) - x * x);
        sum += 1.0 / (static_cast<double>(terms) + 0.5);
        checks.push_back(relative_check("cotangent_series(x=0.1)", sum,
                                        (1.0 - kPi * x / std::tan(kPi * x)) / (2.0 * x * x), 1e-8));
    }

    {
        const GainInterval interval{0.1, 10.0};
        const Fn1 g = [](double x) { return 1.0 / x; };
        const double target = lemma1_limit(g, interval, dist, spec);
        std::vector<double> draws;
        for (std::uint64_t rep = 0; rep < 40; ++rep) {
            Rng rng = make_stream(req.seed, 1000 + rep);
            draws.push_back(lemma1_empirical(20000, g, interval, dist, rng));
        }
        checks.push_back(mean_with_se_check("gain_average_estimator", draws, target, 4.0));
    }
    {
        const GainInterval interval{0.0, std::numeric_limits<double>::infinity()};
        const KernelWithSide g = [&](double s, int theta) { return cross_cell_pathloss(s, 1, theta, p); };
        const double target = lemma2_limit(g, interval, dist, spec);
        std::vector<double> draws;
        for (std::uint64_t rep = 0; rep < 40; ++rep) {
            Rng rng = make_stream(req.seed, 2000 + rep);
            draws.push_back(lemma2_empirical(20000, g, interval, dist, p, 1, rng));
        }
        checks.push_back(mean_with_se_check("interference_average_estimator", draws, target, 4.0));
    }

    {
        const double c = 2.0;
        const PartialReuseModel model(p, spec);
        checks.push_back(relative_check("partial_r0_1_equals_full_reuse(c=2)", model.ebn0(c, 1.0).ebn0_linear,
                                        mc_ebn0(c, dist, p, spec).ebn0_linear, 1e-6));
    }

    {
        const double rho = 10.0;
        PfsSimConfig config;
        config.K = req.K;
        config.rho = rho;
        config.n_cells = req.cells;
        config.n_slots = 2000;
        config.n_trials = 10;
        config.seed = req.seed;
        config.workers = req.workers;
        const PfsSimResult sim = simulate_pfs(config, p);
        const double lo = lower_bound(rho, req.K, p, spec);
        const Estimate hi = upper_bound(rho, req.K, p, 100000, req.seed, spec);
        const double slack = 3.0 * (sim.c_se + hi.se);
        const bool pass = sim.c_estimate >= lo - 3.0 * sim.c_se && sim.c_estimate <= hi.value + slack;
        checks.push_back({"pfs_bound_sandwich(rho=10)", sim.c_estimate, lo, slack, pass});
    }

    table.columns = {"check", "status", "value", "reference", "tolerance"};
    for (const Check& c : checks) {
        table.rows.push_back({c.name, c.pass ? "pass" : "fail", format_general(c.value), format_general(c.reference),
                              format_general(c.tolerance)});
        table.all_passed = table.all_passed && c.pass;
    }
    return table;
}

}  // namespace

std::string format_fixed(double value, int decimals) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string text = buf;
    if (text.find_first_not_of("-0.") == std::string::npos && text.front() == '-') text.erase(0, 1);  // no "-0.0000"
    return text;
}

void AxisSpec::validate(const char* name) const {
    const std::string label(name);
    if (points < 1) throw DomainError(label + ": points must be >= 1");
    if (!std::isfinite(min) || !std::isfinite(max)) throw DomainError(label + ": bounds must be finite");
    if (points == 1 && min != max) throw DomainError(label + ": a single point needs min == max");
    if (points >= 2 && !(min < max)) throw DomainError(label + ": need min < max");
    if (log_spacing && !(min > 0.0)) throw DomainError(label + ": log spacing needs min > 0");
}

std::vector<double> AxisSpec::values() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = min;
        return out;
    }
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        out[static_cast<std::size_t>(i)] =
            log_spacing ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min);
    }
    out.back() = max;
    return out;
}

SweepCommand parse_command(const std::string& name) {
    static const std::pair<const char*, SweepCommand> table[] = {
        {"hf-curve", SweepCommand::HfCurve},         {"hf-limit", SweepCommand::HfLimit},
        {"beta", SweepCommand::Beta},                {"simplified", SweepCommand::Simplified},
        {"partial-sweep", SweepCommand::PartialSweep}, {"partial-opt", SweepCommand::PartialOpt},
        {"pfs-sim", SweepCommand::PfsSim},           {"pfs-bounds", SweepCommand::PfsBounds},
        {"validate", SweepCommand::Validate},
    };
    for (const auto& [text, command] : table)
        if (name == text) return command;
    throw DomainError("unknown command '" + name + "'");
}

std::string command_name(SweepCommand command) {
    switch (command) {
        case SweepCommand::HfCurve: return "hf-curve";
        case SweepCommand::HfLimit: return "hf-limit";
        case SweepCommand::Beta: return "beta";
        case SweepCommand::Simplified: return "simplified";
        case SweepCommand::PartialSweep: return "partial-sweep";
        case SweepCommand::PartialOpt: return "partial-opt";
        case SweepCommand::PfsSim: return "pfs-sim";
        case SweepCommand::PfsBounds: return "pfs-bounds";
        case SweepCommand::Validate: return "validate";
    }
    return "unknown";
}

void SweepRequest::validate() const {
    params.validate();
    c_axis.validate("--c");
    r0_axis.validate("--r0");
    rho_db_axis.validate("--rho-db");
    if (c_axis.min < 0.0) throw DomainError("--c: spectral efficiency must be >= 0");
    if (r0_axis.min < 0.0 || r0_axis.max > 1.0) throw DomainError("--r0: values must lie in [0, 1]");
    if (K < 1) throw DomainError("--K must be >= 1");
    if (slots < 1) throw DomainError("--slots must be >= 1");
    if (trials < 1) throw DomainError("--trials must be >= 1");
    if (mc_samples < 2) throw DomainError("--mc-samples must be >= 2");
    if (!(tol > 0.0)) throw DomainError("--tol must be positive");
}

Table run_sweep(const SweepRequest& request) {
    request.validate();
    switch (request.command) {
        case SweepCommand::HfCurve: return hf_curve(request);
        case SweepCommand::HfLimit: return hf_limit(request);
        case SweepCommand::Beta: return beta_table(request);
        case SweepCommand::Simplified: return simplified_table(request);
        case SweepCommand::PartialSweep: return partial_sweep(request);
        case SweepCommand::PartialOpt: return partial_opt(request);
        case SweepCommand::PfsSim: return pfs_sim(request);
        case SweepCommand::PfsBounds: return pfs_bounds(request);
        case SweepCommand::Validate: return validate_table(request);
    }
    throw DomainError("unhandled command");
}

void write_csv(const Table& table, std::ostream& out) {
    for (const auto& [key, value] : table.metadata) out << "# " << key << '=' << value << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

void write_json(const Table& table, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.metadata) doc["metadata"][key] = value;
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json record = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            const std::string& cell = row[i];
            char* end = nullptr;
            const double number = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
            if (cell.empty())
                record[table.columns[i]] = nullptr;
            else if (end && *end == '\0' && std::isfinite(number))
                record[table.columns[i]] = number;
            else
                record[table.columns[i]] = cell;
        }
        doc["rows"].push_back(std::move(record));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace mcf
