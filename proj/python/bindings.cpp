#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mcf/hard_fairness.hpp"
#include "mcf/partial_reuse.hpp"
#include "mcf/pfs.hpp"
#include "mcf/simplified.hpp"
#include "mcf/sweep.hpp"

namespace py = pybind11;
using namespace mcf;

namespace {

using Grid = std::vector<double>;

AxisSpec to_axis(const Grid& grid, bool log_spacing, const char* name) {
    if (grid.size() == 1) return {grid[0], grid[0], 1, log_spacing};
    if (grid.size() != 3) throw DomainError(std::string(name) + ": give one value or (min, max, points)");
    const int points = static_cast<int>(grid[2]);
    if (points != grid[2]) throw DomainError(std::string(name) + ": point count must be an integer");
    return {grid[0], grid[1], points, log_spacing};
}

py::dict table_to_dict(const Table& table) {
    py::dict metadata;
    for (const auto& [key, value] : table.metadata) metadata[py::str(key)] = value;
    py::dict out;
    out["metadata"] = metadata;
    out["columns"] = table.columns;
    out["rows"] = table.rows;
    out["all_passed"] = table.all_passed;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral efficiency vs. system Eb/N0 of uplink cellular arrays";
    m.attr("__version__") = MCF_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BracketError>(m, "BracketError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_RuntimeError);
    py::register_exception<LimitExceeded>(m, "LimitExceeded", PyExc_RuntimeError);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init([](double alpha, double D, double delta, int M) {
                 ChannelParams p{alpha, D, delta, M};
                 p.validate();
                 return p;
             }),
             py::arg("alpha") = 2.0, py::arg("D") = 2.0, py::arg("delta") = 0.01, py::arg("M") = 10)
        .def_readonly("alpha", &ChannelParams::alpha)
        .def_readonly("D", &ChannelParams::D)
        .def_readonly("delta", &ChannelParams::delta)
        .def_readonly("M", &ChannelParams::M)
        .def_property_readonly("r", &ChannelParams::r)
        .def("__repr__", [](const ChannelParams& p) {
            return "ChannelParams(alpha=" + format_fixed(p.alpha, 4) + ", D=" + format_fixed(p.D, 4) +
                   ", delta=" + format_fixed(p.delta, 4) + ", M=" + std::to_string(p.M) + ")";
        });

    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def_readonly("c", &OperatingPoint::c)
        .def_readonly("ebn0_linear", &OperatingPoint::ebn0_linear)
        .def_readonly("ebn0_db", &OperatingPoint::ebn0_db)
        .def("__repr__", [](const OperatingPoint& p) {
            return "OperatingPoint(c=" + format_fixed(p.c, 6) + ", ebn0_db=" + format_fixed(p.ebn0_db, 4) + ")";
        });

    py::class_<BetaEstimate>(m, "BetaEstimate")
        .def_readonly("beta", &BetaEstimate::beta)
        .def_readonly("c", &BetaEstimate::c)
        .def_readonly("lower", &BetaEstimate::lower)
        .def_readonly("upper", &BetaEstimate::upper);

    m.def("hurwitz_zeta", &hurwitz_zeta, py::arg("a"), py::arg("q"));
    m.def("phi_kernel", &phi_kernel, py::arg("x"), py::arg("params") = ChannelParams{});
    m.def("phi0_kernel", &phi0_kernel, py::arg("x"), py::arg("alpha") = 2.0);
    m.def("phi1_kernel", &phi1_kernel, py::arg("x"), py::arg("alpha") = 2.0);

    m.def(
        "sc_ebn0",
        [](double c, const ChannelParams& p) {
            p.validate_hard_fairness();
            return sc_ebn0(c, CompositeGainDist::full_cell(p));
        },
        py::arg("c"), py::arg("params") = ChannelParams{});
    m.def(
        "mc_ebn0",
        [](double c, const ChannelParams& p) {
            p.validate_hard_fairness();
            return mc_ebn0(c, CompositeGainDist::full_cell(p), p);
        },
        py::arg("c"), py::arg("params") = ChannelParams{});
    m.def(
        "spectral_efficiency_limit",
        [](const ChannelParams& p) {
            p.validate_hard_fairness();
            return spectral_efficiency_limit(CompositeGainDist::full_cell(p), p);
        },
        py::arg("params") = ChannelParams{});
    m.def(
        "beta_effective",
        [](double c, const ChannelParams& p) {
            p.validate_hard_fairness();
            return beta_effective(c, CompositeGainDist::full_cell(p), p);
        },
        py::arg("c"), py::arg("params") = ChannelParams{});
    m.def(
        "beta_bounds",
        [](const ChannelParams& p) {
            const BetaBounds b = beta_bounds(p);
            return std::make_tuple(b.lower, b.upper);
        },
        py::arg("params") = ChannelParams{});
    m.def("sc_to_mc", &sc_to_mc, py::arg("ebn0_sc"), py::arg("beta"), py::arg("c"));
    m.def(
        "classify_regime",
        [](double ebn0_sc, double beta, double c) { return std::string(regime_name(classify_regime(ebn0_sc, beta, c))); },
        py::arg("ebn0_sc"), py::arg("beta"), py::arg("c"));

    m.def(
        "partial_ebn0",
        [](double c, double r0, const ChannelParams& p) { return PartialReuseModel(p).ebn0(c, r0); },
        py::arg("c"), py::arg("r0"), py::arg("params") = ChannelParams{});
    m.def(
        "optimize_r0",
        [](double c, const ChannelParams& p) -> std::optional<std::tuple<double, OperatingPoint>> {
            const auto opt = PartialReuseModel(p).optimize_r0(c);
            if (!opt.feasible) return std::nullopt;
            return std::make_tuple(opt.r0, opt.point);
        },
        py::arg("c"), py::arg("params") = ChannelParams{},
        "Optimal reuse radius and operating point, or None if no radius is feasible.");

    m.def("mean_interference", &mean_interference, py::arg("params") = ChannelParams{});
    m.def(
        "pfs_lower_bound", [](double rho, int K, const ChannelParams& p) { return lower_bound(rho, K, p); },
        py::arg("rho"), py::arg("K"), py::arg("params") = ChannelParams{});
    m.def(
        "pfs_upper_bound",
        [](double rho, int K, const ChannelParams& p, long mc_samples, std::uint64_t seed) {
            const Estimate e = upper_bound(rho, K, p, mc_samples, seed);
            return std::make_tuple(e.value, e.se);
        },
        py::arg("rho"), py::arg("K"), py::arg("params") = ChannelParams{}, py::arg("mc_samples") = 200000,
        py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
    m.def(
        "pfs_capacity_limit",
        [](int K, const ChannelParams& p, long mc_samples, int n_cells, std::uint64_t seed) {
            const Estimate e = pfs_capacity_limit(K, p, mc_samples, n_cells, seed);
            return std::make_tuple(e.value, e.se);
        },
        py::arg("K"), py::arg("params") = ChannelParams{}, py::arg("mc_samples") = 200000, py::arg("n_cells") = 21,
        py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
    m.def(
        "simulate_pfs",
        [](int K, double rho, const ChannelParams& p, long n_slots, int n_trials, int n_cells,
           const std::string& rule, double t_c, std::uint64_t seed, unsigned workers) {
            PfsSimConfig config;
            config.K = K;
            config.rho = rho;
            config.n_slots = n_slots;
            config.n_trials = n_trials;
            config.n_cells = n_cells;
            config.selection_rule = parse_selection_rule(rule);
            config.t_c = t_c;
            config.seed = seed;
            config.workers = workers;
            PfsSimResult r;
            {
                py::gil_scoped_release release;
                r = simulate_pfs(config, p);
            }
            py::dict out;
            out["c"] = r.c_estimate;
            out["se"] = r.c_se;
            out["ebn0_db"] = r.ebn0_db;
            out["selection_fractions"] = r.selection_fractions;
            out["per_user_throughput"] = r.per_user_throughput;
            out["slots_used"] = r.slots_used;
            return out;
        },
        py::arg("K"), py::arg("rho"), py::arg("params") = ChannelParams{}, py::arg("n_slots") = 10000,
        py::arg("n_trials") = 20, py::arg("n_cells") = 21, py::arg("rule") = "asymptotic", py::arg("t_c") = 100.0,
        py::arg("seed") = 1, py::arg("workers") = 1);

    m.def(
        "run",
        [](const std::string& command, const ChannelParams& p, const Grid& c, const Grid& r0, const Grid& rho_db,
           const std::string& spacing, double beta, int K, long slots, int cells, double t_c, int trials,
           long mc_samples, const std::string& rule, std::uint64_t seed, double tol, unsigned workers) {
            SweepRequest req;
            req.command = parse_command(command);
            req.params = p;
            if (spacing != "linear" && spacing != "log") throw DomainError("spacing must be 'linear' or 'log'");
            req.c_axis = to_axis(c, spacing == "log", "c");
            req.r0_axis = to_axis(r0, false, "r0");
            req.rho_db_axis = to_axis(rho_db, false, "rho_db");
            req.beta = beta;
            req.K = K;
            req.slots = slots;
            req.cells = cells;
            req.t_c = t_c;
            req.trials = trials;
            req.mc_samples = mc_samples;
            req.rule = parse_selection_rule(rule);
            req.seed = seed;
            req.tol = tol;
            req.workers = workers;
            Table table;
            {
                py::gil_scoped_release release;
                table = run_sweep(req);
            }
            return table_to_dict(table);
        },
        py::arg("command"), py::arg("params") = ChannelParams{}, py::arg("c") = Grid{0.1, 4.0, 40},
        py::arg("r0") = Grid{0.0, 1.0, 21}, py::arg("rho_db") = Grid{-10.0, 20.0, 4}, py::arg("spacing") = "linear",
        py::arg("beta") = -1.0, py::arg("K") = 10, py::arg("slots") = 10000, py::arg("cells") = 21,
        py::arg("t_c") = 100.0, py::arg("trials") = 20, py::arg("mc_samples") = 200000,
        py::arg("rule") = "asymptotic", py::arg("seed") = 1, py::arg("tol") = 1e-9, py::arg("workers") = 1,
        "Runs one CLI command and returns {metadata, columns, rows, all_passed}; cells are formatted strings.");
}
