// mcfair: spectral efficiency vs. system Eb/N0 for uplink cellular arrays.
//
// Exit codes: 0 success, 1 invalid arguments, 2 numerical non-convergence,
// 3 a `validate` check failed.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcf/sweep.hpp"

namespace {

constexpr int kExitArguments = 1;
constexpr int kExitNumerics = 2;
constexpr int kExitValidation = 3;

// A single value is a one-point grid.
mcf::AxisSpec to_axis(const std::vector<double>& triple, bool log_spacing) {
    mcf::AxisSpec axis;
    if (triple.size() == 1) {
        axis.min = axis.max = triple.front();
        axis.points = 1;
        axis.log_spacing = log_spacing;
        return axis;
    }
    axis.min = triple.at(0);
    axis.max = triple.at(1);
    const double points = triple.at(2);
    if (points != static_cast<double>(static_cast<int>(points)))
        throw mcf::DomainError("grid point count must be an integer");
    axis.points = static_cast<int>(points);
    axis.log_spacing = log_spacing;
    return axis;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral efficiency vs. system Eb/N0 of uplink cellular arrays"};
    app.set_version_flag("--version", std::string(MCF_VERSION));
    app.set_config("--config", "", "Key-value configuration file; command-line flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    mcf::SweepRequest request;
    std::vector<double> c_grid{request.c_axis.min, request.c_axis.max, static_cast<double>(request.c_axis.points)};
    std::vector<double> r0_grid{request.r0_axis.min, request.r0_axis.max, static_cast<double>(request.r0_axis.points)};
    std::vector<double> rho_grid{request.rho_db_axis.min, request.rho_db_axis.max,
                                 static_cast<double>(request.rho_db_axis.points)};
    std::string spacing = "linear";
    std::string rule = "asymptotic";
    std::string format = "csv";
    std::string out_path;

    app.add_option("--alpha", request.params.alpha, "Path-loss exponent (> 1)")->capture_default_str();
    app.add_option("--D", request.params.D, "Inter-BS distance")->capture_default_str();
    app.add_option("--delta", request.params.delta, "Forbidden-region radius")->capture_default_str();
    app.add_option("--M", request.params.M, "Subchannels")->capture_default_str();
    app.add_option("--c", c_grid, "Spectral-efficiency grid: min max points, or one value (bit/s/Hz)")->expected(1, 3)->capture_default_str();
    app.add_option("--r0", r0_grid, "Reuse-radius grid: min max points, or one value")->expected(1, 3)->capture_default_str();
    app.add_option("--rho-db", rho_grid, "Transmit SNR grid in dB: min max points, or one value")->expected(1, 3)->capture_default_str();
    app.add_option("--spacing", spacing, "Grid spacing")->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
    app.add_option("--beta", request.beta, "Fixed beta for `simplified` (default: nominal beta of the sweep)");
    app.add_option("--K", request.K, "Users per cell (PFS)")->capture_default_str();
    app.add_option("--slots", request.slots, "Slots per PFS trial")->capture_default_str();
    app.add_option("--cells", request.cells, "Cells on the PFS ring (odd)")->capture_default_str();
    app.add_option("--tc", request.t_c, "PFS averaging window in slots")->capture_default_str();
    app.add_option("--trials", request.trials, "Independent PFS path-loss realizations")->capture_default_str();
    app.add_option("--mc-samples", request.mc_samples, "Monte Carlo samples for PFS bounds")->capture_default_str();
    app.add_option("--rule", rule, "PFS selection rule")->check(CLI::IsMember({"asymptotic", "literal"}))->capture_default_str();
    app.add_option("--seed", request.seed, "Random seed")->capture_default_str();
    app.add_option("--tol", request.tol, "Quadrature absolute and relative tolerance")->capture_default_str();
    app.add_option("--workers", request.workers, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", out_path, "Output file (default: standard output)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"hf-curve", "Single- and multi-cell Eb/N0, beta and regime over the c grid"},
        {"hf-limit", "Spectral-efficiency limit of the delay-limited system"},
        {"beta", "Effective interference ratio beta over the c grid, with bounds"},
        {"simplified", "Proportional-interference model vs. the exact multi-cell Eb/N0"},
        {"partial-sweep", "Partial-reuse Eb/N0 over the c and r0 grids"},
        {"partial-opt", "Optimal reuse radius and gain over full reuse per c"},
        {"pfs-sim", "Proportional-fair Monte Carlo over the rho grid"},
        {"pfs-bounds", "Proportional-fair lower/upper bounds and the high-SNR limit"},
        {"validate", "Quick invariant suite; nonzero exit on any failure"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitArguments;
    }

    try {
        request.command = mcf::parse_command(app.get_subcommands().front()->get_name());
        for (const auto* grid : {&c_grid, &r0_grid, &rho_grid})
            if (grid->size() == 2) throw mcf::DomainError("a grid takes one value or three (min max points)");
        const bool log_spacing = spacing == "log";
        request.c_axis = to_axis(c_grid, log_spacing);
        request.r0_axis = to_axis(r0_grid, false);
        request.rho_db_axis = to_axis(rho_grid, false);
        request.rule = mcf::parse_selection_rule(rule);

        const mcf::Table table = mcf::run_sweep(request);

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path, std::ios::binary | std::ios::trunc);
            if (!file) {
                std::cerr << "error: cannot open " << out_path << " for writing\n";
                return kExitArguments;
            }
        }
        std::ostream& out = out_path.empty() ? std::cout : file;
        if (format == "json")
            mcf::write_json(table, out);
        else
            mcf::write_csv(table, out);

        if (request.command == mcf::SweepCommand::HfLimit && !table.rows.empty())
            std::cerr << "C0 = " << table.rows.front()[1] << " bit/s/Hz\n";
        if (request.command == mcf::SweepCommand::Validate && !table.all_passed) {
            std::cerr << "validate: at least one check failed\n";
            return kExitValidation;
        }
        return 0;
    } catch (const mcf::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArguments;
    } catch (const mcf::BracketError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerics;
    } catch (const mcf::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerics;
    }
}
