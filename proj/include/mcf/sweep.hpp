#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mcf/channel.hpp"
#include "mcf/pfs.hpp"

namespace mcf {

/// Grid over one axis. A single point requires min == max.
struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 1;
    bool log_spacing = false;

    void validate(const char* name) const;
    std::vector<double> values() const;
};

enum class SweepCommand { HfCurve, HfLimit, Beta, Simplified, PartialSweep, PartialOpt, PfsSim, PfsBounds, Validate };

SweepCommand parse_command(const std::string& name);
std::string command_name(SweepCommand command);

struct SweepRequest {
    SweepCommand command = SweepCommand::HfCurve;
    ChannelParams params;
    AxisSpec c_axis{0.1, 4.0, 40, false};
    AxisSpec r0_axis{0.0, 1.0, 21, false};  // min 0 is clamped up to delta
    AxisSpec rho_db_axis{-10.0, 20.0, 4, false};
    double beta = -1.0;  // simplified: < 0 means the nominal beta of the c sweep
    int K = 10;
    long slots = 10000;
    int cells = 21;
    double t_c = 100.0;
    int trials = 20;
    long mc_samples = 200000;
    SelectionRule rule = SelectionRule::AsymptoticMaxFading;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    unsigned workers = 1;

    QuadratureSpec quadrature() const { return {tol, tol, 2000}; }
    void validate() const;
};

/// Result of a request: metadata (key, value) pairs, column names, and rows of
/// formatted cells. Numeric cells are stored as text in their final precision.
struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool all_passed = true;  // validate: false if any check failed
};

/// Runs a request. Infeasible grid points become rows with status
/// "limit-exceeded"; argument problems throw DomainError and non-convergence
/// throws ConvergenceError.
Table run_sweep(const SweepRequest& request);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

std::string format_fixed(double value, int decimals);

}  // namespace mcf
