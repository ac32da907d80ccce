#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mcf/channel.hpp"

namespace mcf {

enum class SelectionRule {
    AsymptoticMaxFading,  // serve the user at the peak of its own fading
    LiteralPfs,           // argmax of rate over windowed average throughput
};

std::string_view selection_rule_name(SelectionRule rule);
SelectionRule parse_selection_rule(std::string_view name);  // "asymptotic" | "literal"

struct PfsSimConfig {
    int K = 10;
    double rho = 1.0;  // transmit SNR E_tot / N0, linear
    int n_cells = 21;
    long n_slots = 10000;
    double t_c = 100.0;  // averaging window of the literal rule, slots
    long burn_in = -1;   // < 0: 10 t_c for the literal rule, 0 for the asymptotic rule
    std::uint64_t seed = 1;
    SelectionRule selection_rule = SelectionRule::AsymptoticMaxFading;
    int m_sub = 1;
    int n_trials = 100;        // independent path-loss realizations
    unsigned workers = 1;      // 0 = hardware concurrency
    bool include_interference = true;
    int n_batches = 20;        // batch means for the standard error of a single trial

    long effective_burn_in() const;
    void validate() const;
};

struct PfsSimResult {
    double c_estimate = 0.0;  // bit/s/Hz per subchannel
    double c_se = 0.0;        // across trials, or batch means when n_trials == 1
    double ebn0_db = 0.0;     // rho / C
    std::vector<double> per_user_throughput;  // by user index, averaged over cells and trials
    std::vector<double> selection_fractions;  // by user index, sums to 1
    std::vector<double> trial_means;
    long slots_used = 0;  // per trial, after burn-in
};

/// Finite-K Monte Carlo on a ring of cells. Every cell is measured. Path
/// losses are fixed within a trial; fadings are redrawn every slot.
PfsSimResult simulate_pfs(const PfsSimConfig& config, const ChannelParams& params);

/// simulate_pfs at several SNRs (config.rho is ignored). Under the asymptotic
/// rule selection does not depend on rho, so all values share one pass and the
/// same draws; the literal rule runs one pass per value.
std::vector<PfsSimResult> simulate_pfs_sweep(const PfsSimConfig& config, const ChannelParams& params,
                                             const std::vector<double>& rhos);

/// argmax_k f_k, ties to the lowest index.
int selection_asymptotic(const std::vector<double>& fadings);

/// argmax_k (1/T_k) log(1 + rho g_k / (1 + rho I_prev)), ties to the lowest index.
int selection_literal_pfs(const std::vector<double>& gains, const std::vector<double>& throughput_window,
                          double rho, double interference_estimate);

/// T_k <- (1 - 1/t_c) T_k + (1/t_c) rate 1{k == selected}.
void update_throughput_window(std::vector<double>& throughput_window, int selected, double rate, double t_c);

/// Mean total interference at a BS from all other cells of the infinite line.
double mean_interference(const ChannelParams& params);

/// Same, by direct summation of the per-cell expectations over `terms` cells on each side.
double mean_interference_series(const ChannelParams& params, long terms);

/// Mean interference from the two adjacent cells only.
double two_cell_mean_interference(const ChannelParams& params);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/// E[log2(1 + rho s max_k f_k / (1 + rho I0))] by quadrature.
double lower_bound(double rho, int K, const ChannelParams& params, const QuadratureSpec& spec = {});

/// Two-nearest-cell upper bound. The second term is a Monte Carlo mean over
/// `mc_samples` draws; `se` is its standard error.
Estimate upper_bound(double rho, int K, const ChannelParams& params, long mc_samples = 1000000,
                     std::uint64_t seed = 1, const QuadratureSpec& spec = {});

/// High-SNR limit E[log2(s max_k f_k / sum_{j != n} g_j)] by Monte Carlo on a ring.
Estimate pfs_capacity_limit(int K, const ChannelParams& params, long mc_samples = 1000000,
                            int n_cells = 21, std::uint64_t seed = 1);

/// E[log2(1 + rho s max_k f_k)]: the isolated-cell spectral efficiency.
double single_cell_pfs(double rho, int K, const ChannelParams& params, const QuadratureSpec& spec = {});

}  // namespace mcf
