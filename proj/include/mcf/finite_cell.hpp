#pragma once

#include <cstdint>
#include <vector>

#include "mcf/channel.hpp"

namespace mcf {

/// K-user, M-subchannel cell with fixed other-cell interference. Rates in nats.
struct FiniteCellConfig {
    int K = 0;
    int M = 0;
    std::vector<double> rates;               // R_k, size K
    std::vector<std::vector<double>> gains;  // gains[k][m] > 0
    double noise = 1.0;                      // N0
    std::vector<double> interference;        // I^m, size M

    void validate() const;
    double noise_plus_interference(int m) const { return noise + interference[static_cast<std::size_t>(m)]; }
};

/// Partial rates R_k^m, indexed [k][m].
using RateMatrix = std::vector<std::vector<double>>;

/// Permutation of users; perm[0] is decoded against the most other users.
struct DecodingOrder {
    std::vector<int> perm;

    /// Ascending gain, ties broken by user index.
    static DecodingOrder ascending(const std::vector<double>& gains);
};

/// Energies that put the rate vector on the boundary of the MAC region for the
/// given order: E_{p_k} = N/g_{p_k} (e^{S_k} - e^{S_{k-1}}), S_k the rate sum of
/// the first k users in the order.
std::vector<double> energies_for_order(const std::vector<double>& gains, const std::vector<double>& rates,
                                       const DecodingOrder& order, double noise_plus_interference);

/// Energies on subchannel m under the ascending-gain order.
std::vector<double> optimal_energy_allocation(const FiniteCellConfig& config, const RateMatrix& partial, int m);

/// Whether every subset S satisfies sum_S R <= ln(1 + sum_S g E / N) within `slack`.
/// Exhaustive over subsets; intended for small K.
bool in_capacity_region(const std::vector<double>& gains, const std::vector<double>& rates,
                        const std::vector<double>& energies, double noise_plus_interference,
                        double slack = 1e-9);

/// Total transmitted energy of a rate split (all subchannels, ascending orders).
double total_energy(const FiniteCellConfig& config, const RateMatrix& partial);

struct RateSplit {
    RateMatrix partial;
    double total_energy = 0.0;
    int sweeps = 0;
};

/// Each user's whole rate on the subchannel with its largest own-link gain.
RateSplit best_subchannel_split(const FiniteCellConfig& config);

struct RateSplitOptions {
    int max_sweeps = 10000;
    double rel_tol = 1e-10;  // stop when a sweep improves by less than this fraction
};

/// Minimum-energy rate split by cyclic block coordinate descent over users,
/// starting from best_subchannel_split. Each block step solves the user's
/// optimality conditions exactly (exponential water-filling). Throws
/// ConvergenceError after max_sweeps.
RateSplit minimize_rate_split(const FiniteCellConfig& config, const RateSplitOptions& options = {});

/// Ring of cells emulating the infinite line: circular cell offsets.
struct RingNetwork {
    ChannelParams params;
    int n_cells = 0;
    int K = 0;
    std::vector<std::vector<double>> position;  // [cell][k], signed offset from own BS
    std::vector<std::vector<double>> rates;     // [cell][k], nats
    // gain[n][j][k][m]: user k of cell j to BS n on subchannel m (path loss times fading).
    std::vector<std::vector<std::vector<std::vector<double>>>> gain;

    /// Signed circular offset of cell j as seen from cell n, in (-N/2, N/2].
    int offset(int n, int j) const;
};

/// Random ring: users uniform in distance on (delta, r) with a fair-coin side,
/// unit-mean exponential fadings, every user in every cell carrying `rate_per_user` nats.
RingNetwork make_ring_network(const ChannelParams& params, int n_cells, int K, double rate_per_user,
                              std::uint64_t seed);

enum class SplitPolicy { BestSubchannel, Optimized };

struct RingFixedPointOptions {
    SplitPolicy policy = SplitPolicy::BestSubchannel;
    double noise = 1.0;
    double rel_tol = 1e-9;               // stop when max |dI| <= rel_tol (N0 + I)
    double interference_cap = 1e12;      // times N0; beyond it the load is declared infeasible
    int max_rounds = 100000;
};

struct RingFixedPoint {
    std::vector<std::vector<double>> interference;  // [cell][m]
    std::vector<double> cell_energy;                 // total transmitted energy per cell
    std::vector<double> cell_ebn0;                   // E_tot / (N0 * bits), linear
    double mean_ebn0_db = 0.0;
    int rounds = 0;
};

/// Iterates the coupled interference equations from I = 0. Each round every
/// cell re-splits its rates against the current interference and recomputes
/// energies; the interference at BS n is then the cross-gain-weighted energy of
/// all other cells. Throws LimitExceeded if interference passes the cap and
/// ConvergenceError after max_rounds.
RingFixedPoint finite_k_multicell_fixed_point(const RingNetwork& ring,
                                              const RingFixedPointOptions& options = {});

}  // namespace mcf
