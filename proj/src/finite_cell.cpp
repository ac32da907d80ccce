#include "mcf/finite_cell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mcf {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::vector<double> column(const FiniteCellConfig& config, const RateMatrix& partial, int m,
                           bool take_gains) {
    std::vector<double> out(static_cast<std::size_t>(config.K));
    for (int k = 0; k < config.K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        out[ku] = take_gains ? config.gains[ku][static_cast<std::size_t>(m)]
                             : partial[ku][static_cast<std::size_t>(m)];
    }
    return out;
}

// Minimizes sum_m a_m e^{r_m} subject to sum_m r_m = total, r_m >= 0.
std::vector<double> exponential_waterfill(const std::vector<double>& a, double total) {
    const std::size_t n = a.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return a[x] < a[y]; });

    double log_sum = 0.0;
    double log_level = 0.0;
    std::size_t active = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double candidate_sum = log_sum + std::log(a[idx[j]]);
        const double candidate_level = (total + candidate_sum) / static_cast<double>(j + 1);
        if (j > 0 && !(std::log(a[idx[j]]) < candidate_level)) break;
        log_sum = candidate_sum;
        log_level = candidate_level;
        active = j + 1;
    }
    std::vector<double> r(n, 0.0);
    for (std::size_t j = 0; j < active; ++j)
        r[idx[j]] = std::max(0.0, log_level - std::log(a[idx[j]]));
    return r;
}

}  // namespace

void FiniteCellConfig::validate() const {
    if (K < 1 || M < 1) throw DomainError("FiniteCellConfig: need K >= 1 and M >= 1");
    if (rates.size() != static_cast<std::size_t>(K)) throw DomainError("FiniteCellConfig: rates must have K entries");
    if (gains.size() != static_cast<std::size_t>(K)) throw DomainError("FiniteCellConfig: gains must have K rows");
    for (const auto& row : gains) {
        if (row.size() != static_cast<std::size_t>(M)) throw DomainError("FiniteCellConfig: gains rows must have M entries");
        for (double g : row)
            if (!(g > 0.0)) throw DomainError("FiniteCellConfig: gains must be positive");
    }
    for (double r : rates)
        if (!(r >= 0.0)) throw DomainError("FiniteCellConfig: rates must be >= 0");
    if (!(noise > 0.0)) throw DomainError("FiniteCellConfig: noise must be positive");
    if (interference.size() != static_cast<std::size_t>(M))
        throw DomainError("FiniteCellConfig: interference must have M entries");
    for (double i : interference)
        if (!(i >= 0.0)) throw DomainError("FiniteCellConfig: interference must be >= 0");
}

DecodingOrder DecodingOrder::ascending(const std::vector<double>& gains) {
    DecodingOrder order;
    order.perm.resize(gains.size());
    std::iota(order.perm.begin(), order.perm.end(), 0);
    std::stable_sort(order.perm.begin(), order.perm.end(),
                     [&](int x, int y) { return gains[static_cast<std::size_t>(x)] < gains[static_cast<std::size_t>(y)]; });
    return order;
}

std::vector<double> energies_for_order(const std::vector<double>& gains, const std::vector<double>& rates,
                                       const DecodingOrder& order, double noise_plus_interference) {
    if (gains.size() != rates.size() || order.perm.size() != gains.size())
        throw DomainError("energies_for_order: size mismatch");
    std::vector<double> energy(gains.size(), 0.0);
    double prefix = 0.0;
    for (int user : order.perm) {
        const auto u = static_cast<std::size_t>(user);
        // e^{S_k} - e^{S_{k-1}} = e^{S_{k-1}} (e^{R} - 1)
        energy[u] = noise_plus_interference / gains[u] * std::exp(prefix) * std::expm1(rates[u]);
        prefix += rates[u];
    }
    return energy;
}

std::vector<double> optimal_energy_allocation(const FiniteCellConfig& config, const RateMatrix& partial, int m) {
    if (m < 0 || m >= config.M) throw DomainError("optimal_energy_allocation: subchannel out of range");
    const auto gains = column(config, partial, m, true);
    const auto rates = column(config, partial, m, false);
    return energies_for_order(gains, rates, DecodingOrder::ascending(gains), config.noise_plus_interference(m));
}

bool in_capacity_region(const std::vector<double>& gains, const std::vector<double>& rates,
                        const std::vector<double>& energies, double noise_plus_interference, double slack) {
    const std::size_t n = gains.size();
    if (n > 20) throw DomainError("in_capacity_region: exhaustive check limited to 20 users");
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double rate_sum = 0.0;
        double power = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (1u << k)) {
                rate_sum += rates[k];
                power += gains[k] * energies[k];
            }
        if (rate_sum > std::log1p(power / noise_plus_interference) + slack) return false;
    }
    return true;
}

double total_energy(const FiniteCellConfig& config, const RateMatrix& partial) {
    double total = 0.0;
    for (int m = 0; m < config.M; ++m)
        for (double e : optimal_energy_allocation(config, partial, m)) total += e;
    return total;
}

RateSplit best_subchannel_split(const FiniteCellConfig& config) {
    config.validate();
    RateSplit split;
    split.partial.assign(static_cast<std::size_t>(config.K), std::vector<double>(static_cast<std::size_t>(config.M), 0.0));
    for (int k = 0; k < config.K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        // Own-link gain only: an interference-aware choice makes the ring iteration cycle.
        const auto& row = config.gains[ku];
        const auto best = std::max_element(row.begin(), row.end()) - row.begin();
        split.partial[ku][static_cast<std::size_t>(best)] = config.rates[ku];
    }
    split.total_energy = total_energy(config, split.partial);
    return split;
}

RateSplit minimize_rate_split(const FiniteCellConfig& config, const RateSplitOptions& options) {
    RateSplit split = best_subchannel_split(config);
    const auto K = static_cast<std::size_t>(config.K);
    const auto M = static_cast<std::size_t>(config.M);

    std::vector<DecodingOrder> orders;
    std::vector<std::vector<std::size_t>> position(M, std::vector<std::size_t>(K));
    for (std::size_t m = 0; m < M; ++m) {
        orders.push_back(DecodingOrder::ascending(column(config, split.partial, static_cast<int>(m), true)));
        for (std::size_t p = 0; p < K; ++p) position[m][static_cast<std::size_t>(orders[m].perm[p])] = p;
    }

    // In order position p, energy on m is N sum_p w_p e^{S_p} - N / g_first with
    // w_p = 1/g_p - 1/g_{p+1} (last: 1/g_p), so a user at position q sees
    // coefficient N e^{-r} sum_{p >= q} w_p e^{S_p} on e^{r}.
    std::vector<std::vector<double>> weight(M, std::vector<double>(K));
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t p = 0; p < K; ++p) {
            const double g = config.gains[static_cast<std::size_t>(orders[m].perm[p])][m];
            const double next = p + 1 < K ? 1.0 / config.gains[static_cast<std::size_t>(orders[m].perm[p + 1])][m] : 0.0;
            weight[m][p] = 1.0 / g - next;
        }

    std::vector<double> coeff(M);
    double previous = split.total_energy;
    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        for (std::size_t k = 0; k < K; ++k) {
            if (config.rates[k] == 0.0) continue;
            for (std::size_t m = 0; m < M; ++m) {
                double prefix = 0.0;
                double tail = 0.0;
                const std::size_t q = position[m][k];
                for (std::size_t p = 0; p < K; ++p) {
                    prefix += split.partial[static_cast<std::size_t>(orders[m].perm[p])][m];
                    if (p >= q) tail += weight[m][p] * std::exp(prefix - split.partial[k][m]);
                }
                coeff[m] = config.noise_plus_interference(static_cast<int>(m)) * tail;
            }
            const auto r = exponential_waterfill(coeff, config.rates[k]);
            for (std::size_t m = 0; m < M; ++m) split.partial[k][m] = r[m];
        }
        const double current = total_energy(config, split.partial);
        split.sweeps = sweep;
        split.total_energy = current;
        if (previous - current <= options.rel_tol * current) return split;
        previous = current;
    }
    throw ConvergenceError("minimize_rate_split: no convergence after " + std::to_string(options.max_sweeps) +
                           " sweeps");
}

int RingNetwork::offset(int n, int j) const {
    int d = ((j - n) % n_cells + n_cells) % n_cells;
    if (d > n_cells / 2) d -= n_cells;
    return d;
}

RingNetwork make_ring_network(const ChannelParams& params, int n_cells, int K, double rate_per_user,
                              std::uint64_t seed) {
    params.validate();
    if (n_cells < 1) throw DomainError("make_ring_network: n_cells must be >= 1");
    if (K < 1) throw DomainError("make_ring_network: K must be >= 1");
    if (!(rate_per_user >= 0.0)) throw DomainError("make_ring_network: rate must be >= 0");

    RingNetwork ring;
    ring.params = params;
    ring.n_cells = n_cells;
    ring.K = K;
    const auto N = static_cast<std::size_t>(n_cells);
    const auto Ku = static_cast<std::size_t>(K);
    const auto M = static_cast<std::size_t>(params.M);
    ring.position.assign(N, std::vector<double>(Ku));
    ring.rates.assign(N, std::vector<double>(Ku, rate_per_user));
    ring.gain.assign(N, std::vector<std::vector<std::vector<double>>>(
                            N, std::vector<std::vector<double>>(Ku, std::vector<double>(M))));

    for (std::size_t j = 0; j < N; ++j) {
        Rng rng = make_stream(seed, j);
        for (std::size_t k = 0; k < Ku; ++k) {
            const double u = draw_uniform(rng, params.delta, params.r());
            ring.position[j][k] = draw_uniform(rng, 0.0, 1.0) < 0.5 ? -u : u;
        }
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t k = 0; k < Ku; ++k) {
                const double distance =
                    std::abs(ring.offset(static_cast<int>(n), static_cast<int>(j)) * params.D + ring.position[j][k]);
                const double pathloss = std::pow(distance, -params.alpha);
                for (std::size_t m = 0; m < M; ++m) ring.gain[n][j][k][m] = pathloss * draw_exponential(rng);
            }
    }
    return ring;
}

RingFixedPoint finite_k_multicell_fixed_point(const RingNetwork& ring, const RingFixedPointOptions& options) {
    const auto N = static_cast<std::size_t>(ring.n_cells);
    const auto K = static_cast<std::size_t>(ring.K);
    const auto M = static_cast<std::size_t>(ring.params.M);
    if (!(options.noise > 0.0)) throw DomainError("finite_k_multicell_fixed_point: noise must be positive");

    std::vector<FiniteCellConfig> cells(N);
    for (std::size_t n = 0; n < N; ++n) {
        FiniteCellConfig& cell = cells[n];
        cell.K = ring.K;
        cell.M = ring.params.M;
        cell.rates = ring.rates[n];
        cell.gains = ring.gain[n][n];
        cell.noise = options.noise;
        cell.interference.assign(M, 0.0);
    }

    RingFixedPoint result;
    result.interference.assign(N, std::vector<double>(M, 0.0));
    std::vector<RateMatrix> energies(N);

    for (int round = 1; round <= options.max_rounds; ++round) {
        for (std::size_t n = 0; n < N; ++n) {
            cells[n].interference = result.interference[n];
            RateSplit split;
            if (options.policy == SplitPolicy::Optimized)
                split = minimize_rate_split(cells[n]);
            else
                split = best_subchannel_split(cells[n]);
            RateMatrix e(K, std::vector<double>(M, 0.0));
            for (std::size_t m = 0; m < M; ++m) {
                const auto em = optimal_energy_allocation(cells[n], split.partial, static_cast<int>(m));
                for (std::size_t k = 0; k < K; ++k) e[k][m] = em[k];
            }
            energies[n] = std::move(e);
        }

        double worst = 0.0;
        std::vector<std::vector<double>> next(N, std::vector<double>(M, 0.0));
        for (std::size_t n = 0; n < N; ++n) {
            for (std::size_t j = 0; j < N; ++j) {
                if (j == n) continue;
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t m = 0; m < M; ++m) next[n][m] += ring.gain[n][j][k][m] * energies[j][k][m];
            }
            for (std::size_t m = 0; m < M; ++m) {
                if (!(next[n][m] <= options.interference_cap * options.noise))
                    throw LimitExceeded("finite_k_multicell_fixed_point: interference exceeded the cap; "
                                        "the rate load is infeasible");
                worst = std::max(worst, std::abs(next[n][m] - result.interference[n][m]) /
                                            (options.noise + next[n][m]));
            }
        }
        result.interference = std::move(next);
        result.rounds = round;
        if (worst <= options.rel_tol) break;
        if (round == options.max_rounds)
            throw ConvergenceError("finite_k_multicell_fixed_point: no convergence after " +
                                   std::to_string(options.max_rounds) + " rounds");
    }

    // Energies consistent with the final interference.
    result.cell_energy.assign(N, 0.0);
    result.cell_ebn0.assign(N, 0.0);
    double ebn0_sum = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        cells[n].interference = result.interference[n];
        const RateSplit split = options.policy == SplitPolicy::Optimized ? minimize_rate_split(cells[n])
                                                                         : best_subchannel_split(cells[n]);
        result.cell_energy[n] = split.total_energy;
        const double bits = std::accumulate(ring.rates[n].begin(), ring.rates[n].end(), 0.0) / kLn2;
        result.cell_ebn0[n] = bits > 0.0 ? split.total_energy / (options.noise * bits) : 0.0;
        ebn0_sum += result.cell_ebn0[n];
    }
    result.mean_ebn0_db = to_db(ebn0_sum / static_cast<double>(N));
    return result;
}

}  // namespace mcf
