#include "mcf/pfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "mcf/parallel.hpp"

namespace mcf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvLn2 = 1.44269504088896340736;

double log2_1p(double x) { return std::log1p(x) * kInvLn2; }

// Signed circular offset of cell j seen from cell n on a ring of n cells.
int ring_offset(int n, int j, int cells) {
    int d = ((j - n) % cells + cells) % cells;
    if (d > cells / 2) d -= cells;
    return d;
}

// E[log2(1 + offset + scale s y)] over s from the user distance law and y the
// largest of K unit exponentials.
double expected_log_peak(double scale, double offset, int K, const ChannelParams& params,
                         const QuadratureSpec& spec) {
    const double y_max = fading_peak_quantile_tail(K, 1e-16);
    const double base = 1.0 + offset;
    const Fn1 outer = [&](double u) {
        const double s = std::pow(u, -params.alpha);
        return integrate_1d([&](double y) { return std::log1p(scale * s * y / base) * fading_peak_pdf(y, K); },
                            0.0, y_max, spec.tightened(0.1));
    };
    const double inner_mean = integrate_1d(outer, params.delta, params.r(), spec) / (params.r() - params.delta);
    return (std::log(base) + inner_mean) * kInvLn2;
}

struct TrialStats {
    double rate_sum = 0.0;
    std::vector<double> user_rate;
    std::vector<double> user_count;
    std::vector<double> batch_sum;
};

// One path-loss realization. Returns one TrialStats per entry of `rhos`, all
// computed from the same draws; the literal rule accepts a single rho only.
std::vector<TrialStats> run_trial(const PfsSimConfig& config, const ChannelParams& params,
                                  const std::vector<double>& rhos, std::size_t trial) {
    const int N = config.n_cells;
    const int K = config.K;
    const int M = config.m_sub;
    const auto Nu = static_cast<std::size_t>(N);
    const auto Ku = static_cast<std::size_t>(K);
    const auto Mu = static_cast<std::size_t>(M);
    const std::size_t R = rhos.size();
    Rng rng = make_stream(config.seed, trial);

    // Quasi-static geometry: pathloss[(n N + j) K + k] from user k of cell j to BS n.
    std::vector<double> position(Nu * Ku);
    for (double& x : position) {
        const double u = draw_uniform(rng, params.delta, params.r());
        x = draw_uniform(rng, 0.0, 1.0) < 0.5 ? -u : u;
    }
    std::vector<double> pathloss(Nu * Nu * Ku);
    for (int n = 0; n < N; ++n)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < K; ++k) {
                const double x = position[static_cast<std::size_t>(j * K + k)];
                const double distance = std::abs(ring_offset(n, j, N) * params.D + x);
                pathloss[static_cast<std::size_t>((n * N + j) * K + k)] = std::pow(distance, -params.alpha);
            }

    const bool literal = config.selection_rule == SelectionRule::LiteralPfs;
    const long burn_in = config.effective_burn_in();
    const long measured = config.n_slots - burn_in;
    const long batch_len = std::max(1L, measured / config.n_batches);

    std::vector<double> window(Nu * Ku, 1e-3);
    std::vector<double> slot_rate(Nu * Ku);
    std::vector<double> prev_interference(Nu * Mu, 0.0);
    std::vector<double> fading(Nu * Ku);
    std::vector<double> gains(Ku);
    std::vector<double> cell_window(Ku);
    std::vector<int> selected(Nu);
    std::vector<double> interference(Nu);
    std::vector<double> peak(Nu);
    std::vector<double> slot_sum(R);
    boost::random::exponential_distribution<double> exponential;
    boost::random::uniform_01<double> unit;
    const double inv_K = 1.0 / K;

    std::vector<TrialStats> stats(R);
    for (auto& st : stats) {
        st.user_rate.assign(Ku, 0.0);
        st.user_count.assign(Ku, 0.0);
        st.batch_sum.assign(static_cast<std::size_t>(config.n_batches), 0.0);
    }

    for (long slot = 0; slot < config.n_slots; ++slot) {
        const bool record = slot >= burn_in;
        if (literal) std::fill(slot_rate.begin(), slot_rate.end(), 0.0);
        std::fill(slot_sum.begin(), slot_sum.end(), 0.0);
        for (std::size_t m = 0; m < Mu; ++m) {
            if (literal) {
                for (double& f : fading) f = exponential(rng);
                for (std::size_t j = 0; j < Nu; ++j) {
                    for (std::size_t k = 0; k < Ku; ++k) {
                        gains[k] = pathloss[(j * Nu + j) * Ku + k] * fading[j * Ku + k];
                        cell_window[k] = window[j * Ku + k];
                    }
                    selected[j] = selection_literal_pfs(gains, cell_window, rhos[0], prev_interference[j * Mu + m]);
                    peak[j] = fading[j * Ku + static_cast<std::size_t>(selected[j])];
                }
            } else {
                // The argmax of i.i.d. fadings is uniform and independent of the
                // maximum, so draw both directly: P(max <= y) = (1 - e^-y)^K.
                for (std::size_t j = 0; j < Nu; ++j) {
                    selected[j] = std::min(K - 1, static_cast<int>(unit(rng) * K));
                    peak[j] = -std::log(-std::expm1(std::log(unit(rng)) * inv_K));
                }
            }
            for (std::size_t n = 0; n < Nu; ++n) {
                const double* row = &pathloss[n * Nu * Ku];
                double sum = 0.0;
                for (std::size_t j = 0; j < Nu; ++j) {
                    if (j == n) continue;
                    sum += row[j * Ku + static_cast<std::size_t>(selected[j])] * exponential(rng);
                }
                interference[n] = config.include_interference ? sum : 0.0;
            }
            for (std::size_t n = 0; n < Nu; ++n) {
                const auto k = static_cast<std::size_t>(selected[n]);
                const double gain = pathloss[(n * Nu + n) * Ku + k] * peak[n];
                prev_interference[n * Mu + m] = interference[n];
                for (std::size_t i = 0; i < R; ++i) {
                    const double rate = log2_1p(rhos[i] * gain / (1.0 + rhos[i] * interference[n]));
                    if (literal) slot_rate[n * Ku + k] += rate;
                    if (record) {
                        slot_sum[i] += rate;
                        stats[i].user_rate[k] += rate;
                        stats[i].user_count[k] += 1.0;
                    }
                }
            }
        }
        if (literal) {
            const double keep = 1.0 - 1.0 / config.t_c;
            for (std::size_t i = 0; i < window.size(); ++i) window[i] = keep * window[i] + slot_rate[i] / config.t_c;
        }
        if (record) {
            const auto batch =
                std::min(static_cast<std::size_t>((slot - burn_in) / batch_len), stats[0].batch_sum.size() - 1);
            for (std::size_t i = 0; i < R; ++i) {
                stats[i].rate_sum += slot_sum[i];
                stats[i].batch_sum[batch] += slot_sum[i];
            }
        }
    }

    // Per-slot, per-cell, per-subchannel normalization.
    const double per_slot = static_cast<double>(N) * M;
    for (auto& st : stats) {
        st.rate_sum /= per_slot * static_cast<double>(measured);
        for (std::size_t b = 0; b < st.batch_sum.size(); ++b) {
            const long first = static_cast<long>(b) * batch_len;
            const long last = b + 1 == st.batch_sum.size() ? measured : std::min(measured, first + batch_len);
            st.batch_sum[b] /= per_slot * static_cast<double>(std::max(1L, last - first));
        }
    }
    return stats;
}

double mean_and_se(const std::vector<double>& values, double& se) {
    const auto n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    se = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return mean;
}

}  // namespace

std::string_view selection_rule_name(SelectionRule rule) {
    return rule == SelectionRule::LiteralPfs ? "literal" : "asymptotic";
}

SelectionRule parse_selection_rule(std::string_view name) {
    if (name == "asymptotic") return SelectionRule::AsymptoticMaxFading;
    if (name == "literal") return SelectionRule::LiteralPfs;
    throw DomainError("unknown selection rule '" + std::string(name) + "' (expected asymptotic or literal)");
}

long PfsSimConfig::effective_burn_in() const {
    if (burn_in >= 0) return burn_in;
    return selection_rule == SelectionRule::LiteralPfs ? static_cast<long>(std::ceil(10.0 * t_c)) : 0;
}

void PfsSimConfig::validate() const {
    if (K < 1) throw DomainError("PfsSimConfig: K must be >= 1");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("PfsSimConfig: rho must be positive");
    if (n_cells < 5 || n_cells % 2 == 0) throw DomainError("PfsSimConfig: n_cells must be odd and >= 5");
    if (!(t_c >= 1.0)) throw DomainError("PfsSimConfig: t_c must be >= 1");
    if (n_slots <= effective_burn_in()) throw DomainError("PfsSimConfig: n_slots must exceed burn_in");
    if (m_sub < 1) throw DomainError("PfsSimConfig: m_sub must be >= 1");
    if (n_trials < 1) throw DomainError("PfsSimConfig: n_trials must be >= 1");
    if (n_batches < 2) throw DomainError("PfsSimConfig: n_batches must be >= 2");
    if (n_slots - effective_burn_in() < n_batches)
        throw DomainError("PfsSimConfig: fewer measured slots than batches");
}

int selection_asymptotic(const std::vector<double>& fadings) {
    if (fadings.empty()) throw DomainError("selection_asymptotic: no users");
    return static_cast<int>(std::max_element(fadings.begin(), fadings.end()) - fadings.begin());
}

int selection_literal_pfs(const std::vector<double>& gains, const std::vector<double>& throughput_window,
                          double rho, double interference_estimate) {
    if (gains.empty() || gains.size() != throughput_window.size())
        throw DomainError("selection_literal_pfs: gains and window sizes differ");
    const double denom = 1.0 + rho * interference_estimate;
    int best = 0;
    double best_metric = -1.0;
    for (std::size_t k = 0; k < gains.size(); ++k) {
        const double metric = std::log1p(rho * gains[k] / denom) / throughput_window[k];
        if (metric > best_metric) {
            best_metric = metric;
            best = static_cast<int>(k);
        }
    }
    return best;
}

void update_throughput_window(std::vector<double>& throughput_window, int selected, double rate, double t_c) {
    const double keep = 1.0 - 1.0 / t_c;
    for (std::size_t k = 0; k < throughput_window.size(); ++k)
        throughput_window[k] = keep * throughput_window[k] + (static_cast<int>(k) == selected ? rate / t_c : 0.0);
}

std::vector<PfsSimResult> simulate_pfs_sweep(const PfsSimConfig& config, const ChannelParams& params,
                                             const std::vector<double>& rhos) {
    params.validate();
    config.validate();
    if (rhos.empty()) throw DomainError("simulate_pfs_sweep: no rho values");
    for (double rho : rhos)
        if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("simulate_pfs_sweep: rho must be positive");

    // Literal selection depends on rho, so each value needs its own pass.
    std::vector<std::vector<double>> passes;
    if (config.selection_rule == SelectionRule::LiteralPfs)
        for (double rho : rhos) passes.push_back({rho});
    else
        passes.push_back(rhos);

    std::vector<PfsSimResult> results;
    for (const auto& pass : passes) {
        const auto T = static_cast<std::size_t>(config.n_trials);
        std::vector<std::vector<TrialStats>> trials(T);
        parallel_for(T, config.workers, [&](std::size_t t) { trials[t] = run_trial(config, params, pass, t); });

        for (std::size_t i = 0; i < pass.size(); ++i) {
            PfsSimResult result;
            result.slots_used = config.n_slots - config.effective_burn_in();
            const auto Ku = static_cast<std::size_t>(config.K);
            result.per_user_throughput.assign(Ku, 0.0);
            result.selection_fractions.assign(Ku, 0.0);
            double total_count = 0.0;
            for (const auto& trial : trials) {
                const TrialStats& st = trial[i];
                result.trial_means.push_back(st.rate_sum);
                for (std::size_t k = 0; k < Ku; ++k) {
                    result.per_user_throughput[k] += st.user_rate[k];
                    result.selection_fractions[k] += st.user_count[k];
                    total_count += st.user_count[k];
                }
            }
            for (std::size_t k = 0; k < Ku; ++k) {
                result.per_user_throughput[k] /= total_count;
                result.selection_fractions[k] /= total_count;
            }
            double se = 0.0;
            result.c_estimate = mean_and_se(result.trial_means, se);
            if (config.n_trials == 1) mean_and_se(trials.front()[i].batch_sum, se);
            result.c_se = se;
            result.ebn0_db = result.c_estimate > 0.0 ? to_db(pass[i] / result.c_estimate)
                                                     : std::numeric_limits<double>::infinity();
            results.push_back(std::move(result));
        }
    }
    return results;
}

PfsSimResult simulate_pfs(const PfsSimConfig& config, const ChannelParams& params) {
    return simulate_pfs_sweep(config, params, {config.rho}).front();
}

double mean_interference(const ChannelParams& params) {
    params.validate();
    const double D = params.D;
    const double delta = params.delta;
    const double alpha = params.alpha;
    if (alpha == 2.0) return (2.0 - D / delta + kPi / std::tan(kPi * delta / D)) / (D * (0.5 * D - delta));
    const double s = alpha - 1.0;
    const double x = delta / D;
    return std::pow(D, 1.0 - alpha) / (s * (0.5 * D - delta)) *
           (std::pow(2.0, s) + hurwitz_zeta_continued(s, 1.0 + x) - hurwitz_zeta_continued(s, 1.0 - x));
}

double mean_interference_series(const ChannelParams& params, long terms) {
    params.validate();
    if (terms < 1) throw DomainError("mean_interference_series: terms must be >= 1");
    const double D = params.D;
    const double a = params.delta;
    const double b = params.r();
    const double s = params.alpha - 1.0;
    // E[(y - U)^-alpha + (y + U)^-alpha] for U uniform on (a, b), exact per cell.
    const auto cell = [&](double y) {
        return (std::pow(y - b, -s) - std::pow(y - a, -s) + std::pow(y + a, -s) - std::pow(y + b, -s)) /
               (s * (b - a));
    };
    double sum = 0.0;
    for (long j = terms; j >= 1; --j) sum += cell(static_cast<double>(j) * D);
    // Tail: each cell contributes ~2 (jD)^-alpha; midpoint-rule integral of the remainder.
    sum += 2.0 * std::pow(D, -params.alpha) * std::pow(static_cast<double>(terms) + 0.5, -s) / s;
    return sum;
}

double two_cell_mean_interference(const ChannelParams& params) {
    params.validate();
    const double s = params.alpha - 1.0;
    const double x = params.delta / params.D;
    return std::pow(params.D, -s) / (s * (0.5 * params.D - params.delta)) *
           (std::pow(2.0, s) - std::pow(2.0 / 3.0, s) + std::pow(1.0 + x, -s) - std::pow(1.0 - x, -s));
}

double lower_bound(double rho, int K, const ChannelParams& params, const QuadratureSpec& spec) {
    params.validate();
    if (!(rho > 0.0)) throw DomainError("lower_bound: rho must be positive");
    if (K < 1) throw DomainError("lower_bound: K must be >= 1");
    const double i0 = mean_interference(params);
    return expected_log_peak(rho / (1.0 + rho * i0), 0.0, K, params, spec);
}

double single_cell_pfs(double rho, int K, const ChannelParams& params, const QuadratureSpec& spec) {
    params.validate();
    if (!(rho > 0.0)) throw DomainError("single_cell_pfs: rho must be positive");
    if (K < 1) throw DomainError("single_cell_pfs: K must be >= 1");
    return expected_log_peak(rho, 0.0, K, params, spec);
}

Estimate upper_bound(double rho, int K, const ChannelParams& params, long mc_samples, std::uint64_t seed,
                     const QuadratureSpec& spec) {
    params.validate();
    if (!(rho > 0.0)) throw DomainError("upper_bound: rho must be positive");
    if (K < 1) throw DomainError("upper_bound: K must be >= 1");
    if (mc_samples < 2) throw DomainError("upper_bound: need at least 2 Monte Carlo samples");
    const double first = expected_log_peak(rho, rho * two_cell_mean_interference(params), K, params, spec);

    Rng rng = make_stream(seed, 0x5eed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < mc_samples; ++i) {
        const double g = sample_interferer_gain(rng, 1, params) + sample_interferer_gain(rng, -1, params);
        const double v = log2_1p(rho * g);
        sum += v;
        sum_sq += v * v;
    }
    const auto n = static_cast<double>(mc_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {first - mean, std::sqrt(var / n)};
}

Estimate pfs_capacity_limit(int K, const ChannelParams& params, long mc_samples, int n_cells, std::uint64_t seed) {
    params.validate();
    if (K < 1) throw DomainError("pfs_capacity_limit: K must be >= 1");
    if (n_cells < 3 || n_cells % 2 == 0) throw DomainError("pfs_capacity_limit: n_cells must be odd and >= 3");
    if (mc_samples < 2) throw DomainError("pfs_capacity_limit: need at least 2 Monte Carlo samples");
    Rng rng = make_stream(seed, 0x11a1);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < mc_samples; ++i) {
        const double s = std::pow(draw_uniform(rng, params.delta, params.r()), -params.alpha);
        double peak = 0.0;
        for (int k = 0; k < K; ++k) peak = std::max(peak, draw_exponential(rng));
        double interference = 0.0;
        for (int o = -(n_cells / 2); o <= n_cells / 2; ++o) {
            if (o == 0) continue;
            const double u = draw_uniform(rng, params.delta, params.r());
            const double x = draw_uniform(rng, 0.0, 1.0) < 0.5 ? -u : u;
            interference += std::pow(std::abs(o * params.D + x), -params.alpha) * draw_exponential(rng);
        }
        const double v = std::log2(s * peak / interference);
        sum += v;
        sum_sq += v * v;
    }
    const auto n = static_cast<double>(mc_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

}  // namespace mcf
