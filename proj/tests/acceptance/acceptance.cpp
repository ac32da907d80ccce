// Acceptance runner: one PASS/FAIL line per criterion, plus indented detail
// lines for each sub-claim. Exit status is nonzero if any criterion fails.
//
//   mcf_acceptance                 run all criteria
//   mcf_acceptance --criterion 5   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcf/channel.hpp"
#include "mcf/finite_cell.hpp"
#include "mcf/hard_fairness.hpp"
#include "mcf/numerics.hpp"
#include "mcf/partial_reuse.hpp"
#include "mcf/pfs.hpp"
#include "mcf/simplified.hpp"

using namespace mcf;

namespace {

// Pinned tolerances.
constexpr double kC0Tol = 0.05;
constexpr double kC0M10 = 4.2;
constexpr double kC0M20 = 4.73;
constexpr double kC0Seconds = 30.0;
constexpr double kScDb = -7.967;
constexpr double kScTolDb = 0.05;
constexpr double kMcDb = -5.024;
constexpr double kMcTolDb = 0.1;
constexpr double kThresholdDb = -7.896;
constexpr double kThresholdTolDb = 0.05;
constexpr double kBeta = 1.1;
constexpr double kBetaTol = 0.1;
constexpr double kBetaDrift = 0.25;
constexpr double kFullReuseRelTol = 1e-6;
constexpr double kPartialGainDb = 7.0;
constexpr double kPartialGainTolDb = 1.0;
constexpr double kSandwichSe = 3.0;
constexpr double kI0RelTol = 1e-6;
constexpr double kSplitGap = 0.02;
constexpr double kRingTolDb = 1.0;
constexpr double kAverageSe = 3.0;
constexpr double kZetaRelTol = 1e-10;
constexpr double kSeriesRelTol = 1e-8;

class Criterion {
public:
    explicit Criterion(int id) : id_(id), start_(std::chrono::steady_clock::now()) {}

    void claim(bool ok, const char* fmt, auto... args) {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        std::printf("    [%s] %s\n", ok ? "ok" : "FAIL", buf);
        std::fflush(stdout);
        pass_ = pass_ && ok;
    }

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    bool finish(const char* title, double budget_seconds) {
        const double elapsed = seconds();
        claim(elapsed < budget_seconds, "runtime %.1f s (budget %.0f s)", elapsed, budget_seconds);
        std::printf("%s criterion %d: %s\n", pass_ ? "PASS" : "FAIL", id_, title);
        std::fflush(stdout);
        return pass_;
    }

private:
    int id_;
    std::chrono::steady_clock::time_point start_;
    bool pass_ = true;
};

double rel_err(double value, double reference) { return std::abs(value / reference - 1.0); }

struct Summary {
    double mean;
    double se;
    double rms_error;
};

Summary summarize(const std::vector<double>& draws, double target) {
    const double n = static_cast<double>(draws.size());
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
    double ss = 0.0;
    double sq = 0.0;
    for (double d : draws) {
        ss += (d - mean) * (d - mean);
        sq += (d - target) * (d - target);
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n), std::sqrt(sq / n)};
}

const ChannelParams kDefault{};

bool spectral_efficiency_limit_criterion() {
    Criterion crit(1);
    double slowest = 0.0;
    for (const auto& [M, expected] : {std::pair{10, kC0M10}, std::pair{20, kC0M20}}) {
        const auto t0 = std::chrono::steady_clock::now();
        const ChannelParams p{2.0, 2.0, 0.01, M};
        const double c0 = spectral_efficiency_limit(CompositeGainDist::full_cell(p), p);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, dt);
        crit.claim(std::abs(c0 - expected) <= kC0Tol, "M=%d: C0 = %.6f, expected %.2f +/- %.2f (%.2f s)", M, c0,
                   expected, kC0Tol, dt);
    }
    crit.claim(slowest < kC0Seconds, "slowest single limit %.2f s < %.0f s", slowest, kC0Seconds);
    return crit.finish("spectral-efficiency limit", 2.0 * kC0Seconds);
}

bool operating_point_criterion() {
    Criterion crit(2);
    const auto dist = CompositeGainDist::full_cell(kDefault);
    const double c = 2.8;
    const auto sc = sc_ebn0(c, dist);
    const auto mc = mc_ebn0(c, dist, kDefault);
    crit.claim(std::abs(sc.ebn0_db - kScDb) <= kScTolDb, "single-cell Eb/N0 %.4f dB, expected %.3f +/- %.2f", sc.ebn0_db,
               kScDb, kScTolDb);
    crit.claim(std::abs(mc.ebn0_db - kMcDb) <= kMcTolDb, "multi-cell Eb/N0 %.4f dB, expected %.3f +/- %.2f", mc.ebn0_db,
               kMcDb, kMcTolDb);
    const double beta = beta_effective(c, dist, kDefault).beta;
    const Regime regime = classify_regime(sc.ebn0_linear, beta, c);
    crit.claim(regime == Regime::NoiseDominated, "regime %s at beta %.4f",
               std::string(regime_name(regime)).c_str(), beta);
    const double threshold_db = to_db(noise_regime_threshold(beta, c));
    crit.claim(std::abs(threshold_db - kThresholdDb) <= kThresholdTolDb, "noise-regime threshold %.4f dB, expected %.3f +/- %.2f",
               threshold_db, kThresholdDb, kThresholdTolDb);
    return crit.finish("operating-point anchors at C = 2.8", 30.0);
}

bool beta_criterion() {
    Criterion crit(3);
    const auto dist = CompositeGainDist::full_cell(kDefault);
    const double at = beta_effective(2.8, dist, kDefault).beta;
    crit.claim(std::abs(at - kBeta) <= kBetaTol, "beta(2.8) = %.6f, expected %.1f +/- %.1f", at, kBeta, kBetaTol);

    const auto bounds = beta_bounds(kDefault);
    const int points = 40;
    double lo = INFINITY;
    double hi = -INFINITY;
    int outside = 0;
    for (int i = 0; i < points; ++i) {
        const double c = 0.1 + 3.9 * i / (points - 1.0);
        const double beta = beta_effective(c, dist, kDefault).beta;
        lo = std::min(lo, beta);
        hi = std::max(hi, beta);
        outside += beta < bounds.lower || beta > bounds.upper;
    }
    crit.claim(outside == 0, "%d of %d grid points inside [%.6f, %.6f]; observed range [%.6f, %.6f]", points - outside,
               points, bounds.lower, bounds.upper, lo, hi);
    crit.claim(hi - lo < kBetaDrift, "drift over [0.1, 4] = %.4f < %.2f", hi - lo, kBetaDrift);
    return crit.finish("effective interference ratio", 120.0);
}

bool partial_reuse_criterion() {
    Criterion crit(4);
    const auto dist = CompositeGainDist::full_cell(kDefault);
    const PartialReuseModel model(kDefault);
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double c = 0.4 * i;
        worst = std::max(worst, rel_err(model.ebn0(c, 1.0).ebn0_linear, mc_ebn0(c, dist, kDefault).ebn0_linear));
    }
    crit.claim(worst <= kFullReuseRelTol, "r0 = 1 vs full reuse on 10 points: max relative error %.2e", worst);

    const auto opt = model.optimize_r0(4.0);
    const double full_db = model.ebn0(4.0, 1.0).ebn0_db;
    const double gain = opt.feasible ? full_db - opt.point.ebn0_db : NAN;
    crit.claim(opt.feasible && std::abs(gain - kPartialGainDb) <= kPartialGainTolDb,
               "C=4: r0_opt = %.4f, gain %.4f dB, expected %.0f +/- %.0f", opt.r0, gain, kPartialGainDb,
               kPartialGainTolDb);

    const double reuse2 = model.spectral_efficiency_limit(model.normalized_params().delta);
    const double c0 = spectral_efficiency_limit(dist, kDefault);
    crit.claim(reuse2 > c0, "reuse-2 limit %.4f vs full-reuse limit %.4f", reuse2, c0);
    return crit.finish("partial reuse", 300.0);
}

bool pfs_criterion() {
    Criterion crit(5);
    const std::vector<double> rhos{0.1, 1.0, 10.0, 100.0};
    std::vector<std::vector<double>> estimates;
    for (int K : {10, 20}) {
        PfsSimConfig config;
        config.K = K;
        config.n_slots = 100000;
        config.n_trials = 100;
        config.workers = 0;
        config.seed = 2024;
        const auto results = simulate_pfs_sweep(config, kDefault, rhos);
        std::vector<double> row;
        for (std::size_t i = 0; i < rhos.size(); ++i) {
            const auto& r = results[i];
            const double lo = lower_bound(rhos[i], K, kDefault);
            const Estimate hi = upper_bound(rhos[i], K, kDefault, 1000000, 7);
            const double se = std::hypot(r.c_se, hi.se);
            const bool ok = r.c_estimate >= lo - kSandwichSe * r.c_se && r.c_estimate <= hi.value + kSandwichSe * se;
            crit.claim(ok, "K=%d rho=%g: lower %.4f <= sim %.4f (se %.4f) <= upper %.4f (se %.4f)", K, rhos[i], lo,
                       r.c_estimate, r.c_se, hi.value, hi.se);
            row.push_back(r.c_estimate);
        }
        estimates.push_back(row);
    }
    for (std::size_t i = 0; i < rhos.size(); ++i)
        crit.claim(estimates[1][i] > estimates[0][i], "rho=%g: C(K=20) = %.4f > C(K=10) = %.4f", rhos[i],
                   estimates[1][i], estimates[0][i]);

    const double closed = mean_interference(kDefault);
    const double series = mean_interference_series(kDefault, 1000000);
    crit.claim(rel_err(closed, series) <= kI0RelTol, "mean interference closed form %.9f vs series %.9f (rel %.2e)",
               closed, series, rel_err(closed, series));
    return crit.finish("proportional-fair scheduling properties", 600.0);
}

bool finite_k_criterion() {
    Criterion crit(6);
    std::mt19937_64 engine(606);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> rate(0.0, 1.5);
    int violations = 0;
    int cases = 0;
    for (int K = 1; K <= 5; ++K)
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> gains(static_cast<std::size_t>(K));
            std::vector<double> rates(static_cast<std::size_t>(K));
            for (double& g : gains) g = 0.05 + expo(engine);
            for (double& r : rates) r = rate(engine);
            const auto best = energies_for_order(gains, rates, DecodingOrder::ascending(gains), 1.0);
            const double best_total = std::accumulate(best.begin(), best.end(), 0.0);
            DecodingOrder order;
            order.perm.resize(static_cast<std::size_t>(K));
            std::iota(order.perm.begin(), order.perm.end(), 0);
            do {
                const auto e = energies_for_order(gains, rates, order, 1.0);
                violations += best_total > std::accumulate(e.begin(), e.end(), 0.0) * (1.0 + 1e-12);
            } while (std::next_permutation(order.perm.begin(), order.perm.end()));
            ++cases;
        }
    crit.claim(violations == 0, "ascending order optimal in %d random cells, K = 1..5 (%d violations)", cases,
               violations);

    FiniteCellConfig cell;
    cell.K = 200;
    cell.M = 2;
    cell.rates.assign(200, 2.0 / 200.0);
    cell.noise = 1.0;
    cell.interference = {0.0, 0.0};
    std::uniform_real_distribution<double> distance(kDefault.delta, kDefault.r());
    for (int k = 0; k < cell.K; ++k) {
        const double s = std::pow(distance(engine), -kDefault.alpha);
        cell.gains.push_back({s * expo(engine), s * expo(engine)});
    }
    const double best = best_subchannel_split(cell).total_energy;
    const double opt = minimize_rate_split(cell).total_energy;
    crit.claim(best <= (1.0 + kSplitGap) * opt && opt <= best * (1.0 + 1e-12),
               "K=200, M=2: best-subchannel %.6g vs optimized %.6g (gap %.3f%%)", best, opt, 100.0 * (best / opt - 1.0));

    const ChannelParams p{2.0, 2.0, 0.01, 10};
    const int K = 50;
    const double c = 1.0;
    const auto fp = finite_k_multicell_fixed_point(make_ring_network(p, 21, K, c * p.M * std::log(2.0) / K, 2025));
    const double theory = mc_ebn0(c, CompositeGainDist::full_cell(p), p).ebn0_db;
    crit.claim(std::abs(fp.mean_ebn0_db - theory) <= kRingTolDb, "K=50 ring at C=1: %.4f dB vs limit %.4f dB",
               fp.mean_ebn0_db, theory);
    return crit.finish("finite-population consistency", 600.0);
}

bool population_average_criterion() {
    Criterion crit(7);
    const auto dist = CompositeGainDist::full_cell(kDefault);
    const int reps = 100;
    const GainInterval band{0.1, 10.0};
    const GainInterval all{0.0, INFINITY};
    const Fn1 inv = [](double x) { return 1.0 / x; };
    const KernelWithSide neighbour = [](double s, int theta) { return cross_cell_pathloss(s, 1, theta, kDefault); };
    const double target1 = lemma1_limit(inv, band, dist);
    const double target2 = lemma2_limit(neighbour, all, dist);

    auto run = [&](int which, int K, std::uint64_t base) {
        std::vector<double> draws;
        for (int rep = 0; rep < reps; ++rep) {
            Rng rng = make_stream(77, base + static_cast<std::uint64_t>(rep));
            draws.push_back(which == 1 ? lemma1_empirical(K, inv, band, dist, rng)
                                       : lemma2_empirical(K, neighbour, all, dist, kDefault, 1, rng));
        }
        return draws;
    };

    for (int which : {1, 2}) {
        const double target = which == 1 ? target1 : target2;
        const char* label = which == 1 ? "gain average" : "interference average";
        const Summary large = summarize(run(which, 100000, 10000 * which), target);
        crit.claim(std::abs(large.mean - target) <= kAverageSe * large.se,
                   "%s, K=1e5 x %d: mean %.8f vs limit %.8f (%.2f SE)", label, reps, large.mean, target,
                   std::abs(large.mean - target) / large.se);
        const Summary small = summarize(run(which, 10000, 10000 * which + 5000), target);
        const double ratio = small.rms_error / large.rms_error;
        // sqrt(10) = 3.16; 100 repetitions give roughly 10% spread on the ratio.
        crit.claim(ratio > 2.5 && ratio < 4.0, "%s: rms error K=1e4 / K=1e5 = %.3f (K^-1/2 predicts 3.162)",
                   label, ratio);
    }
    return crit.finish("population-average convergence", 300.0);
}

double zeta_direct(double a, double q) {
    const long n = 1000000;
    double sum = 0.0;
    for (long k = n - 1; k >= 0; --k) sum += std::pow(static_cast<double>(k) + q, -a);
    const double w = static_cast<double>(n) + q;
    // Euler-Maclaurin tail.
    return sum + std::pow(w, 1.0 - a) / (a - 1.0) + 0.5 * std::pow(w, -a) + a * std::pow(w, -a - 1.0) / 12.0;
}

bool numerics_criterion() {
    Criterion crit(8);
    double worst = 0.0;
    for (double a : {1.5, 2.0, 3.0, 4.0})
        for (double q : {0.25, 0.5, 1.0, 1.5}) worst = std::max(worst, rel_err(hurwitz_zeta(a, q), zeta_direct(a, q)));
    crit.claim(worst <= kZetaRelTol, "Hurwitz zeta on a x q grid (4 x 4): max relative error %.2e", worst);

    const long J = 1000000;
    worst = 0.0;
    for (const ChannelParams& p : {kDefault, ChannelParams{3.0, 2.0, 0.01, 10}, ChannelParams{2.0, 3.0, 0.05, 10}})
        for (double scale : {1.0, 3.0, 1e3}) {
            const double x = scale * std::pow(p.r(), -p.alpha);
            double sum = 0.0;
            for (long j = J; j >= 1; --j) sum += pair_kernel(x, static_cast<double>(j) * p.D, p.alpha);
            sum += std::pow(p.D, -p.alpha) * std::pow(J + 0.5, 1.0 - p.alpha) / (p.alpha - 1.0);
            worst = std::max(worst, rel_err(phi_kernel(x, p), 2.0 * sum));
        }
    crit.claim(worst <= kSeriesRelTol, "full kernel vs direct series (J=1e6): max relative error %.2e", worst);

    double worst_even = 0.0;
    double worst_odd = 0.0;
    for (double alpha : {2.0, 3.0})
        for (double x : {1.0, 5.0, 1e3}) {
            double even = 0.0;
            double odd = 0.0;
            for (long j = J; j >= 1; --j) (j % 2 == 0 ? even : odd) += pair_kernel(x, 2.0 * j, alpha);
            const double tail = std::pow(2.0, -alpha) * std::pow(J + 1.0, 1.0 - alpha) / (alpha - 1.0) / 2.0;
            worst_even = std::max(worst_even, rel_err(phi0_kernel(x, alpha), 2.0 * (even + tail)));
            worst_odd = std::max(worst_odd, rel_err(phi1_kernel(x, alpha), 2.0 * (odd + tail)));
        }
    crit.claim(worst_even <= kSeriesRelTol, "even-cell kernel vs direct series: max relative error %.2e", worst_even);
    crit.claim(worst_odd <= kSeriesRelTol, "odd-cell kernel vs direct series: max relative error %.2e", worst_odd);

    worst = 0.0;
    for (double x : {0.005, 0.1, 0.25, 0.4}) {
        double sum = 0.0;
        for (long j = J; j >= 1; --j) sum += 1.0 / (static_cast<double>(j) * static_cast<double>(j) - x * x);
        sum += 1.0 / (static_cast<double>(J) + 0.5);
        const double closed = (1.0 - std::numbers::pi * x / std::tan(std::numbers::pi * x)) / (2.0 * x * x);
        worst = std::max(worst, rel_err(sum, closed));
    }
    crit.claim(worst <= kSeriesRelTol, "cotangent series identity: max relative error %.2e", worst);
    return crit.finish("special-function numerics", 60.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria runner"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-8); default runs all")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<bool()>> criteria = {
        spectral_efficiency_limit_criterion, operating_point_criterion, beta_criterion, partial_reuse_criterion,
        pfs_criterion, finite_k_criterion, population_average_criterion, numerics_criterion,
    };
    bool all = true;
    for (int i = 1; i <= 8; ++i)
        if (only == 0 || only == i) all = criteria[static_cast<std::size_t>(i - 1)]() && all;
    return all ? 0 : 1;
}
