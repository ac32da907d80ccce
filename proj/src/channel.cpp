#include "mcf/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace mcf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Tail mass below which the fading peak is treated as absent.
constexpr double kFadingTail = 1e-12;
// Table spacing in ln x.
constexpr double kTableStep = 1.0 / 256.0;

double peak_over_y(double y, int M) {
    // M (1 - e^-y)^{M-1} e^-y / y, finite at 0 for M >= 2.
    const double one_minus = -std::expm1(-y);
    if (M == 2) return 2.0 * std::exp(-y) * (one_minus / y);
    return M * std::pow(one_minus, M - 2) * (one_minus / y) * std::exp(-y);
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    const std::uint64_t b = splitmix64(a);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

double draw_uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * boost::random::uniform_01<double>()(rng);
}

double draw_exponential(Rng& rng) { return boost::random::exponential_distribution<double>()(rng); }

void ChannelParams::validate() const {
    if (!(alpha > 1.0)) throw DomainError("ChannelParams: alpha must exceed 1");
    if (!(D > 0.0)) throw DomainError("ChannelParams: D must be positive");
    if (!(delta > 0.0 && delta < r()))
        throw DomainError("ChannelParams: need 0 < delta < r = D/2");
    if (M < 1) throw DomainError("ChannelParams: M must be >= 1");
}

void ChannelParams::validate_hard_fairness() const {
    validate();
    if (M < 2)
        throw DomainError("ChannelParams: delay-limited formulas need M >= 2 "
                          "(int dG_M(x)/x diverges for a single Rayleigh subchannel)");
}

double pathloss_cdf(double x, const AnnulusSupport& support, double alpha) {
    if (x < std::pow(support.b, -alpha)) return 0.0;
    if (x >= std::pow(support.a, -alpha)) return 1.0;
    return 1.0 - (std::pow(x, -1.0 / alpha) - support.a) / (support.b - support.a);
}

double fading_peak_cdf(double y, int M) {
    if (y <= 0.0) return 0.0;
    return std::pow(-std::expm1(-y), M);
}

double fading_peak_pdf(double y, int M) {
    if (y < 0.0) return 0.0;
    return M * std::pow(-std::expm1(-y), M - 1) * std::exp(-y);
}

double fading_peak_quantile_tail(int M, double tail) {
    return -std::log(-std::expm1(std::log1p(-tail) / M));
}

struct CompositeGainDist::Table {
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::vector<double> value;  // G at t_lo + i h
    std::vector<double> slope;  // dG/dt
};

CompositeGainDist::CompositeGainDist(const AnnulusSupport& support, int M, double alpha)
    : support_(support), M_(M), alpha_(alpha) {
    if (!(support.a > 0.0 && support.a < support.b))
        throw DomainError("CompositeGainDist: need 0 < a < b");
    if (M < 1) throw DomainError("CompositeGainDist: M must be >= 1");
    if (!(alpha > 0.0)) throw DomainError("CompositeGainDist: alpha must be positive");

    auto table = std::make_shared<Table>();
    // Below t_lo, G <= (x b^alpha)^M < 1e-18; above t_hi, 1 - G < M e^{-x a^alpha} < 1e-18.
    table->t_lo = std::log(1e-18) / M - alpha * std::log(support.b);
    table->t_hi = std::log(std::log(static_cast<double>(M)) + std::log(1e18)) - alpha * std::log(support.a);
    const auto n = static_cast<std::size_t>(std::ceil((table->t_hi - table->t_lo) / kTableStep)) + 1;
    table->t_hi = table->t_lo + kTableStep * static_cast<double>(n - 1);
    table->value.resize(n);
    table->slope.resize(n);

    const QuadratureSpec tight{1e-15, 1e-13, 4000};
    const double width = support.b - support.a;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::exp(table->t_lo + kTableStep * static_cast<double>(i));
        table->value[i] =
            integrate_1d([&](double u) { return fading_peak_cdf(x * std::pow(u, alpha), M); },
                         support.a, support.b, tight) /
            width;
        table->slope[i] = integrate_1d(
                              [&](double u) {
                                  const double z = x * std::pow(u, alpha);
                                  return fading_peak_pdf(z, M) * z;
                              },
                              support.a, support.b, tight) /
                          width;
    }
    table_ = std::move(table);
}

CompositeGainDist CompositeGainDist::full_cell(const ChannelParams& params) {
    params.validate();
    return CompositeGainDist({params.delta, params.r()}, params.M, params.alpha);
}

double CompositeGainDist::cdf_quadrature(double x) const {
    if (!(x > 0.0)) return 0.0;
    const QuadratureSpec tight{1e-15, 1e-13, 4000};
    return integrate_1d([&](double u) { return fading_peak_cdf(x * std::pow(u, alpha_), M_); },
                        support_.a, support_.b, tight) /
           (support_.b - support_.a);
}

double CompositeGainDist::cdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    const Table& tab = *table_;
    const double t = std::log(x);
    if (t <= tab.t_lo || t >= tab.t_hi) return cdf_quadrature(x);

    const double pos = (t - tab.t_lo) / kTableStep;
    const auto i = std::min(static_cast<std::size_t>(pos), tab.value.size() - 2);
    const double tau = pos - static_cast<double>(i);
    const double tau2 = tau * tau;
    const double tau3 = tau2 * tau;
    const double h00 = 2.0 * tau3 - 3.0 * tau2 + 1.0;
    const double h10 = tau3 - 2.0 * tau2 + tau;
    const double h01 = -2.0 * tau3 + 3.0 * tau2;
    const double h11 = tau3 - tau2;
    const double g = h00 * tab.value[i] + h10 * kTableStep * tab.slope[i] +
                     h01 * tab.value[i + 1] + h11 * kTableStep * tab.slope[i + 1];
    return std::clamp(g, 0.0, 1.0);
}

double CompositeGainDist::sample(Rng& rng) const {
    const double u = draw_uniform(rng, support_.a, support_.b);
    double peak = 0.0;
    for (int m = 0; m < M_; ++m) peak = std::max(peak, draw_exponential(rng));
    return std::pow(u, -alpha_) * peak;
}

double composite_gain_cdf(double x, const CompositeGainDist& dist) { return dist.cdf_quadrature(x); }

double load_moment(const CompositeGainDist& dist, double c_bits, const Fn1& kernel,
                   const QuadratureSpec& spec) {
    if (dist.M() < 2) throw DomainError("load_moment: requires M >= 2");
    const double alpha = dist.alpha();
    const int M = dist.M();
    const double y_max = fading_peak_quantile_tail(M, kFadingTail);
    const double ln2c = std::log(2.0) * c_bits;
    const QuadratureSpec inner_spec = spec.tightened(0.1);
    const auto [a, b] = dist.support();

    const Fn1 outer = [&](double u) {
        const double u_pow = std::pow(u, alpha);
        const double s = 1.0 / u_pow;
        const double k = kernel(s);
        if (k == 0.0) return 0.0;
        const double inner = integrate_1d(
            [&](double y) { return peak_over_y(y, M) * std::exp(ln2c * dist.cdf(s * y)); }, 0.0,
            y_max, inner_spec);
        return k * u_pow * inner;
    };
    return integrate_1d(outer, a, b, spec) / (b - a);
}

double load_moment(const CompositeGainDist& dist, double c_bits, const QuadratureSpec& spec) {
    return load_moment(dist, c_bits, [](double) { return 1.0; }, spec);
}

double cross_cell_pathloss(double s_own, int cell_offset, int theta, const ChannelParams& params) {
    if (cell_offset == 0) throw DomainError("cross_cell_pathloss: cell_offset must be nonzero");
    const double u = std::pow(s_own, -1.0 / params.alpha);
    const double span = std::abs(cell_offset) * params.D;
    const double d = theta ? span - u : span + u;
    return std::pow(d, -params.alpha);
}

double pair_kernel(double x, double y, double alpha) {
    const double u = std::pow(x, -1.0 / alpha);
    return 0.5 * (std::pow(y - u, -alpha) + std::pow(y + u, -alpha));
}

namespace {

double symmetric_zeta_pair(double alpha, double center, double q, double scale) {
    if (!(q < center))
        throw DomainError("interference kernel: gain below the cell-edge path loss (shift " +
                          std::to_string(center - q) + ")");
    return std::pow(scale, -alpha) * (hurwitz_zeta(alpha, center - q) + hurwitz_zeta(alpha, center + q));
}

}  // namespace

double phi_kernel(double x, const ChannelParams& params) {
    if (!(x > 0.0)) throw DomainError("phi_kernel: gain must be positive");
    const double q = std::pow(x, -1.0 / params.alpha) / params.D;
    return symmetric_zeta_pair(params.alpha, 1.0, q, params.D);
}

double phi0_kernel(double x, double alpha) {
    if (!(x > 0.0)) throw DomainError("phi0_kernel: gain must be positive");
    return symmetric_zeta_pair(alpha, 1.0, std::pow(x, -1.0 / alpha) / 4.0, 4.0);
}

double phi1_kernel(double x, double alpha) {
    if (!(x > 0.0)) throw DomainError("phi1_kernel: gain must be positive");
    return symmetric_zeta_pair(alpha, 0.5, std::pow(x, -1.0 / alpha) / 4.0, 4.0);
}

double InterfererGainSample::gain(const ChannelParams& params) const {
    return cross_cell_pathloss(std::pow(U, -params.alpha), cell_offset, theta, params) * f;
}

InterfererGainSample draw_interferer(Rng& rng, int cell_offset, const ChannelParams& params) {
    if (cell_offset == 0) throw DomainError("draw_interferer: cell_offset must be nonzero");
    InterfererGainSample sample{};
    sample.cell_offset = cell_offset;
    sample.theta = boost::random::uniform_01<double>()(rng) < 0.5 ? 1 : 0;
    sample.U = draw_uniform(rng, params.delta, params.r());
    sample.f = draw_exponential(rng);
    return sample;
}

double sample_interferer_gain(Rng& rng, int cell_offset, const ChannelParams& params) {
    return draw_interferer(rng, cell_offset, params).gain(params);
}

namespace {

double draw_rate_factor(Rng& rng, RateFactorLaw law) {
    return law == RateFactorLaw::Uniform ? draw_uniform(rng, 0.5, 1.5) : 1.0;
}

struct UserDraw {
    double s;
    double own_fading;  // fading on subchannel 0
    bool best_is_first;
    double peak;        // s * max_l f^l
};

UserDraw draw_user(Rng& rng, const CompositeGainDist& dist, std::vector<double>& fading) {
    const auto [a, b] = dist.support();
    const double s = std::pow(draw_uniform(rng, a, b), -dist.alpha());
    for (double& f : fading) f = draw_exponential(rng);
    const auto best = std::max_element(fading.begin(), fading.end());
    return {s, fading.front(), best == fading.begin(), s * *best};
}

bool inside(double x, const GainInterval& interval) { return x >= interval.lo && x < interval.hi; }

// Inner range of y for which u^-alpha y falls inside the interval.
std::pair<double, double> y_window(double u_pow, const GainInterval& interval, double y_max) {
    const double lo = std::max(0.0, interval.lo * u_pow);
    const double hi = std::isinf(interval.hi) ? y_max : std::min(y_max, interval.hi * u_pow);
    return {lo, hi};
}

}  // namespace

double lemma1_empirical(int K, const Fn1& g, const GainInterval& interval,
                        const CompositeGainDist& dist, Rng& rng, RateFactorLaw nu_law) {
    if (K < 1) throw DomainError("lemma1_empirical: K must be >= 1");
    std::vector<double> fading(static_cast<std::size_t>(dist.M()));
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        const UserDraw user = draw_user(rng, dist, fading);
        const double nu = draw_rate_factor(rng, nu_law);
        if (user.best_is_first && inside(user.peak, interval)) sum += g(user.s * user.own_fading) * nu;
    }
    return sum / K;
}

double lemma1_limit(const Fn1& g, const GainInterval& interval, const CompositeGainDist& dist,
                    const QuadratureSpec& spec) {
    const auto [a, b] = dist.support();
    const int M = dist.M();
    const double alpha = dist.alpha();
    const double y_max = fading_peak_quantile_tail(M, 1e-16);
    const Fn1 outer = [&](double u) {
        const double u_pow = std::pow(u, alpha);
        const auto [lo, hi] = y_window(u_pow, interval, y_max);
        if (hi <= lo) return 0.0;
        return integrate_1d([&](double y) { return g(y / u_pow) * fading_peak_pdf(y, M); }, lo, hi,
                            spec.tightened(0.1));
    };
    return integrate_1d(outer, a, b, spec) / ((b - a) * M);
}

double lemma2_empirical(int K, const KernelWithSide& g, const GainInterval& interval,
                        const CompositeGainDist& dist, const ChannelParams& params,
                        int cell_offset, Rng& rng, RateFactorLaw nu_law) {
    if (K < 1) throw DomainError("lemma2_empirical: K must be >= 1");
    if (cell_offset == 0) throw DomainError("lemma2_empirical: cell_offset must be nonzero");
    params.validate();
    std::vector<double> fading(static_cast<std::size_t>(dist.M()));
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        const UserDraw user = draw_user(rng, dist, fading);
        const int theta = boost::random::uniform_01<double>()(rng) < 0.5 ? 1 : 0;
        const double cross_fading = draw_exponential(rng);
        const double nu = draw_rate_factor(rng, nu_law);
        if (user.best_is_first && inside(user.peak, interval))
            sum += g(user.s, theta) * cross_fading * nu / (user.s * user.own_fading);
    }
    return sum / K;
}

double lemma2_limit(const KernelWithSide& g, const GainInterval& interval,
                    const CompositeGainDist& dist, const QuadratureSpec& spec) {
    const auto [a, b] = dist.support();
    const int M = dist.M();
    const double alpha = dist.alpha();
    const double y_max = fading_peak_quantile_tail(M, 1e-16);
    const Fn1 outer = [&](double u) {
        const double u_pow = std::pow(u, alpha);
        const double s = 1.0 / u_pow;
        const double side_mean = 0.5 * (g(s, 0) + g(s, 1));
        if (side_mean == 0.0) return 0.0;
        const auto [lo, hi] = y_window(u_pow, interval, y_max);
        if (hi <= lo) return 0.0;
        const double inner = integrate_1d(
            [&](double y) { return fading_peak_pdf(y, M) / y; }, lo, hi, spec.tightened(0.1));
        return side_mean * u_pow * inner;
    };
    return integrate_1d(outer, a, b, spec) / ((b - a) * M);
}

}  // namespace mcf
