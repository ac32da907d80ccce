#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

#include "mcf/numerics.hpp"

namespace mcf {

// Same sequence as std::mt19937_64; the Boost engine generates faster.
using Rng = boost::random::mt19937_64;

/// Deterministic, well-separated random stream for (seed, stream index).
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

double draw_uniform(Rng& rng, double lo, double hi);
double draw_exponential(Rng& rng);  // unit mean

/// Geometry and propagation constants of the linear cell array.
///
/// Distances are normalized so that base stations sit at integer multiples of D
/// and users of a cell lie at distance u in [delta, r] from their own BS, r = D/2.
struct ChannelParams {
    double alpha = 2.0;  // path-loss exponent
    double D = 2.0;      // inter-BS distance
    double delta = 0.01; // forbidden-region radius
    int M = 10;          // subchannels

    double r() const { return 0.5 * D; }

    // Checks 0 < delta < r, alpha > 1, M >= 1.
    void validate() const;
    // As validate(), plus M >= 2 (the delay-limited energy integral diverges for M = 1).
    void validate_hard_fairness() const;
};

struct AnnulusSupport {
    double a;  // inner radius
    double b;  // outer radius
};

/// Path-loss cdf for users uniform in distance on (a, b): s = u^-alpha.
double pathloss_cdf(double x, const AnnulusSupport& support, double alpha);

/// H_M(y) = (1 - e^-y)^M, cdf of the largest of M unit exponentials.
double fading_peak_cdf(double y, int M);

/// Density of the largest of M unit exponentials.
double fading_peak_pdf(double y, int M);

/// Point where 1 - H_M(y) drops below `tail`.
double fading_peak_quantile_tail(int M, double tail = 1e-12);

/// Distribution of s * max{f^1, ..., f^M} with s drawn from pathloss_cdf on `support`.
///
/// The cdf has no closed form. Construction tabulates it against ln x with cubic
/// Hermite interpolation (values and slopes from quadrature); cdf() reads the
/// table and falls back to quadrature outside its range. The object is immutable
/// and cheap to copy.
class CompositeGainDist {
public:
    CompositeGainDist(const AnnulusSupport& support, int M, double alpha);

    /// Full-cell distribution of `params`: users on (delta, r).
    static CompositeGainDist full_cell(const ChannelParams& params);

    const AnnulusSupport& support() const { return support_; }
    int M() const { return M_; }
    double alpha() const { return alpha_; }

    double cdf(double x) const;           // table-backed
    double cdf_quadrature(double x) const;  // direct (1/(b-a)) int_a^b H_M(x u^alpha) du
    double sample(Rng& rng) const;

private:
    struct Table;
    AnnulusSupport support_;
    int M_;
    double alpha_;
    std::shared_ptr<const Table> table_;
};

/// G_M(x), evaluated by quadrature over the user distance.
double composite_gain_cdf(double x, const CompositeGainDist& dist);

/// The double integral that every delay-limited formula is built from:
///
///   int int 2^{c G(x y)} kernel(x) dF_s(x) dH_M(y) / (x y)
///
/// with G, F_s and M all taken from `dist`. Computed in (distance u, fading
/// peak y) coordinates, x = u^-alpha, so G is never differentiated. With
/// kernel == 1 this is int 2^{c G(x)} dG(x) / x.
double load_moment(const CompositeGainDist& dist, double c_bits, const Fn1& kernel,
                   const QuadratureSpec& spec = {});
double load_moment(const CompositeGainDist& dist, double c_bits, const QuadratureSpec& spec = {});

/// Path gain from a user in cell j to BS n at |n - j| = cell_offset:
/// theta selects the near (1) or far (0) side.
double cross_cell_pathloss(double s_own, int cell_offset, int theta, const ChannelParams& params);

/// 1/2 ((y - x^{-1/alpha})^-alpha + (y + x^{-1/alpha})^-alpha): a user with own
/// gain x seen from a BS at distance y, averaged over the side.
double pair_kernel(double x, double y, double alpha);

/// Summed two-sided interference from all cells, via Hurwitz zeta.
double phi_kernel(double x, const ChannelParams& params);
/// Even-cell and odd-cell parts of phi_kernel at D = 2 (partial-reuse geometry).
double phi0_kernel(double x, double alpha);
double phi1_kernel(double x, double alpha);

struct InterfererGainSample {
    int theta;        // 1 = on the side facing the victim BS
    double U;         // distance to own BS
    double f;         // fading to the victim BS
    int cell_offset;  // nonzero

    double gain(const ChannelParams& params) const;
};

InterfererGainSample draw_interferer(Rng& rng, int cell_offset, const ChannelParams& params);
double sample_interferer_gain(Rng& rng, int cell_offset, const ChannelParams& params);

/// Law of the per-user rate factors nu (unit mean).
enum class RateFactorLaw { Uniform, PointMass };

struct GainInterval {
    double lo;
    double hi;  // may be +infinity
};

/// One draw of (1/K) sum_{k in A(m)} g(s_k f_k^m) nu_k for a population of K
/// users, with A(m) the users whose best subchannel is m and whose peak gain
/// s_k max_l f_k^l lies in `interval`.
double lemma1_empirical(int K, const Fn1& g, const GainInterval& interval,
                        const CompositeGainDist& dist, Rng& rng,
                        RateFactorLaw nu_law = RateFactorLaw::Uniform);

/// Limit of lemma1_empirical: (1/M) int_A g dG_M.
double lemma1_limit(const Fn1& g, const GainInterval& interval, const CompositeGainDist& dist,
                    const QuadratureSpec& spec = {});

using KernelWithSide = std::function<double(double, int)>;

/// One draw of (1/K) sum_{k in A(m)} g(s_k, theta_k) f_k^m(n,j) nu_k / (s_k f_k^m(j,j))
/// for interferers at `cell_offset` cells from the victim BS.
double lemma2_empirical(int K, const KernelWithSide& g, const GainInterval& interval,
                        const CompositeGainDist& dist, const ChannelParams& params,
                        int cell_offset, Rng& rng,
                        RateFactorLaw nu_law = RateFactorLaw::Uniform);

/// Limit of lemma2_empirical: (1/M) int int_{xy in A} E_theta[g(x, theta)] / (x y) dF_s dH_M.
double lemma2_limit(const KernelWithSide& g, const GainInterval& interval,
                    const CompositeGainDist& dist, const QuadratureSpec& spec = {});

}  // namespace mcf
