#include "mcf/hard_fairness.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mcf {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_load(double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("spectral efficiency must be finite and >= 0");
}

}  // namespace

OperatingPoint sc_ebn0(double c, const CompositeGainDist& dist, const QuadratureSpec& spec) {
    check_load(c);
    return OperatingPoint::from_linear(c, kLn2 * load_moment(dist, c, spec));
}

double interference_load(double c, const CompositeGainDist& dist, const ChannelParams& params,
                         const QuadratureSpec& spec) {
    check_load(c);
    params.validate_hard_fairness();
    if (c == 0.0) return 0.0;
    return kLn2 * c * load_moment(dist, c, [&](double x) { return phi_kernel(x, params); }, spec);
}

double hf_denominator(double c, const CompositeGainDist& dist, const ChannelParams& params,
                      const QuadratureSpec& spec) {
    return 1.0 - interference_load(c, dist, params, spec);
}

OperatingPoint mc_ebn0(double c, const CompositeGainDist& dist, const ChannelParams& params,
                       const QuadratureSpec& spec) {
    const double denom = hf_denominator(c, dist, params, spec);
    if (!(denom > 0.0))
        throw LimitExceeded("mc_ebn0: load " + std::to_string(c) +
                            " is at or beyond the spectral-efficiency limit");
    const OperatingPoint single = sc_ebn0(c, dist, spec);
    return OperatingPoint::from_linear(c, single.ebn0_linear / denom);
}

double spectral_efficiency_limit(const CompositeGainDist& dist, const ChannelParams& params,
                                 const QuadratureSpec& spec) {
    params.validate_hard_fairness();
    const Fn1 denom = [&](double c) { return hf_denominator(c, dist, params, spec); };
    double lo = 1e-3;
    double hi = 64.0;
    if (!(denom(lo) > 0.0)) return lo;  // infeasible at any practical load
    // 2^{c G} overflows past c ~ 1000.
    while (denom(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 512.0) return std::numeric_limits<double>::infinity();
    }
    return find_root_bracketed(denom, lo, hi, 1e-10);
}

double asymptotic_interference(double c, const CompositeGainDist& dist, const ChannelParams& params,
                               double n0, const QuadratureSpec& spec) {
    if (!(n0 > 0.0)) throw DomainError("asymptotic_interference: n0 must be positive");
    const double a = interference_load(c, dist, params, spec);
    if (!(a < 1.0))
        throw LimitExceeded("asymptotic_interference: load " + std::to_string(c) +
                            " is at or beyond the spectral-efficiency limit");
    return n0 * a / (1.0 - a);
}

}  // namespace mcf
