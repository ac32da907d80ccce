#include "mcf/simplified.hpp"

#include <cmath>
#include <string>

namespace mcf {

namespace {

void check_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) throw DomainError(std::string(what) + " must be positive and finite");
}

}  // namespace

BetaBounds beta_bounds(const ChannelParams& params) {
    if (!(params.alpha > 1.0)) throw DomainError("beta_bounds: alpha must exceed 1");
    if (!(params.D > 0.0)) throw DomainError("beta_bounds: D must be positive");
    const double scale = std::pow(params.D, -params.alpha);
    return {2.0 * scale * hurwitz_zeta(params.alpha, 1.0),
            scale * (hurwitz_zeta(params.alpha, 0.5) + hurwitz_zeta(params.alpha, 1.5))};
}

OperatingPoint simplified_mc_ebn0(double c, double beta, const CompositeGainDist& dist,
                                  const QuadratureSpec& spec) {
    if (!(beta >= 0.0)) throw DomainError("simplified_mc_ebn0: beta must be >= 0");
    const OperatingPoint single = sc_ebn0(c, dist, spec);
    const double denom = 1.0 - beta * c * single.ebn0_linear;
    if (!(denom > 0.0))
        throw LimitExceeded("simplified_mc_ebn0: load " + std::to_string(c) + " is beyond the limit for beta " +
                            std::to_string(beta));
    return OperatingPoint::from_linear(c, single.ebn0_linear / denom);
}

BetaEstimate beta_effective(double c, const CompositeGainDist& dist, const ChannelParams& params,
                            const QuadratureSpec& spec) {
    params.validate_hard_fairness();
    if (!(c >= 0.0)) throw DomainError("beta_effective: c must be >= 0");
    const double weighted = load_moment(dist, c, [&](double x) { return phi_kernel(x, params); }, spec);
    const double plain = load_moment(dist, c, spec);
    const BetaBounds bounds = beta_bounds(params);
    return {weighted / plain, c, bounds.lower, bounds.upper};
}

BetaEstimate nominal_beta(double c_min, double c_max, const CompositeGainDist& dist,
                          const ChannelParams& params, const QuadratureSpec& spec) {
    if (!(c_min <= c_max)) throw DomainError("nominal_beta: need c_min <= c_max");
    return beta_effective(0.5 * (c_min + c_max), dist, params, spec);
}

double sc_to_mc(double ebn0_sc, double beta, double c) {
    check_positive(ebn0_sc, "sc_to_mc: ebn0_sc");
    if (!(beta >= 0.0)) throw DomainError("sc_to_mc: beta must be >= 0");
    const double denom = 1.0 - beta * c * ebn0_sc;
    if (!(denom > 0.0)) throw DomainError("sc_to_mc: operating point lies in the forbidden region");
    return ebn0_sc / denom;
}

std::string_view regime_name(Regime regime) {
    switch (regime) {
        case Regime::NoiseDominated: return "noise-dominated";
        case Regime::InterferenceDominated: return "interference-dominated";
        case Regime::Forbidden: return "forbidden";
    }
    return "unknown";
}

double noise_regime_threshold(double beta, double c) {
    check_positive(beta, "noise_regime_threshold: beta");
    check_positive(c, "noise_regime_threshold: c");
    return 1.0 / (2.0 * beta * c);
}

Regime classify_regime(double ebn0_sc, double beta, double c) {
    check_positive(ebn0_sc, "classify_regime: ebn0_sc");
    check_positive(beta, "classify_regime: beta");
    check_positive(c, "classify_regime: c");
    if (ebn0_sc >= 1.0 / (beta * c)) return Regime::Forbidden;
    if (ebn0_sc <= noise_regime_threshold(beta, c)) return Regime::NoiseDominated;
    return Regime::InterferenceDominated;
}

}  // namespace mcf
