#include "mcf/partial_reuse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mcf {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInfeasible = std::numeric_limits<double>::infinity();

ChannelParams normalize(const ChannelParams& params) {
    params.validate_hard_fairness();
    ChannelParams out = params;
    out.delta = 2.0 * params.delta / params.D;
    out.D = 2.0;
    return out;
}

bool is_reuse_two(double r0, double delta) { return r0 <= delta; }

}  // namespace

double partial_spectral_efficiency(double gamma0_bits, double r0, const ChannelParams& params) {
    const ChannelParams norm = normalize(params);
    if (!(gamma0_bits > 0.0)) throw DomainError("partial_spectral_efficiency: gamma0 must be positive");
    if (!(r0 >= norm.delta && r0 <= 1.0)) throw DomainError("partial_spectral_efficiency: r0 must lie in [delta, 1]");
    return gamma0_bits / (2.0 * params.M) * (1.0 + r0 - 2.0 * norm.delta) / (1.0 - norm.delta);
}

double cell_rescaling_shift_db(double D, double alpha) {
    if (!(D > 0.0)) throw DomainError("cell_rescaling_shift_db: D must be positive");
    return 10.0 * alpha * std::log10(D / 2.0);
}

double spectral_radius(const Matrix2& a) {
    const double trace = a[0][0] + a[1][1];
    const double gap = a[0][0] - a[1][1];
    return 0.5 * (trace + std::sqrt(gap * gap + 4.0 * a[0][1] * a[1][0]));
}

PartialReuseModel::PartialReuseModel(const ChannelParams& params, const QuadratureSpec& spec)
    : params_(params),
      normalized_(normalize(params)),
      spec_(spec),
      shift_db_(cell_rescaling_shift_db(params.D, params.alpha)),
      full_(CompositeGainDist::full_cell(normalized_)) {}

std::pair<double, double> PartialReuseModel::loads(double c, double r0) const {
    const double delta = normalized_.delta;
    if (!(c >= 0.0)) throw DomainError("partial reuse: c must be >= 0");
    if (!(r0 >= delta && r0 <= 1.0)) throw DomainError("partial reuse: r0 must lie in [delta, 1]");
    const double span = 1.0 + r0 - 2.0 * delta;
    return {2.0 * c * (1.0 - delta) / span, 2.0 * c * (r0 - delta) / span};
}

CompositeGainDist PartialReuseModel::inner_dist(double r0) const {
    return CompositeGainDist({normalized_.delta, r0}, normalized_.M, normalized_.alpha);
}

Matrix2 PartialReuseModel::aij_coefficients(double c, double r0) const {
    const auto [load0, load1] = loads(c, r0);
    const double alpha = normalized_.alpha;
    const Fn1 even_kernel = [alpha](double x) { return phi0_kernel(x, alpha); };
    const Fn1 odd_kernel = [alpha](double x) { return phi1_kernel(x, alpha); };

    Matrix2 a{};
    if (load0 > 0.0) {
        a[0][0] = kLn2 * load0 * load_moment(full_, load0, even_kernel, spec_);
        a[1][0] = kLn2 * load0 * load_moment(full_, load0, odd_kernel, spec_);
    }
    if (load1 > 0.0 && !is_reuse_two(r0, normalized_.delta)) {
        if (r0 >= 1.0) {
            a[0][1] = kLn2 * load1 * load_moment(full_, load1, odd_kernel, spec_);
            a[1][1] = kLn2 * load1 * load_moment(full_, load1, even_kernel, spec_);
        } else {
            const CompositeGainDist inner = inner_dist(r0);
            a[0][1] = kLn2 * load1 * load_moment(inner, load1, odd_kernel, spec_);
            a[1][1] = kLn2 * load1 * load_moment(inner, load1, even_kernel, spec_);
        }
    }
    return a;
}

namespace {

Vector2 solve_pair(const Matrix2& a, double c, double r0) {
    const std::string where = " (c = " + std::to_string(c) + ", r0 = " + std::to_string(r0) + ")";
    if (!(spectral_radius(a) < 1.0))
        throw LimitExceeded("partial reuse: load is at or beyond the partial-reuse limit" + where);
    const Matrix2 system{{{1.0 - a[0][0], -a[0][1]}, {-a[1][0], 1.0 - a[1][1]}}};
    Vector2 pair;
    try {
        pair = solve_2x2(system, {a[0][0] + a[0][1], a[1][0] + a[1][1]});
    } catch (const SingularSystemError&) {
        throw LimitExceeded("partial reuse: interference system is singular" + where);
    }
    if (!(pair[0] >= 0.0 && pair[1] >= 0.0))
        throw LimitExceeded("partial reuse: interference pair has a negative component" + where);
    return pair;
}

}  // namespace

Vector2 PartialReuseModel::interference_pair(double c, double r0) const {
    return solve_pair(aij_coefficients(c, r0), c, r0);
}

PartialReuseState PartialReuseModel::evaluate(double c, double r0) const {
    PartialReuseState state;
    state.c = c;
    state.r0 = r0;
    const auto [load0, load1] = loads(c, r0);
    state.load0 = load0;
    state.load1 = load1;
    state.gamma0 = load0 * normalized_.M;
    state.gamma1 = load1 * normalized_.M;
    state.a_matrix = aij_coefficients(c, r0);
    const Vector2 pair = solve_pair(state.a_matrix, c, r0);
    state.i0 = pair[0];
    state.i1 = pair[1];

    // Energy per bit averaged over both phases: each parity spends (N0 + I) times
    // its single-cell energy integral, weighted by its share of the bits.
    const double delta = normalized_.delta;
    const double span = 1.0 + r0 - 2.0 * delta;
    double ebn0 = (1.0 + state.i0) * (1.0 - delta) / span * kLn2 * load_moment(full_, load0, spec_);
    if (load1 > 0.0 && !is_reuse_two(r0, delta)) {
        const double inner_moment =
            r0 >= 1.0 ? load_moment(full_, load1, spec_) : load_moment(inner_dist(r0), load1, spec_);
        ebn0 += (1.0 + state.i1) * (r0 - delta) / span * kLn2 * inner_moment;
    }
    ebn0 *= from_db(shift_db_);
    state.point = OperatingPoint::from_linear(c, ebn0);
    return state;
}

PartialReuseModel::Optimum PartialReuseModel::optimize_r0(double c, int grid_points, double r0_tol) const {
    if (!(c > 0.0)) throw DomainError("optimize_r0: c must be positive");
    if (grid_points < 3) throw DomainError("optimize_r0: need at least 3 grid points");
    const double delta = normalized_.delta;
    const auto objective = [&](double r0) {
        try {
            return evaluate(c, r0).point.ebn0_linear;
        } catch (const LimitExceeded&) {
            return kInfeasible;
        }
    };

    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    std::vector<double> value(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = delta + (1.0 - delta) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        value[i] = objective(grid[i]);
    }
    const auto best = static_cast<std::size_t>(std::min_element(value.begin(), value.end()) - value.begin());
    Optimum out;
    if (!std::isfinite(value[best])) return out;

    // Golden-section search on the two grid cells around the best node.
    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[std::min(best + 1, grid.size() - 1)];
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > r0_tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    double r0 = grid[best];
    double f = value[best];
    for (const auto& [x, fx] : {std::pair{x1, f1}, std::pair{x2, f2}})
        if (fx < f) {
            r0 = x;
            f = fx;
        }
    out.feasible = true;
    out.r0 = r0;
    out.point = OperatingPoint::from_linear(c, f);
    return out;
}

double PartialReuseModel::spectral_efficiency_limit(double r0) const {
    const auto margin = [&](double c) { return 1.0 - spectral_radius(aij_coefficients(c, r0)); };
    double lo = 1e-3;
    double hi = 64.0;
    if (!(margin(lo) > 0.0)) return lo;
    while (margin(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 512.0) return kInfeasible;
    }
    return find_root_bracketed(margin, lo, hi, 1e-10);
}

}  // namespace mcf
