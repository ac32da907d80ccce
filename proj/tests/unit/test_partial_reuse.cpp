#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mcf/partial_reuse.hpp"

using namespace mcf;
using doctest::Approx;

namespace {

const ChannelParams kDefault{};

const PartialReuseModel& default_model() {
    static const PartialReuseModel model(kDefault);
    return model;
}

// ln2 * load * E[2^{load G(X)} kernel(X) / X] with X drawn from `dist`.
struct McEstimate {
    double mean;
    double se;
};

McEstimate sample_coefficient(const CompositeGainDist& dist, double load, const Fn1& kernel, long n, unsigned seed) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> uniform(dist.support().a, dist.support().b);
    std::exponential_distribution<double> expo(1.0);
    double sum = 0.0;
    double sum2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double s = std::pow(uniform(engine), -dist.alpha());
        double peak = 0.0;
        for (int m = 0; m < dist.M(); ++m) peak = std::max(peak, expo(engine));
        const double x = s * peak;
        const double v = std::log(2.0) * load * std::pow(2.0, load * dist.cdf(x)) * kernel(s) / x;
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    return {mean, std::sqrt((sum2 / n - mean * mean) / n)};
}

}  // namespace

TEST_SUITE("partial_reuse") {

TEST_CASE("spectral-efficiency bookkeeping") {
    CHECK(partial_spectral_efficiency(20.0, 1.0, kDefault) == Approx(2.0).epsilon(1e-14));
    CHECK(partial_spectral_efficiency(20.0, kDefault.delta, kDefault) == Approx(1.0).epsilon(1e-14));
    CHECK(partial_spectral_efficiency(20.0, 0.5, kDefault) == Approx(1.48 / 0.99).epsilon(1e-12));
    CHECK(partial_spectral_efficiency(20.0, 0.5, kDefault) == Approx(1.49495).epsilon(1e-5));
    CHECK_THROWS_AS(partial_spectral_efficiency(20.0, 1.5, kDefault), DomainError);
    CHECK_THROWS_AS(partial_spectral_efficiency(-1.0, 0.5, kDefault), DomainError);
}

TEST_CASE("loads reproduce the requested spectral efficiency") {
    for (double r0 : {kDefault.delta, 0.3, 0.7, 1.0}) {
        const auto [load0, load1] = default_model().loads(2.0, r0);
        const double gamma0 = load0 * kDefault.M;
        CHECK(partial_spectral_efficiency(gamma0, r0, kDefault) == Approx(2.0).epsilon(1e-12));
        CHECK(load1 == Approx(load0 * (r0 - kDefault.delta) / (1.0 - kDefault.delta)).epsilon(1e-12));
        const auto state = default_model().evaluate(2.0, r0);
        CHECK(state.gamma1 == Approx(state.gamma0 * (r0 - kDefault.delta) / (1.0 - kDefault.delta)).epsilon(1e-12));
        for (const auto& row : state.a_matrix)
            for (double a : row) CHECK(a >= 0.0);
    }
}

TEST_CASE("full reuse radius coincides with the full-reuse system") {
    const auto dist = CompositeGainDist::full_cell(kDefault);
    for (int i = 1; i <= 10; ++i) {
        const double c = 0.4 * i;
        const auto state = default_model().evaluate(c, 1.0);
        CAPTURE(c);
        CHECK(state.point.ebn0_linear == Approx(mc_ebn0(c, dist, kDefault).ebn0_linear).epsilon(1e-6));
        CHECK(state.i0 == Approx(state.i1).epsilon(1e-9));
        CHECK(state.a_matrix[0][0] + state.a_matrix[0][1] ==
              Approx(interference_load(c, dist, kDefault)).epsilon(1e-8));
    }
}

TEST_CASE("vanishing load gives vanishing coupling") {
    const auto a = default_model().aij_coefficients(1e-7, 0.5);
    for (const auto& row : a)
        for (double v : row) CHECK(v < 1e-6);
    const auto pair = default_model().interference_pair(1e-7, 0.5);
    CHECK(pair[0] < 1e-6);
    CHECK(pair[1] < 1e-6);
    const auto zero = default_model().aij_coefficients(0.0, 0.5);
    for (const auto& row : zero)
        for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("coupling coefficients agree with sampling estimates") {
    const double c = 2.0;
    const double r0 = 0.5;
    const auto [load0, load1] = default_model().loads(c, r0);
    const auto a = default_model().aij_coefficients(c, r0);
    const auto full = CompositeGainDist::full_cell(kDefault);
    const CompositeGainDist inner({kDefault.delta, r0}, kDefault.M, kDefault.alpha);
    const Fn1 even = [](double x) { return phi0_kernel(x, 2.0); };
    const Fn1 odd = [](double x) { return phi1_kernel(x, 2.0); };
    const long n = 200000;
    const McEstimate a00 = sample_coefficient(full, load0, even, n, 1);
    const McEstimate a10 = sample_coefficient(full, load0, odd, n, 2);
    const McEstimate a01 = sample_coefficient(inner, load1, odd, n, 3);
    const McEstimate a11 = sample_coefficient(inner, load1, even, n, 4);
    CHECK(std::abs(a[0][0] - a00.mean) < 4.0 * a00.se);
    CHECK(std::abs(a[1][0] - a10.mean) < 4.0 * a10.se);
    CHECK(std::abs(a[0][1] - a01.mean) < 4.0 * a01.se);
    CHECK(std::abs(a[1][1] - a11.mean) < 4.0 * a11.se);
}

TEST_CASE("interference pair is the limit of the coupled iteration") {
    const auto a = default_model().aij_coefficients(2.0, 0.5);
    const auto pair = default_model().interference_pair(2.0, 0.5);
    double i0 = 0.0;
    double i1 = 0.0;
    for (int it = 0; it < 10000; ++it) {
        const double n0 = a[0][0] * (1.0 + i0) + a[0][1] * (1.0 + i1);
        const double n1 = a[1][0] * (1.0 + i0) + a[1][1] * (1.0 + i1);
        const bool done = std::abs(n0 - i0) < 1e-15 && std::abs(n1 - i1) < 1e-15;
        i0 = n0;
        i1 = n1;
        if (done) break;
    }
    CHECK(std::abs(pair[0] - i0) < 1e-9);
    CHECK(std::abs(pair[1] - i1) < 1e-9);
}

TEST_CASE("interference pair is non-negative and increases with the load") {
    Vector2 previous{0.0, 0.0};
    for (double c : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto pair = default_model().interference_pair(c, 0.6);
        CHECK(pair[0] > previous[0]);
        CHECK(pair[1] > previous[1]);
        previous = pair;
    }
}

TEST_CASE("reuse-2 limit: only one parity transmits") {
    const double delta = kDefault.delta;
    const auto a = default_model().aij_coefficients(1.5, delta);
    CHECK(a[0][1] == 0.0);
    CHECK(a[1][1] == 0.0);
    const double limit = default_model().spectral_efficiency_limit(delta);
    // At the limit the fully active parity alone saturates: ln2 * load * E[...Phi0...] = 1 with load = 2C.
    const auto full = CompositeGainDist::full_cell(kDefault);
    const double load = 2.0 * limit;
    const double coupling =
        std::log(2.0) * load * load_moment(full, load, [](double x) { return phi0_kernel(x, 2.0); });
    CHECK(coupling == Approx(1.0).epsilon(1e-7));
    CHECK_THROWS_AS(default_model().evaluate(limit + 0.05, delta), LimitExceeded);
    CHECK(std::isfinite(default_model().ebn0(limit - 0.05, delta).ebn0_db));
}

TEST_CASE("Eb/N0 is continuous in the reuse radius") {
    const double c = 2.0;
    double previous = default_model().ebn0(c, kDefault.delta).ebn0_db;
    double worst = 0.0;
    for (int i = 1; i < 256; ++i) {
        const double r0 = kDefault.delta + (1.0 - kDefault.delta) * i / 255.0;
        const double value = default_model().ebn0(c, r0).ebn0_db;
        worst = std::max(worst, std::abs(value - previous));
        previous = value;
    }
    CHECK(worst < 0.1);
}

TEST_CASE("reuse-radius optimizer") {
    const double delta = kDefault.delta;
    // Halving the outer-zone rate pays off even at light load, so the
    // optimum stays interior and beats the isolated cell.
    const auto low = default_model().optimize_r0(0.25);
    REQUIRE(low.feasible);
    CHECK(low.r0 > delta);
    CHECK(low.r0 < 1.0);
    const auto dist = CompositeGainDist::full_cell(kDefault);
    CHECK(low.point.ebn0_db < sc_ebn0(0.25, dist).ebn0_db);

    const auto high = default_model().optimize_r0(4.0);
    REQUIRE(high.feasible);
    CHECK(high.r0 > delta + 0.05);
    CHECK(high.r0 < 0.95);
    const double full = default_model().ebn0(4.0, 1.0).ebn0_db;
    CHECK(std::abs(full - high.point.ebn0_db - 7.0) < 1.0);

    for (double c : {1.0, 3.0}) {
        const auto opt = default_model().optimize_r0(c);
        REQUIRE(opt.feasible);
        CHECK(opt.point.ebn0_linear <= default_model().ebn0(c, 1.0).ebn0_linear);
        CHECK(opt.point.ebn0_linear <= default_model().ebn0(c, delta).ebn0_linear);
    }
}

TEST_CASE("spectral radius") {
    CHECK(spectral_radius({{{0.5, 0.0}, {0.0, 0.2}}}) == Approx(0.5));
    CHECK(spectral_radius({{{0.0, 0.4}, {0.9, 0.0}}}) == Approx(0.6));
    CHECK(spectral_radius({{{0.3, 0.3}, {0.3, 0.3}}}) == Approx(0.6));
}

TEST_CASE("other cell spacings follow by a dB shift") {
    CHECK(cell_rescaling_shift_db(2.0, 2.0) == 0.0);
    CHECK(cell_rescaling_shift_db(4.0, 2.0) == Approx(20.0 * std::log10(2.0)));
    const PartialReuseModel wide({2.0, 4.0, 0.02, 10});
    CHECK(wide.normalized_params().D == 2.0);
    CHECK(wide.normalized_params().delta == Approx(0.01));
    for (double r0 : {0.3, 1.0})
        CHECK(wide.ebn0(2.0, r0).ebn0_db ==
              Approx(default_model().ebn0(2.0, r0).ebn0_db + cell_rescaling_shift_db(4.0, 2.0)).epsilon(1e-10));
}

TEST_CASE("invalid reuse radius is rejected") {
    CHECK_THROWS_AS(default_model().evaluate(1.0, 1.2), DomainError);
    CHECK_THROWS_AS(default_model().evaluate(1.0, 0.001), DomainError);
    CHECK_THROWS_AS(default_model().evaluate(-1.0, 0.5), DomainError);
}

}  // TEST_SUITE
