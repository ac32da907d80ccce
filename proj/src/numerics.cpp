#include "mcf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mcf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_{2k} / (2k)! for k = 1..15.
constexpr std::array<double, 15> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186134520519971831808000000.0,
    -3392780147.0 / 37893265687455865519472640000000.0,
    1723168255201.0 / 759790291646040068357842010112000000.0,
};

double euler_maclaurin_zeta(double s, double q) {
    // Shift until the asymptotic tail converges quickly for this exponent.
    const int n_min = std::max(10, static_cast<int>(std::ceil(s)) + 2);
    for (int n_terms = n_min;; n_terms *= 2) {
        double sum = 0.0;
        for (int n = 0; n < n_terms; ++n) sum += std::pow(n + q, -s);
        const double w = n_terms + q;
        const double w_pow = std::pow(w, -s);
        sum += w * w_pow / (s - 1.0) + 0.5 * w_pow;

        // Rising factorial s (s+1) ... (s+2k-2) times w^{-s-2k+1}.
        double factor = s * w_pow / w;
        bool converged = false;
        for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
            const double term = kBernoulliOverFactorial[k] * factor;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) {
                converged = true;
                break;
            }
            const double m = 2.0 * static_cast<double>(k) + 1.0;
            factor *= (s + m) * (s + m + 1.0) / (w * w);
        }
        if (converged || n_terms > (1 << 20)) return sum;
    }
}

// Nodes of the 21-point Kronrod rule with its embedded 10-point Gauss rule.
struct KronrodRule {
    std::array<double, 11> x{};
    std::array<double, 11> wk{};
    std::array<double, 11> wg{};  // zero at Kronrod-only nodes

    KronrodRule() {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        const auto& xs = gauss_kronrod<double, 21>::abscissa();
        const auto& ws = gauss_kronrod<double, 21>::weights();
        const auto& gw = gauss<double, 10>::weights();
        for (std::size_t i = 0; i < 11; ++i) {
            x[i] = xs[i];
            wk[i] = ws[i];
            wg[i] = (i % 2 == 1) ? gw[i / 2] : 0.0;
        }
    }
};

const KronrodRule& kronrod_rule() {
    static const KronrodRule rule;
    return rule;
}

struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel apply_rule(const Fn1& f, double lo, double hi) {
    const auto& rule = kronrod_rule();
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<double, 21> fv{};
    fv[0] = f(center);
    for (std::size_t i = 1; i < 11; ++i) {
        fv[2 * i - 1] = f(center - half * rule.x[i]);
        fv[2 * i] = f(center + half * rule.x[i]);
    }

    double kronrod = fv[0] * rule.wk[0];
    double gauss = 0.0;
    double abs_sum = std::abs(fv[0]) * rule.wk[0];
    for (std::size_t i = 1; i < 11; ++i) {
        const double pair = fv[2 * i - 1] + fv[2 * i];
        kronrod += rule.wk[i] * pair;
        gauss += rule.wg[i] * pair;
        abs_sum += rule.wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    }
    const double mean = 0.5 * kronrod;
    double asc = std::abs(fv[0] - mean) * rule.wk[0];
    for (std::size_t i = 1; i < 11; ++i)
        asc += rule.wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);

    // QUADPACK error heuristic with a roundoff floor.
    double err = std::abs(kronrod - gauss);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEps))
        err = std::max(err, 50.0 * kEps * abs_sum);

    if (!std::isfinite(kronrod))
        throw ConvergenceError("integrate_1d: integrand is not finite on [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
    return {lo, hi, kronrod, err};
}

double integrate_finite(const Fn1& f, double lo, double hi, const QuadratureSpec& spec) {
    if (lo == hi) return 0.0;
    std::priority_queue<Panel> panels;
    panels.push(apply_rule(f, lo, hi));
    double total = panels.top().value;
    double total_err = panels.top().error;

    for (int splits = 0;; ++splits) {
        if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) return total;
        if (splits >= spec.max_subdivisions)
            throw ConvergenceError("integrate_1d: tolerance not met after " +
                                   std::to_string(spec.max_subdivisions) +
                                   " subdivisions (error estimate " + std::to_string(total_err) + ")");

        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi)
            throw ConvergenceError("integrate_1d: interval collapsed below machine resolution");
        const Panel left = apply_rule(f, worst.lo, mid);
        const Panel right = apply_rule(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);

        // Running sums drift; refresh them from the heap once in a while.
        if (splits % 256 == 255) {
            auto copy = panels;
            total = total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be positive");
    if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be positive");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
    return {abs_tol * factor, rel_tol * factor, max_subdivisions};
}

double hurwitz_zeta(double a, double q) {
    if (!(a > 1.0)) throw DomainError("hurwitz_zeta: exponent must exceed 1");
    if (!(q > 0.0)) throw DomainError("hurwitz_zeta: shift must be positive");
    return euler_maclaurin_zeta(a, q);
}

double hurwitz_zeta_continued(double s, double q) {
    if (!(s > 0.0) || s == 1.0) throw DomainError("hurwitz_zeta_continued: need s > 0, s != 1");
    if (!(q > 0.0)) throw DomainError("hurwitz_zeta_continued: shift must be positive");
    return euler_maclaurin_zeta(s, q);
}

double integrate_1d(const Fn1& f, double lo, double hi, const QuadratureSpec& spec) {
    spec.validate();
    if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo))
        throw DomainError("integrate_1d: lower limit must be finite");
    if (hi < lo) return -integrate_1d(f, hi, lo, spec);
    if (std::isinf(hi)) {
        const Fn1 mapped = [&](double t) {
            const double one_minus = 1.0 - t;
            const double x = lo + t / one_minus;
            return f(x) / (one_minus * one_minus);
        };
        return integrate_finite(mapped, 0.0, 1.0, spec);
    }
    return integrate_finite(f, lo, hi, spec);
}

double integrate_2d(const Fn2& f, const Rectangle& domain, const QuadratureSpec& spec) {
    const QuadratureSpec inner = spec.tightened(0.1);
    const Fn1 outer = [&](double x) {
        return integrate_1d([&](double y) { return f(x, y); }, domain.y_lo, domain.y_hi, inner);
    };
    return integrate_1d(outer, domain.x_lo, domain.x_hi, spec);
}

double find_root_bracketed(const Fn1& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw DomainError("find_root_bracketed: tol must be positive");
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketError("find_root_bracketed: f(lo) and f(hi) have the same sign");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 500; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation, or secant when only two points differ.
            const double s = fb / fa;
            double p, qv;
            if (a == c) {
                p = 2.0 * m * s;
                qv = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                qv = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                qv = -qv;
            else
                p = -p;
            if (2.0 * p < std::min(3.0 * m * qv - std::abs(tol1 * qv), std::abs(e * qv))) {
                e = d;
                d = p / qv;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (m > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw ConvergenceError("find_root_bracketed: iteration limit reached");
}

double determinant(const Matrix2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

Vector2 solve_2x2(const Matrix2& a, const Vector2& b) {
    const double det = determinant(a);
    const double scale = std::abs(a[0][0] * a[1][1]) + std::abs(a[0][1] * a[1][0]);
    if (!(std::abs(det) > 8.0 * kEps * scale) || scale == 0.0)
        throw SingularSystemError("solve_2x2: matrix is singular to working precision");
    return {(b[0] * a[1][1] - a[0][1] * b[1]) / det, (a[0][0] * b[1] - a[1][0] * b[0]) / det};
}

}  // namespace mcf
