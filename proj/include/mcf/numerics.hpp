#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "mcf/errors.hpp"

namespace mcf {

struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;

    void validate() const;
    // Same limits, tolerances scaled by `factor`.
    QuadratureSpec tightened(double factor) const;
};

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

/// Hurwitz zeta function zeta(a, q) = sum_{n>=0} (n + q)^-a.
///
/// Euler-Maclaurin summation: N explicit terms followed by the integral tail and
/// Bernoulli corrections, with N grown until the last correction is below 1e-16
/// of the running sum. Throws DomainError unless a > 1 and q > 0.
double hurwitz_zeta(double a, double q);

/// Analytic continuation of zeta(s, q) for any s > 0, s != 1 (q > 0).
/// Used for differences of zeta values whose individual series diverge.
double hurwitz_zeta_continued(double s, double q);

/// Adaptive Gauss-Kronrod (G10/K21) quadrature with global subdivision of the
/// interval carrying the largest error estimate.
///
/// `hi` may be +infinity; the range is then mapped onto [0, 1) by
/// x = lo + t / (1 - t). Throws ConvergenceError once `max_subdivisions`
/// intervals have been split without meeting max(abs_tol, rel_tol * |I|).
double integrate_1d(const Fn1& f, double lo, double hi, const QuadratureSpec& spec = {});

struct Rectangle {
    double x_lo, x_hi;  // x_hi may be +infinity
    double y_lo, y_hi;  // y_hi may be +infinity
};

/// Iterated adaptive quadrature: the outer integral over x of an inner integral
/// over y, the inner one run at a tolerance ten times tighter.
double integrate_2d(const Fn2& f, const Rectangle& domain, const QuadratureSpec& spec = {});

/// Brent's method on a sign-changing bracket. Returns x with the final bracket
/// width <= tol. Throws BracketError if f(lo) and f(hi) share a sign.
double find_root_bracketed(const Fn1& f, double lo, double hi, double tol = 1e-12);

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Vector2 = std::array<double, 2>;

/// Solves A x = b by Cramer's rule; throws SingularSystemError when |det A| is
/// within a few ulps of the scale of its products.
Vector2 solve_2x2(const Matrix2& a, const Vector2& b);

double determinant(const Matrix2& a);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace mcf
