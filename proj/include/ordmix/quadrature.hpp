#pragma once

#include <cmath>
#include <string>

#include "ordmix/config.hpp"
#include "ordmix/errors.hpp"

namespace ordmix {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double tol, int depth, int min_depth)
{
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;

    if (min_depth <= 0 && std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw NonConvergence("adaptive Simpson hit the depth cap on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]");
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, min_depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, min_depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over a finite [a, b] with absolute tolerance tol.
///
/// The first few levels are always subdivided so a lucky five-point estimate
/// cannot terminate the recursion. Throws NonConvergence past max_depth.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = config::quad_abs_tol,
                        int max_depth = config::quad_max_depth)
{
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("adaptive_simpson needs finite limits");
    if (a == b)
        return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth, 4);
}

/// Integral of f over [a, +inf) (direction = +1) or (-inf, a] (direction = -1).
///
/// Integrates consecutive windows of doubling width until two successive
/// windows contribute less than tol / 8 each.
template <class F>
double integrate_tail(F&& f, double a, int direction, double tol = config::quad_abs_tol)
{
    const double window_tol = tol / 16.0;
    double width = 1.0;
    double total = 0.0;
    int quiet = 0;
    for (int k = 0; k < 1100; ++k) {
        const double b = a + direction * width;
        if (!std::isfinite(b))
            break;
        const double piece = direction > 0 ? adaptive_simpson(f, a, b, window_tol)
                                           : adaptive_simpson(f, b, a, window_tol);
        total += piece;
        quiet = (k >= 2 && std::abs(piece) < tol / 8.0) ? quiet + 1 : 0;
        if (quiet >= 2)
            return total;
        a = b;
        width *= 2.0;
    }
    throw NonConvergence("tail integral did not settle");
}

} // namespace ordmix
