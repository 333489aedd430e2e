#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "stieltjes/derivator.hpp"

namespace stieltjes {

/// Complex-valued integrand on the working window. The Lebesgue-Stieltjes
/// convention over [0, t) evaluates f at jump times directly (post-jump
/// weights come from the measure, not from f).
using Integrand = std::function<Complex(double)>;

struct QuadratureSettings {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    long max_subdivisions = 1 << 20;
};

/// mu_g([t1, t2)) = g(t2) - g(t1).
inline double ls_measure(const Derivator& d, double t1, double t2) {
    if (!(t1 <= t2)) throw DomainError("ls_measure: need t1 <= t2");
    return d.eval(t2) - d.eval(t1);
}

namespace detail {

struct QuadAccum {
    Complex value{0.0, 0.0};
    double bound = 0.0;
    long subdivisions = 0;
    bool budget_exhausted = false;
};

/// Recursive adaptive Simpson on one smooth panel.
inline void adaptive_simpson(const std::function<Complex(double)>& h, double a, double b,
                             Complex fa, Complex fm, Complex fb, Complex whole, double tol,
                             int depth, long budget, QuadAccum& acc) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    Complex flm = h(lm), frm = h(rm);
    Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    Complex s2 = left + right;
    double err = std::abs(s2 - whole) / 15.0;
    ++acc.subdivisions;
    if (err <= tol || depth >= 48) {
        acc.value += s2 + (s2 - whole) / 15.0;
        acc.bound += err;
        return;
    }
    if (acc.subdivisions >= budget) {
        acc.value += s2;
        acc.bound += err;
        acc.budget_exhausted = true;
        return;
    }
    adaptive_simpson(h, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, budget, acc);
    adaptive_simpson(h, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, budget, acc);
}

/// Integral of f with respect to mu_{g^C} over [0, t), computed on the
/// gamma-transformed axis: int_{[0, g^C(t))} (f o gamma) d(lambda). The
/// transformed integrand can be discontinuous at images of flat segments and
/// of jump times, so those images become explicit panel boundaries;
/// boundary samples are nudged into the open panel.
inline QuadAccum continuous_part_integral(const Derivator& d, const Integrand& f, double t,
                                          const QuadratureSettings& q) {
    QuadAccum acc;
    const ContinuousPart& c = d.continuous();
    double upper = c.value(t);
    double scale = std::max(1.0, c.total());
    double nudge = 1e-13 * scale;
    if (upper <= 2.0 * nudge) return acc;  // empty or pure-jump window

    std::vector<double> cuts;
    cuts.push_back(0.0);
    cuts.push_back(upper);
    for (auto [a, b] : c.flat_segments()) {
        double y = c.value(a);
        if (y > 0.0 && y < upper) cuts.push_back(y);
    }
    for (const Jump& j : d.jumps()) {
        if (j.time >= t) break;
        double y = c.value(j.time);
        if (y > 0.0 && y < upper) cuts.push_back(y);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double p = cuts[k], r = cuts[k + 1];
        if (r - p <= 2.0 * nudge) continue;
        double lo = p + nudge, hi = r - nudge;
        auto h = [&](double y) {
            double yy = std::clamp(y, lo, hi);
            return f(c.pseudo_inverse(yy));
        };
        double m = 0.5 * (p + r);
        Complex fa = h(p), fm = h(m), fb = h(r);
        Complex whole = (r - p) / 6.0 * (fa + 4.0 * fm + fb);
        double tol = std::max(q.abs_tol * (r - p) / upper, 1e-300);
        adaptive_simpson(h, p, r, fa, fm, fb, whole, tol, 0, q.max_subdivisions, acc);
    }
    return acc;
}

} // namespace detail

/// Lebesgue-Stieltjes integral of f over [0, t) with respect to mu_g:
/// the continuous-part integral (change of variables through the
/// pseudo-inverse) plus the finite jump sum. A jump exactly at t is excluded
/// by the half-open convention. Throws AccuracyError when the quadrature
/// cannot reach the requested tolerance within the subdivision budget.
inline Complex ls_integral(const Derivator& d, const Integrand& f, double t,
                           const QuadratureSettings& q = {}) {
    if (!(t >= 0.0) || !(t <= d.horizon()))
        throw DomainError("ls_integral: t outside the working window");

    Complex jump_sum{0.0, 0.0};
    for (const Jump& j : d.jumps()) {
        if (j.time >= t) break;
        jump_sum += f(j.time) * j.delta;
    }

    detail::QuadAccum acc = detail::continuous_part_integral(d, f, t, q);
    Complex total = acc.value + jump_sum;
    double tol = std::max(q.abs_tol, q.rel_tol * std::abs(total));
    if ((acc.budget_exhausted && acc.bound > tol) || acc.bound > 10.0 * tol)
        throw AccuracyError("ls_integral: quadrature did not converge within max_subdivisions",
                            total, acc.bound);
    return total;
}

/// Same split for the measure mu_{g^C} alone (no jump sum).
inline Complex ls_integral_continuous(const Derivator& d, const Integrand& f, double t,
                                      const QuadratureSettings& q = {}) {
    if (!(t >= 0.0) || !(t <= d.horizon()))
        throw DomainError("ls_integral_continuous: t outside the working window");
    detail::QuadAccum acc = detail::continuous_part_integral(d, f, t, q);
    double tol = std::max(q.abs_tol, q.rel_tol * std::abs(acc.value));
    if ((acc.budget_exhausted && acc.bound > tol) || acc.bound > 10.0 * tol)
        throw AccuracyError("ls_integral_continuous: quadrature did not converge", acc.value,
                            acc.bound);
    return acc.value;
}

} // namespace stieltjes
