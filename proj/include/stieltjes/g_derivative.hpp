#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "stieltjes/integral.hpp"

namespace stieltjes {

/// Offset used to realize right limits f(t+) numerically; closed-form
/// solutions are piecewise smooth between jumps, so a fixed small offset
/// suffices.
inline double right_limit_offset(const Derivator& d) {
    return 1e-9 * std::max(1.0, d.horizon());
}

struct GDiffSettings {
    /// Strictly decreasing step sizes; empty means (1e-3, 5e-4, 2.5e-4)*T.
    std::vector<double> step_sequence;
    bool richardson = true;
};

namespace detail {

/// Neville extrapolation of samples (x_i, y_i) to x = 0.
inline Complex extrapolate_to_zero(std::vector<double> x, std::vector<Complex> y) {
    const std::size_t n = x.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = 0; i + k < n; ++i)
            y[i] = (x[i] * y[i + 1] - x[i + k] * y[i]) / (x[i] - x[i + k]);
    return y[0];
}

enum class QuotientMode { Symmetric, Forward, Backward };

inline Complex difference_quotient(const Derivator& d, const Integrand& f, double t,
                                   const std::vector<double>& steps, bool richardson,
                                   QuotientMode mode) {
    std::vector<double> xs;
    std::vector<Complex> ys;
    const double gt = d.eval(t);
    const Complex ft = f(t);
    for (double h : steps) {
        double denom;
        Complex num;
        switch (mode) {
            case QuotientMode::Symmetric:
                denom = d.eval(t + h) - d.eval(t - h);
                num = f(t + h) - f(t - h);
                break;
            case QuotientMode::Forward:
                denom = d.eval(t + h) - gt;
                num = f(t + h) - ft;
                break;
            case QuotientMode::Backward:
                denom = gt - d.eval(t - h);
                num = ft - f(t - h);
                break;
        }
        if (std::abs(denom) < 1e-300) continue;
        // Error expands in even powers for the symmetric quotient, all powers
        // one-sided.
        xs.push_back(mode == QuotientMode::Symmetric ? h * h : h);
        ys.push_back(num / denom);
    }
    if (ys.empty())
        throw DegeneratePointError("g_derivative_at: difference quotient denominator vanished "
                                   "for every step");
    if (!richardson || ys.size() == 1) return ys.back();
    return extrapolate_to_zero(std::move(xs), std::move(ys));
}

} // namespace detail

/// Numerical g-derivative of f at t, dispatching on the point class:
///  - jumps use the exact quotient (f(t+) - f(t)) / Delta+g(t);
///  - flat interiors transport the derivative to the right endpoint of the
///    flat component;
///  - N_g endpoints use one-sided quotients (left at N_g^-, right at N_g^+);
///  - regular points use a symmetric quotient with Richardson extrapolation,
///    with steps clamped so they never cross a jump or flat boundary.
inline Complex g_derivative_at(const Derivator& d, const Integrand& f, double t,
                               const GDiffSettings& settings = {}) {
    const double T = d.horizon();
    if (!(t >= 0.0) || !(t <= T)) throw DomainError("g_derivative_at: t outside [0, T]");

    const PointClass cls = d.classify(t);
    if (cls == PointClass::Jump) {
        double delta = d.jump_at(t);
        double eps0 = right_limit_offset(d);
        return (f(std::min(t + eps0, T)) - f(t)) / delta;
    }
    if (cls == PointClass::FlatInterior) {
        // eq-of-definition third case: evaluate at the right endpoint of the
        // flat component, which is itself a jump or an N_g^+ point.
        for (auto [a, b] : d.flat_components()) {
            if (t > a && t < b) {
                if (b >= T)
                    throw DomainError("g_derivative_at: flat component reaches T; the right "
                                      "limit is outside the window");
                return g_derivative_at(d, f, b, settings);
            }
        }
    }

    std::vector<double> steps = settings.step_sequence;
    if (steps.empty()) steps = {1e-3 * T, 5e-4 * T, 2.5e-4 * T};
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (!(steps[i] > 0.0) || (i > 0 && !(steps[i] < steps[i - 1])))
            throw DomainError("g_derivative_at: step sequence must be positive and strictly "
                              "decreasing");

    double left_room = t - d.prev_feature(t);
    double right_room = d.next_feature(t) - t;
    if (t == 0.0) left_room = 0.0;
    if (t == T) right_room = 0.0;

    detail::QuotientMode mode;
    double room;
    if (cls == PointClass::FlatLeftEnd) {
        if (t == 0.0)
            throw DomainError("g_derivative_at: 0 is in N_g^-; the left limit is outside the "
                              "window");
        mode = detail::QuotientMode::Backward;
        room = left_room;
    } else if (cls == PointClass::FlatRightEnd) {
        if (t == T)
            throw DomainError("g_derivative_at: T is in N_g^+; the right limit is outside the "
                              "window");
        mode = detail::QuotientMode::Forward;
        room = right_room;
    } else {
        double sym_room = std::min(left_room, right_room);
        if (sym_room >= steps.back()) {
            mode = detail::QuotientMode::Symmetric;
            room = sym_room;
        } else if (right_room >= left_room) {
            mode = detail::QuotientMode::Forward;
            room = right_room;
        } else {
            mode = detail::QuotientMode::Backward;
            room = left_room;
        }
    }

    if (!(room > 0.0))
        throw DegeneratePointError("g_derivative_at: no admissible step at this point");
    double scale = std::min(1.0, 0.45 * room / steps.front());
    for (double& h : steps) h *= scale;

    return detail::difference_quotient(d, f, t, steps, settings.richardson, mode);
}

/// A solution with exact one-sided right limits and (for second order) an
/// analytic g-derivative track. value_right must satisfy the exact jump
/// transport of the underlying formula; derivative/derivative_right may be
/// empty for first-order solutions.
struct GSolution {
    std::function<Complex(double)> value;
    std::function<Complex(double)> value_right;
    std::function<Complex(double)> derivative;
    std::function<Complex(double)> derivative_right;
};

/// Max residual of v'_g = beta v + f over the grid. Off jumps the derivative
/// is the extrapolated numerical quotient of `value`; at jumps the exact
/// quotient (value_right - value)/Delta is used. Grid points inside the
/// closure of a flat interval are skipped: those carry no g-mass and the
/// pointwise equation only holds g-a.e. there.
inline double residual_first_order(const Derivator& d, const GSolution& sol,
                                   const Integrand& beta, const Integrand& f,
                                   std::span<const double> grid,
                                   const GDiffSettings& settings = {}) {
    double worst = 0.0;
    for (double t : grid) {
        PointClass cls = d.classify(t);
        if (cls != PointClass::Regular && cls != PointClass::Jump) continue;
        Complex rhs = beta(t) * sol.value(t) + f(t);
        Complex lhs;
        if (cls == PointClass::Jump)
            lhs = (sol.value_right(t) - sol.value(t)) / d.jump_at(t);
        else
            lhs = g_derivative_at(d, sol.value, t, settings);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// Max residual of v''_g + P v'_g + Q v = f over the grid. Off jumps both
/// derivatives are numerical quotients of `value` alone (independent of the
/// solver's derivative track, which is only cross-checked). At jumps the
/// exact quotients of value and of the derivative track are used. Flat-class
/// grid points are skipped, as in residual_first_order.
inline double residual_second_order(const Derivator& d, const GSolution& sol, Complex P,
                                    Complex Q, const Integrand& f,
                                    std::span<const double> grid,
                                    const GDiffSettings& settings = {}) {
    double worst = 0.0;
    auto numeric_first = [&](double t) { return g_derivative_at(d, sol.value, t, settings); };
    for (double t : grid) {
        PointClass cls = d.classify(t);
        if (cls != PointClass::Regular && cls != PointClass::Jump) continue;
        Complex v = sol.value(t);
        Complex r;
        if (cls == PointClass::Jump) {
            double delta = d.jump_at(t);
            Complex q1 = (sol.value_right(t) - v) / delta;
            Complex q2 = (sol.derivative_right(t) - sol.derivative(t)) / delta;
            r = q2 + P * q1 + Q * v - f(t);
            // The derivative track must agree with the exact first quotient.
            worst = std::max(worst, std::abs(sol.derivative(t) - q1));
        } else {
            Complex v1 = numeric_first(t);
            Complex v2 = g_derivative_at(d, numeric_first, t, settings);
            r = v2 + P * v1 + Q * v - f(t);
        }
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

/// Uniform residual grid on [margin, T - margin] with all interior jumps
/// included; T-adjacent points are excluded because right limits are
/// unavailable there.
inline std::vector<double> residual_grid(const Derivator& d, std::size_t n,
                                         double margin_fraction = 0.03) {
    const double T = d.horizon();
    const double lo = margin_fraction * T, hi = (1.0 - margin_fraction) * T;
    std::vector<double> grid;
    for (std::size_t i = 0; i < n; ++i)
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    for (const Jump& j : d.jumps())
        if (j.time > lo && j.time < hi) grid.push_back(j.time);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

} // namespace stieltjes
