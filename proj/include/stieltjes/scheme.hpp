#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "stieltjes/g_derivative.hpp"

namespace stieltjes {

/// Right-hand side of a first-order system y'_g = F(t, y), evaluated in
/// place.
struct SystemRHS {
    std::function<void(double, const std::vector<Complex>&, std::vector<Complex>&)> F;
    std::size_t dimension;
};

/// Time grid for the predictor-corrector scheme: uniform nodes of spacing h
/// plus every jump time (the scheme requires D_g inside the grid). Jump times
/// are inserted without perturbing the uniform nodes, so local spacing near
/// jumps may be smaller than h.
class SchemeGrid {
public:
    static SchemeGrid uniform_with_jumps(const Derivator& d, double h) {
        if (!(h > 0.0)) throw DomainError("SchemeGrid: h must be > 0");
        const double T = d.horizon();
        SchemeGrid g;
        g.h_ = h;
        std::size_t n = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
        g.times_.reserve(n + d.jumps().size() + 2);
        for (std::size_t j = 0; j < n; ++j) g.times_.push_back(static_cast<double>(j) * h);
        g.times_.push_back(T);
        for (const Jump& j : d.jumps()) g.times_.push_back(j.time);
        std::sort(g.times_.begin(), g.times_.end());
        g.times_.erase(std::unique(g.times_.begin(), g.times_.end()), g.times_.end());
        return g;
    }

    const std::vector<double>& times() const { return times_; }
    double spacing() const { return h_; }

private:
    std::vector<double> times_;
    double h_ = 0.0;
};

/// Predictor-corrector integrator: exact jump step, forward-Euler predictor,
/// trapezoidal corrector, all weighted by increments of g:
///   y+      = y_j + F(t_j, y_j) Delta+g(t_j)
///   y*      = y+  + F(t_j+, y+) (g(t_{j+1}) - g(t_j+))
///   y_{j+1} = y+  + 1/2 (F(t_j+, y+) + F(t_{j+1}-, y*)) (g(t_{j+1}) - g(t_j+))
/// F(t_j+, .) is realized at t_j + eps0 so g-dependent sources take their
/// post-jump values; F(t_{j+1}-, .) is F at t_{j+1} itself, sources being
/// left-continuous. The observer is called with (node index, time, state).
template <typename Observer>
void integrate(const Derivator& d, const SystemRHS& rhs, const std::vector<Complex>& y0,
               const SchemeGrid& grid, Observer&& observe) {
    if (y0.size() != rhs.dimension)
        throw DomainError("integrate: initial state dimension mismatch");
    const double eps0 = right_limit_offset(d);
    const std::vector<double>& ts = grid.times();

    std::vector<Complex> y = y0, yplus = y0, ystar = y0;
    std::vector<Complex> k1(rhs.dimension), k2(rhs.dimension), k3(rhs.dimension);

    auto check = [&](const std::vector<Complex>& state, std::size_t node, double time) {
        for (const Complex& c : state)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw DivergenceError("integrate: non-finite state at node", node, time);
    };

    observe(static_cast<std::size_t>(0), ts.front(), y);
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
        const double t = ts[j], tn = ts[j + 1];
        const double delta = d.jump_at(t);

        if (delta > 0.0) {
            rhs.F(t, y, k1);
            for (std::size_t i = 0; i < y.size(); ++i) yplus[i] = y[i] + k1[i] * delta;
        } else {
            yplus = y;
        }

        const double tplus = delta > 0.0 ? t + eps0 : t;
        const double gstep = d.eval(tn) - (d.eval(t) + delta);

        rhs.F(tplus, yplus, k2);
        for (std::size_t i = 0; i < y.size(); ++i) ystar[i] = yplus[i] + k2[i] * gstep;
        rhs.F(tn, ystar, k3);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = yplus[i] + 0.5 * (k2[i] + k3[i]) * gstep;

        check(y, j + 1, tn);
        observe(j + 1, tn, y);
    }
}

/// Convenience wrapper returning the full state history (small grids only).
inline std::vector<std::vector<Complex>> integrate_collect(const Derivator& d,
                                                           const SystemRHS& rhs,
                                                           const std::vector<Complex>& y0,
                                                           const SchemeGrid& grid) {
    std::vector<std::vector<Complex>> out;
    out.reserve(grid.times().size());
    integrate(d, rhs, y0, grid,
              [&](std::size_t, double, const std::vector<Complex>& y) { out.push_back(y); });
    return out;
}

struct ConvergenceRow {
    double h;
    double error;           // e_h = max_j |v(t_j) - y_{2,j}|
    double observed_order;  // log ratio against the previous row; NaN first
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double fitted_order;  // least-squares slope of log e_h vs log h
};

/// Runs the scheme for each step size and reports e_h against the supplied
/// exact solution (compared on the second state component) plus the observed
/// convergence order.
inline ConvergenceStudy convergence_study(const Derivator& d, const SystemRHS& rhs,
                                          const std::vector<Complex>& y0,
                                          const std::function<double(double)>& exact,
                                          const std::vector<double>& h_list) {
    ConvergenceStudy study;
    for (double h : h_list) {
        SchemeGrid grid = SchemeGrid::uniform_with_jumps(d, h);
        double e = 0.0;
        integrate(d, rhs, y0, grid, [&](std::size_t, double t, const std::vector<Complex>& y) {
            e = std::max(e, std::abs(y[1] - exact(t)));
        });
        double order = std::numeric_limits<double>::quiet_NaN();
        if (!study.rows.empty()) {
            const ConvergenceRow& prev = study.rows.back();
            order = std::log(prev.error / e) / std::log(prev.h / h);
        }
        study.rows.push_back({h, e, order});
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(study.rows.size());
    for (const ConvergenceRow& r : study.rows) {
        double x = std::log(r.h), y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    study.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return study;
}

} // namespace stieltjes
