#pragma once

#include <random>
#include <vector>

#include "stieltjes/stieltjes.hpp"

namespace test_support {

using namespace stieltjes;

/// Random derivator: piecewise-linear continuous part (optionally with an
/// interior flat), 2-6 jumps away from the breakpoints, rising first and
/// last segments so the window endpoints stay regular.
inline Derivator random_derivator(std::mt19937& rng, bool with_flat = true) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double T = 1.5 + 3.5 * unif(rng);

    std::vector<std::pair<double, double>> bp;
    bp.emplace_back(0.0, 0.3 + 1.2 * unif(rng));
    double t1 = T * (0.25 + 0.15 * unif(rng));
    double t2 = T * (0.55 + 0.15 * unif(rng));
    if (with_flat && unif(rng) < 0.7) {
        bp.emplace_back(t1, 0.0);
        bp.emplace_back(t2, 0.3 + 1.2 * unif(rng));
    } else {
        bp.emplace_back(t1, 0.2 + 1.0 * unif(rng));
        bp.emplace_back(t2, 0.3 + 1.2 * unif(rng));
    }
    ContinuousPart cont = ContinuousPart::piecewise_linear(bp, T);

    std::size_t n_jumps = 2 + static_cast<std::size_t>(unif(rng) * 4.0);
    std::vector<double> times;
    while (times.size() < n_jumps) {
        double t = T * (0.05 + 0.9 * unif(rng));
        bool ok = t != t1 && t != t2;
        for (double s : times)
            if (std::abs(s - t) < 0.02 * T) ok = false;
        if (ok) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    std::vector<Jump> jumps;
    for (double t : times) jumps.push_back({t, 0.1 + 1.4 * unif(rng)});
    return Derivator(std::move(cont), JumpSet(std::move(jumps), T));
}

/// Left-point Riemann-Stieltjes sum over a uniform partition of [0, t).
inline Complex riemann_stieltjes_left(const Derivator& d, const Integrand& f, double t,
                                      std::size_t n) {
    Complex sum{0.0, 0.0};
    double prev_g = d.eval(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double a = t * static_cast<double>(i) / static_cast<double>(n);
        double b = t * static_cast<double>(i + 1) / static_cast<double>(n);
        double gb = d.eval(b);
        sum += f(a) * (gb - prev_g);
        prev_g = gb;
    }
    return sum;
}

/// Midpoint Riemann-Stieltjes sum for a continuous derivator, on a partition
/// refined from the union of a uniform grid and the breakpoints of g^C (so
/// each cell is smooth), with one Richardson step. Accurate to ~1e-12 for
/// smooth f.
inline Complex riemann_stieltjes_midpoint_refined(const Derivator& d, const Integrand& f,
                                                  double t, std::size_t n) {
    auto midpoint_sum = [&](std::size_t cells) {
        std::vector<double> nodes;
        for (std::size_t i = 0; i <= cells; ++i)
            nodes.push_back(t * static_cast<double>(i) / static_cast<double>(cells));
        for (double k : d.continuous().knots())
            if (k > 0.0 && k < t) nodes.push_back(k);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        Complex sum{0.0, 0.0};
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            double m = 0.5 * (nodes[i] + nodes[i + 1]);
            sum += f(m) * (d.eval(nodes[i + 1]) - d.eval(nodes[i]));
        }
        return sum;
    };
    Complex coarse = midpoint_sum(n);
    Complex fine = midpoint_sum(2 * n);
    return (4.0 * fine - coarse) / 3.0;
}

inline Complex random_unit_complex(std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    return Complex{unif(rng), unif(rng)};
}

/// Random constant coefficient whose jump factors stay safely away from 0.
inline Complex random_safe_beta(std::mt19937& rng, const Derivator& d) {
    for (;;) {
        Complex b = random_unit_complex(rng);
        bool ok = true;
        for (const Jump& j : d.jumps())
            if (std::abs(1.0 + b * j.delta) < 0.05) ok = false;
        if (ok) return b;
    }
}

} // namespace test_support
