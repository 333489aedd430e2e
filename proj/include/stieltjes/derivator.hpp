#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "stieltjes/errors.hpp"

namespace stieltjes {

enum class ContinuousKind { Identity, PiecewiseLinear, StaircaseSaw };

/// Non-decreasing continuous function on [0, T] with g(0) = 0, materialized
/// as a piecewise-linear curve. All three catalog kinds (identity, explicit
/// piecewise-linear, staircase saw) share this representation, which keeps
/// evaluation, flat-segment extraction and the pseudo-inverse exact.
class ContinuousPart {
public:
    static ContinuousPart identity(double domain_end) {
        return ContinuousPart(ContinuousKind::Identity, {{0.0, 1.0}}, domain_end);
    }

    /// Breakpoints are (time, slope) pairs: `slope` applies from `time` to the
    /// next breakpoint. The first time must be 0 and slopes must be >= 0.
    static ContinuousPart piecewise_linear(std::vector<std::pair<double, double>> breakpoints,
                                           double domain_end) {
        return ContinuousPart(ContinuousKind::PiecewiseLinear, std::move(breakpoints), domain_end);
    }

    /// The g2^C of the worked oscillator example: slope 1 on [2m, 2m+1),
    /// flat on [2m+1, 2m+2).
    static ContinuousPart staircase_saw(double domain_end) {
        std::vector<std::pair<double, double>> bp;
        for (double k = 0.0; k < domain_end; k += 1.0)
            bp.emplace_back(k, std::fmod(k, 2.0) == 0.0 ? 1.0 : 0.0);
        return ContinuousPart(ContinuousKind::StaircaseSaw, std::move(bp), domain_end);
    }

    ContinuousKind kind() const { return kind_; }
    double domain_end() const { return knot_t_.back(); }

    /// g^C(t).
    double value(double t) const {
        check_domain(t);
        std::size_t i = segment_index(t);
        return knot_v_[i] + slope_[i] * (t - knot_t_[i]);
    }

    /// g^C(T), the length of the transformed integration axis.
    double total() const { return knot_v_.back(); }

    /// Minimal preimage gamma(x) = min{t : g^C(t) = x}. Flat segments map to a
    /// single x, and minimality always selects their left endpoint.
    double pseudo_inverse(double x) const {
        if (!(x >= 0.0) || x > total() * (1.0 + 1e-15) + 1e-300)
            throw DomainError("pseudo_inverse: x outside [0, g^C(T)]");
        x = std::min(x, total());
        // First knot with value >= x; x is reached no later than that knot.
        auto it = std::lower_bound(knot_v_.begin(), knot_v_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - knot_v_.begin());
        if (i < knot_v_.size() && knot_v_[i] == x) return knot_t_[i];
        // knot_v_[i-1] < x < knot_v_[i]: invert the rising segment i-1.
        return knot_t_[i - 1] + (x - knot_v_[i - 1]) / slope_[i - 1];
    }

    /// Maximal flat segments [a, b] (slope 0), merged, as closed intervals
    /// with 0 <= a < b <= T.
    const std::vector<std::pair<double, double>>& flat_segments() const { return flats_; }

    const std::vector<double>& knots() const { return knot_t_; }
    const std::vector<double>& knot_values() const { return knot_v_; }
    const std::vector<double>& slopes() const { return slope_; }

private:
    ContinuousPart(ContinuousKind kind, std::vector<std::pair<double, double>> bp, double T)
        : kind_(kind) {
        if (!(T > 0.0)) throw DomainError("ContinuousPart: domain_end must be > 0");
        if (bp.empty() || bp.front().first != 0.0)
            throw DomainError("ContinuousPart: breakpoints must start at t = 0");
        for (std::size_t i = 0; i < bp.size(); ++i) {
            if (bp[i].second < 0.0)
                throw DomainError("ContinuousPart: slopes must be >= 0");
            if (i > 0 && !(bp[i].first > bp[i - 1].first))
                throw DomainError("ContinuousPart: breakpoint times must be strictly increasing");
        }
        while (!bp.empty() && bp.back().first >= T) bp.pop_back();
        if (bp.empty() || bp.front().first != 0.0)
            throw DomainError("ContinuousPart: breakpoints must start at t = 0 and lie in [0, T)");

        knot_t_.reserve(bp.size() + 1);
        knot_v_.reserve(bp.size() + 1);
        slope_.reserve(bp.size());
        double v = 0.0;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            knot_t_.push_back(bp[i].first);
            knot_v_.push_back(v);
            slope_.push_back(bp[i].second);
            double next_t = (i + 1 < bp.size()) ? bp[i + 1].first : T;
            v += bp[i].second * (next_t - bp[i].first);
        }
        knot_t_.push_back(T);
        knot_v_.push_back(v);

        for (std::size_t i = 0; i < slope_.size(); ++i) {
            if (slope_[i] != 0.0) continue;
            double a = knot_t_[i];
            double b = knot_t_[i + 1];
            if (!flats_.empty() && flats_.back().second == a)
                flats_.back().second = b;
            else
                flats_.emplace_back(a, b);
        }
    }

    void check_domain(double t) const {
        if (!(t >= 0.0) || !(t <= knot_t_.back()))
            throw DomainError("time outside the working window [0, T]");
    }

    std::size_t segment_index(double t) const {
        auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - knot_t_.begin());
        if (i == 0) return 0;
        return std::min(i - 1, slope_.size() - 1);
    }

    ContinuousKind kind_;
    std::vector<double> knot_t_;  // t_0 = 0 < ... < t_m = T
    std::vector<double> knot_v_;  // g^C(t_i)
    std::vector<double> slope_;   // slope on [t_i, t_{i+1})
    std::vector<std::pair<double, double>> flats_;
};

struct Jump {
    double time;
    double delta;  // magnitude of g(t+) - g(t), > 0
};

/// Finite set of jump times in (0, T) with positive magnitudes. No jump may
/// sit at 0 (g is continuous at the left endpoint) or at T.
class JumpSet {
public:
    JumpSet() = default;

    JumpSet(std::vector<Jump> jumps, double horizon) : jumps_(std::move(jumps)) {
        for (std::size_t i = 0; i < jumps_.size(); ++i) {
            const Jump& j = jumps_[i];
            if (!(j.delta > 0.0)) throw DomainError("JumpSet: magnitudes must be > 0");
            if (!(j.time > 0.0) || !(j.time < horizon))
                throw DomainError("JumpSet: jump times must lie strictly inside (0, T)");
            if (i > 0 && !(j.time > jumps_[i - 1].time))
                throw DomainError("JumpSet: jump times must be strictly increasing");
        }
    }

    const std::vector<Jump>& jumps() const { return jumps_; }
    bool empty() const { return jumps_.empty(); }
    std::size_t size() const { return jumps_.size(); }

private:
    std::vector<Jump> jumps_;
};

enum class PointClass { Regular, Jump, FlatInterior, FlatLeftEnd, FlatRightEnd };

/// A derivator on the working window [0, T]: a left-continuous non-decreasing
/// function g = g^C + g^B with continuous part g^C from the catalog and a
/// finite jump part g^B. Immutable after construction; concurrent reads are
/// safe.
///
/// Finite jump sets make cl(D_g) \ D_g empty, so the representation-product
/// over jumps is exact and the measure of that set is zero by construction.
class Derivator {
public:
    Derivator(ContinuousPart cont, JumpSet jumps)
        : cont_(std::move(cont)), jumps_(jumps.jumps()) {
        const double T = cont_.domain_end();
        if (!jumps_.empty() && !(jumps_.back().time < T))
            throw DomainError("Derivator: jumps must lie inside (0, T)");
        for (const Jump& j : jumps_)
            if (!(j.time > 0.0) || !(j.time < T))
                throw DomainError("Derivator: jump outside (0, T)");

        prefix_.resize(jumps_.size() + 1, 0.0);
        for (std::size_t i = 0; i < jumps_.size(); ++i)
            prefix_[i + 1] = prefix_[i] + jumps_[i].delta;

        // Maximal flat components of g: flats of g^C split at interior jumps.
        for (auto [a, b] : cont_.flat_segments()) {
            double lo = a;
            for (const Jump& j : jumps_) {
                if (j.time <= lo) continue;
                if (j.time >= b) break;
                flat_components_.emplace_back(lo, j.time);
                lo = j.time;
            }
            flat_components_.emplace_back(lo, b);
        }

        boundary_regular_ = true;
        for (auto [a, b] : flat_components_) {
            if (a == 0.0 || b == T) boundary_regular_ = false;
        }

        features_.push_back(0.0);
        for (const Jump& j : jumps_) features_.push_back(j.time);
        for (auto [a, b] : flat_components_) {
            features_.push_back(a);
            features_.push_back(b);
        }
        features_.push_back(T);
        std::sort(features_.begin(), features_.end());
        features_.erase(std::unique(features_.begin(), features_.end()), features_.end());
    }

    double horizon() const { return cont_.domain_end(); }
    const ContinuousPart& continuous() const { return cont_; }
    const std::vector<Jump>& jumps() const { return jumps_; }

    /// g(t) = g^C(t) + sum of jump magnitudes strictly before t. Left
    /// continuous: at a jump time the jump itself is excluded.
    double eval(double t) const {
        check_domain(t);
        return cont_.value(t) + prefix_[count_jumps_before(t)];
    }

    /// g(t+) = g(t) + Delta+g(t). Only defined for t < T.
    double eval_right(double t) const {
        if (!(t >= 0.0) || !(t < horizon()))
            throw DomainError("eval_right: t must lie in [0, T)");
        return eval(t) + jump_at(t);
    }

    /// Delta+g(t); 0 when t is not a jump time.
    double jump_at(double t) const {
        auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                                   [](const Jump& j, double x) { return j.time < x; });
        if (it != jumps_.end() && it->time == t) return it->delta;
        return 0.0;
    }

    /// Number of jumps with time strictly less than t.
    std::size_t count_jumps_before(double t) const {
        auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                                   [](const Jump& j, double x) { return j.time < x; });
        return static_cast<std::size_t>(it - jumps_.begin());
    }

    /// Cumulative jump mass strictly before t (the value of g^B(t)).
    double jump_mass_before(double t) const { return prefix_[count_jumps_before(t)]; }

    PointClass classify(double t) const {
        check_domain(t);
        if (jump_at(t) > 0.0) return PointClass::Jump;
        for (auto [a, b] : flat_components_) {
            if (t > a && t < b) return PointClass::FlatInterior;
            if (t == a) return PointClass::FlatLeftEnd;
            if (t == b) return PointClass::FlatRightEnd;
        }
        return PointClass::Regular;
    }

    /// Minimal preimage of the continuous part, gamma(x) = min{t: g^C(t) = x}.
    double pseudo_inverse(double x) const { return cont_.pseudo_inverse(x); }

    /// Open maximal intervals (a, b) on which g is constant (C_g components).
    const std::vector<std::pair<double, double>>& flat_components() const {
        return flat_components_;
    }

    /// False when 0 is the left endpoint of a flat component (0 in N_g^-) or
    /// T closes one (T in N_g^+); g-derivatives at those endpoints would need
    /// values outside the window. Pure-jump derivators are always irregular.
    bool boundary_regular() const { return boundary_regular_; }

    /// Nearest structural feature (jump, flat endpoint, window edge) strictly
    /// after t; returns T if none.
    double next_feature(double t) const {
        auto it = std::upper_bound(features_.begin(), features_.end(), t);
        return it == features_.end() ? horizon() : *it;
    }

    /// Nearest structural feature strictly before t; returns 0 if none.
    double prev_feature(double t) const {
        auto it = std::lower_bound(features_.begin(), features_.end(), t);
        return it == features_.begin() ? 0.0 : *(it - 1);
    }

private:
    void check_domain(double t) const {
        if (!(t >= 0.0) || !(t <= horizon()))
            throw DomainError("time outside the working window [0, T]");
    }

    ContinuousPart cont_;
    std::vector<Jump> jumps_;
    std::vector<double> prefix_;
    std::vector<std::pair<double, double>> flat_components_;
    std::vector<double> features_;
    bool boundary_regular_ = true;
};

} // namespace stieltjes
