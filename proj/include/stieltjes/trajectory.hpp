#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "stieltjes/derivator.hpp"

namespace stieltjes {

/// Sampled solution values on a sorted time grid. Jump times carry two
/// points: the (left-continuous) value v(t_k) and the post-jump value
/// v(t_k+), the latter flagged `post`.
struct TrajectoryPoint {
    double t;
    Complex value;
    bool post;
};

using Trajectory = std::vector<TrajectoryPoint>;

/// Dense uniform grid over [0, t_end] with explicit pre/post rows at each
/// interior jump of the derivator.
inline Trajectory sample_trajectory(const Derivator& d,
                                    const std::function<Complex(double)>& value,
                                    const std::function<Complex(double)>& value_right,
                                    std::size_t samples, double t_end = -1.0) {
    if (t_end < 0.0) t_end = d.horizon();
    if (samples < 2) throw DomainError("sample_trajectory: need at least 2 samples");
    std::vector<double> times;
    times.reserve(samples);
    // fraction first: the last node must not overshoot t_end by an ulp
    for (std::size_t i = 0; i < samples; ++i)
        times.push_back(t_end * (static_cast<double>(i) / static_cast<double>(samples - 1)));
    for (const Jump& j : d.jumps())
        if (j.time < t_end) times.push_back(j.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    Trajectory out;
    out.reserve(times.size() + d.jumps().size());
    for (double t : times) {
        out.push_back({t, value(t), false});
        if (d.jump_at(t) > 0.0 && t < t_end) out.push_back({t, value_right(t), true});
    }
    return out;
}

/// 17 significant digits; round-trips double values exactly as text.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// CSV with columns t,value[,value_im],post; deterministic bytes (no
/// timestamps, fixed formatting).
inline void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                                 bool complex_values) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os << (complex_values ? "t,value,value_im,post\n" : "t,value,post\n");
    for (const TrajectoryPoint& p : traj) {
        os << format_g17(p.t) << ',' << format_g17(p.value.real());
        if (complex_values) os << ',' << format_g17(p.value.imag());
        os << ',' << (p.post ? 1 : 0) << '\n';
    }
}

} // namespace stieltjes
