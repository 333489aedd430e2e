#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "stieltjes/trajectory.hpp"

namespace stieltjes {

/// Minimal static SVG line plot of a real trajectory. Continuous stretches
/// are drawn as polylines broken at jumps; each jump is rendered as a thin
/// vertical segment between the pre- and post-jump values. For human
/// inspection only.
inline void write_trajectory_svg(const std::string& path, const Trajectory& traj,
                                 const std::string& title = "", int width = 900,
                                 int height = 480) {
    if (traj.empty()) throw ConfigError("write_trajectory_svg: empty trajectory");
    double tmin = traj.front().t, tmax = traj.back().t;
    double vmin = traj.front().value.real(), vmax = vmin;
    for (const TrajectoryPoint& p : traj) {
        vmin = std::min(vmin, p.value.real());
        vmax = std::max(vmax, p.value.real());
    }
    if (vmax == vmin) {
        vmax += 1.0;
        vmin -= 1.0;
    }
    const double margin = 40.0;
    auto X = [&](double t) {
        return margin + (t - tmin) / (tmax - tmin) * (width - 2 * margin);
    };
    auto Y = [&](double v) {
        return height - margin - (v - vmin) / (vmax - vmin) * (height - 2 * margin);
    };

    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    if (!title.empty())
        os << "  <text x=\"" << margin << "\" y=\"20\" font-size=\"14\">" << title
           << "</text>\n";
    os << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\""
       << width - 2 * margin << "\" height=\"" << height - 2 * margin
       << "\" fill=\"none\" stroke=\"#999\"/>\n";
    if (vmin < 0.0 && vmax > 0.0)
        os << "  <line x1=\"" << margin << "\" y1=\"" << Y(0.0) << "\" x2=\""
           << width - margin << "\" y2=\"" << Y(0.0) << "\" stroke=\"#ccc\"/>\n";

    std::string points;
    auto flush = [&]() {
        if (!points.empty())
            os << "  <polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\""
               << points << "\"/>\n";
        points.clear();
    };
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const TrajectoryPoint& p = traj[i];
        if (p.post) {
            // vertical segment at the jump, then restart the polyline
            os << "  <line x1=\"" << X(p.t) << "\" y1=\"" << Y(traj[i - 1].value.real())
               << "\" x2=\"" << X(p.t) << "\" y2=\"" << Y(p.value.real())
               << "\" stroke=\"#1f4e9c\" stroke-width=\"0.8\"/>\n";
            flush();
        }
        points += format_g17(X(p.t)) + "," + format_g17(Y(p.value.real())) + " ";
    }
    flush();
    os << "</svg>\n";
}

} // namespace stieltjes
