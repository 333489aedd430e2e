#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "stieltjes/config.hpp"
#include "stieltjes/scheme.hpp"
#include "stieltjes/svg.hpp"
#include "stieltjes/trajectory.hpp"

namespace stieltjes::cli {

enum class Command { Exp, SinCos, Solve1, Solve2, Oscillator, Resonance, Converge };

struct RunConfig {
    Command command = Command::Exp;
    std::string derivator = "example1-g1";  // preset name or config file path
    double omega0 = 2.0;
    double zeta = 0.0;
    double x0 = 1.0;
    double v0 = 1.0;
    Complex beta{0.0, 0.0};
    Complex P{0.0, 0.0};
    Complex Q{0.0, 0.0};
    Complex f_const{0.0, 0.0};
    bool has_source = false;
    double l = 1.0 / 3.0;     // jump size for presets
    double horizon = -1.0;    // preset window; < 0 means example1_horizon
    std::vector<double> h_list;
    std::vector<double> l_sweep;
    std::size_t samples = 801;
    std::string output_dir = ".";
    bool emit_svg = false;
};

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Exp: return "exp";
        case Command::SinCos: return "sincos";
        case Command::Solve1: return "solve1";
        case Command::Solve2: return "solve2";
        case Command::Oscillator: return "oscillator";
        case Command::Resonance: return "resonance";
        case Command::Converge: return "converge";
    }
    return "?";
}

namespace detail {

inline std::string out_path(const RunConfig& cfg, const std::string& file) {
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / file).string();
}

/// Run metadata lives in a sidecar so the data files stay byte-identical
/// across reruns.
inline void write_sidecar(const RunConfig& cfg, const std::string& base,
                          const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ofstream os(out_path(cfg, base + ".meta.txt"), std::ios::binary);
    os << "command=" << command_name(cfg.command) << '\n';
    os << "derivator=" << cfg.derivator << '\n';
    for (const auto& [k, v] : extra) os << k << '=' << v << '\n';
}

inline void emit(const RunConfig& cfg, const std::string& base, const Trajectory& traj,
                 bool complex_values,
                 std::vector<std::pair<std::string, std::string>> meta = {}) {
    write_trajectory_csv(out_path(cfg, base + ".csv"), traj, complex_values);
    write_sidecar(cfg, base, meta);
    if (cfg.emit_svg) write_trajectory_svg(out_path(cfg, base + ".svg"), traj, base);
}

inline Derivator make_derivator(const RunConfig& cfg, double l_override = -1.0) {
    double T = cfg.horizon > 0.0 ? cfg.horizon : example1_horizon;
    double l = l_override >= 0.0 ? l_override : cfg.l;
    return resolve_derivator(cfg.derivator, l, T);
}

inline void run_oscillator_once(const RunConfig& cfg, double l, const std::string& base) {
    Derivator d = detail::make_derivator(cfg, l);
    OscillatorSpec spec{cfg.omega0, cfg.zeta, cfg.x0, cfg.v0, d};
    if (cfg.command == Command::Oscillator) {
        OscillatorSolution sol = solve_oscillator(spec);
        Trajectory traj = sample_trajectory(
            d, [&](double t) { return Complex{sol.value(t), 0.0}; },
            [&](double t) { return Complex{sol.value_right(t), 0.0}; }, cfg.samples);
        emit(cfg, base, traj, false,
             {{"omega0", format_g17(cfg.omega0)},
              {"zeta", format_g17(cfg.zeta)},
              {"x0", format_g17(cfg.x0)},
              {"v0", format_g17(cfg.v0)},
              {"l", format_g17(l)}});
    } else {
        ResonanceSolution sol = solve_resonance(spec);
        Trajectory traj = sample_trajectory(
            d, [&](double t) { return Complex{sol.value(t), 0.0}; },
            [&](double t) { return Complex{sol.value_right(t), 0.0}; }, cfg.samples);
        emit(cfg, base, traj, false,
             {{"omega0", format_g17(cfg.omega0)},
              {"x0", format_g17(cfg.x0)},
              {"v0", format_g17(cfg.v0)},
              {"l", format_g17(l)}});
    }
}

} // namespace detail

/// Executes one command; throws ConfigError / DomainError / AccuracyError on
/// failure (the binary maps them to exit codes 1 / 2 / 3).
inline void run(const RunConfig& cfg) {
    using detail::emit;
    switch (cfg.command) {
        case Command::Exp: {
            Derivator d = detail::make_derivator(cfg);
            GExp e(d, Coefficient(cfg.beta));
            Trajectory traj = sample_trajectory(
                d, [&](double t) { return e.value(t); },
                [&](double t) { return e.value_right(t); }, cfg.samples);
            emit(cfg, "exp", traj, true,
                 {{"beta_re", format_g17(cfg.beta.real())},
                  {"beta_im", format_g17(cfg.beta.imag())}});
            break;
        }
        case Command::SinCos: {
            Derivator d = detail::make_derivator(cfg);
            // value = cos_g (real part), value_im = sin_g (imaginary part)
            GSinCos sc(d, Coefficient(cfg.beta.real()));
            Trajectory traj = sample_trajectory(
                d, [&](double t) { return sc.exponential().value(t); },
                [&](double t) { return sc.exponential().value_right(t); }, cfg.samples);
            emit(cfg, "sincos", traj, true, {{"b", format_g17(cfg.beta.real())}});
            break;
        }
        case Command::Solve1: {
            Derivator d = detail::make_derivator(cfg);
            Complex fc = cfg.f_const;
            FirstOrderSolution sol(d, Coefficient(cfg.beta), [fc](double) { return fc; },
                                   Complex{cfg.x0, 0.0});
            double t_end = std::min(d.horizon(), sol.exponential().truncation_time());
            Trajectory traj = sample_trajectory(
                d, [&](double t) { return sol.value(t); },
                [&](double t) { return sol.value_right(t); }, cfg.samples, t_end);
            emit(cfg, "solve1", traj, true,
                 {{"beta_re", format_g17(cfg.beta.real())},
                  {"beta_im", format_g17(cfg.beta.imag())},
                  {"f_re", format_g17(fc.real())},
                  {"f_im", format_g17(fc.imag())},
                  {"v0", format_g17(cfg.x0)}});
            break;
        }
        case Command::Solve2: {
            Derivator d = detail::make_derivator(cfg);
            SecondOrderProblem prob;
            prob.P = cfg.P;
            prob.Q = cfg.Q;
            prob.x0 = Complex{cfg.x0, 0.0};
            prob.v0 = Complex{cfg.v0, 0.0};
            if (cfg.has_source) {
                Complex fc = cfg.f_const;
                prob.f = [fc](double) { return fc; };
            }
            SecondOrderSolution sol(d, prob);
            Trajectory traj = sample_trajectory(
                d, [&](double t) { return sol.value(t); },
                [&](double t) { return sol.value_right(t); }, cfg.samples);
            emit(cfg, "solve2", traj, true,
                 {{"P_re", format_g17(cfg.P.real())},
                  {"Q_re", format_g17(cfg.Q.real())},
                  {"x0", format_g17(cfg.x0)},
                  {"v0", format_g17(cfg.v0)}});
            break;
        }
        case Command::Oscillator:
        case Command::Resonance: {
            const std::string base = command_name(cfg.command);
            if (cfg.l_sweep.empty()) {
                detail::run_oscillator_once(cfg, cfg.l, base);
            } else {
                for (double l : cfg.l_sweep) {
                    std::string suffix = format_g17(l);
                    for (char& c : suffix)
                        if (c == '.') c = 'p';
                    detail::run_oscillator_once(cfg, l, base + "_l" + suffix);
                }
            }
            break;
        }
        case Command::Converge: {
            Derivator d = detail::make_derivator(cfg);
            OscillatorSpec spec{cfg.omega0, 0.0, cfg.x0, cfg.v0, d};
            ResonanceSolution exact = solve_resonance(spec);
            GSinCos source(d, Coefficient(cfg.omega0));
            const double w2 = cfg.omega0 * cfg.omega0;
            SystemRHS rhs{[&](double t, const std::vector<Complex>& y,
                              std::vector<Complex>& out) {
                              out[0] = source.cos(t) - w2 * y[1];
                              out[1] = y[0];
                          },
                          2};
            std::vector<double> hs = cfg.h_list;
            if (hs.empty()) hs = {1e-1, 1e-2, 1e-3, 1e-4};
            ConvergenceStudy study = convergence_study(
                d, rhs, {Complex{cfg.v0, 0.0}, Complex{cfg.x0, 0.0}},
                [&](double t) { return exact.value(t); }, hs);
            std::ofstream os(detail::out_path(cfg, "converge.csv"), std::ios::binary);
            os << "h,e_h,order\n";
            for (const ConvergenceRow& r : study.rows) {
                os << format_g17(r.h) << ',' << format_g17(r.error) << ','
                   << (std::isnan(r.observed_order) ? std::string("")
                                                    : format_g17(r.observed_order))
                   << '\n';
            }
            detail::write_sidecar(cfg, "converge",
                                  {{"omega0", format_g17(cfg.omega0)},
                                   {"l", format_g17(cfg.l)},
                                   {"fitted_order", format_g17(study.fitted_order)}});
            break;
        }
    }
}

/// The `table1` preset: staircase-saw continuous part, jumps of 1/3 at
/// multiples of pi/4, omega0 = 2, x0 = v0 = 1.
inline RunConfig table1_config() {
    RunConfig cfg;
    cfg.command = Command::Converge;
    cfg.derivator = "example1-g2";
    cfg.l = 1.0 / 3.0;
    cfg.omega0 = 2.0;
    cfg.x0 = 1.0;
    cfg.v0 = 1.0;
    return cfg;
}

} // namespace stieltjes::cli
