// Command-line surface for the Stieltjes calculus library: evaluate
// g-exponentials and g-trigonometric functions, solve first/second-order
// linear problems and oscillator scenarios, and run the predictor-corrector
// convergence study. Emits deterministic CSV data files (plus optional SVG
// plots) into the output directory.

#include <CLI11.hpp>

#include <complex>
#include <iostream>

#include "stieltjes/cli.hpp"
#include "stieltjes/stieltjes.hpp"

namespace {

using stieltjes::cli::Command;
using stieltjes::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--derivator", cfg.derivator,
                    "Derivator config file, or preset 'example1-g1' / 'example1-g2'");
    sub->add_option("--T", cfg.horizon, "Working window length for presets");
    sub->add_option("--l", cfg.l, "Jump size for presets");
    sub->add_option("--samples", cfg.samples, "Number of uniform output samples");
    sub->add_option("--output-dir", cfg.output_dir, "Directory for emitted files");
    sub->add_flag("--svg", cfg.emit_svg, "Also write an SVG line plot");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stieltjes differential calculus toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    double beta_re = 0.0, beta_im = 0.0;
    double P_re = 0.0, P_im = 0.0, Q_re = 0.0, Q_im = 0.0;
    double f_re = 0.0, f_im = 0.0;
    bool table1 = false;

    CLI::App* exp = app.add_subcommand("exp", "Evaluate exp_g(beta; 0, t)");
    exp->add_option("--beta", beta_re, "Real part of beta");
    exp->add_option("--beta-im", beta_im, "Imaginary part of beta");
    add_common(exp, cfg);

    CLI::App* sincos = app.add_subcommand("sincos", "Evaluate sin_g / cos_g (as Im/Re columns)");
    sincos->add_option("--b", beta_re, "Real coefficient b");
    add_common(sincos, cfg);

    CLI::App* solve1 = app.add_subcommand("solve1", "Solve v'_g = beta v + f, v(0) = v0");
    solve1->add_option("--beta", beta_re, "Real part of beta");
    solve1->add_option("--beta-im", beta_im, "Imaginary part of beta");
    solve1->add_option("--f", f_re, "Constant source, real part");
    solve1->add_option("--f-im", f_im, "Constant source, imaginary part");
    solve1->add_option("--v0", cfg.x0, "Initial value");
    add_common(solve1, cfg);

    CLI::App* solve2 =
        app.add_subcommand("solve2", "Solve v''_g + P v'_g + Q v = f, v(0)=x0, v'_g(0)=v0");
    solve2->add_option("--P", P_re, "P, real part");
    solve2->add_option("--P-im", P_im, "P, imaginary part");
    solve2->add_option("--Q", Q_re, "Q, real part");
    solve2->add_option("--Q-im", Q_im, "Q, imaginary part");
    solve2->add_option("--f", f_re, "Constant source, real part");
    solve2->add_option("--f-im", f_im, "Constant source, imaginary part");
    solve2->add_option("--x0", cfg.x0, "Initial value");
    solve2->add_option("--v0", cfg.v0, "Initial g-derivative");
    add_common(solve2, cfg);

    CLI::App* osc = app.add_subcommand("oscillator", "Stieltjes harmonic oscillator");
    osc->add_option("--preset", cfg.derivator, "Derivator preset (example1-g1 / example1-g2)");
    osc->add_option("--omega0", cfg.omega0, "Undamped angular frequency");
    osc->add_option("--zeta", cfg.zeta, "Damping ratio");
    osc->add_option("--x0", cfg.x0, "Initial position");
    osc->add_option("--v0", cfg.v0, "Initial g-derivative");
    osc->add_option("--l-sweep", cfg.l_sweep, "Comma-separated jump sizes to sweep")
        ->delimiter(',');
    add_common(osc, cfg);

    CLI::App* reso = app.add_subcommand("resonance", "Resonantly forced undamped oscillator");
    reso->add_option("--preset", cfg.derivator, "Derivator preset");
    reso->add_option("--omega0", cfg.omega0, "Undamped angular frequency");
    reso->add_option("--x0", cfg.x0, "Initial position");
    reso->add_option("--v0", cfg.v0, "Initial g-derivative");
    reso->add_option("--l-sweep", cfg.l_sweep, "Comma-separated jump sizes to sweep")
        ->delimiter(',');
    add_common(reso, cfg);

    CLI::App* conv = app.add_subcommand("converge", "Predictor-corrector convergence study");
    conv->add_flag("--preset-table1", table1, "Use the paper's Table-1 configuration");
    conv->add_option("--omega0", cfg.omega0, "Undamped angular frequency");
    conv->add_option("--x0", cfg.x0, "Initial position");
    conv->add_option("--v0", cfg.v0, "Initial g-derivative");
    conv->add_option("--h-list", cfg.h_list, "Comma-separated step sizes")->delimiter(',');
    add_common(conv, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (exp->parsed()) cfg.command = Command::Exp;
        if (sincos->parsed()) cfg.command = Command::SinCos;
        if (solve1->parsed()) cfg.command = Command::Solve1;
        if (solve2->parsed()) cfg.command = Command::Solve2;
        if (osc->parsed()) cfg.command = Command::Oscillator;
        if (reso->parsed()) cfg.command = Command::Resonance;
        if (conv->parsed()) {
            cfg.command = Command::Converge;
            if (table1) {
                RunConfig t1 = stieltjes::cli::table1_config();
                t1.h_list = cfg.h_list;
                t1.output_dir = cfg.output_dir;
                t1.emit_svg = cfg.emit_svg;
                if (cfg.horizon > 0.0) t1.horizon = cfg.horizon;
                cfg = t1;
            }
        }
        cfg.beta = {beta_re, beta_im};
        cfg.P = {P_re, P_im};
        cfg.Q = {Q_re, Q_im};
        cfg.f_const = {f_re, f_im};
        cfg.has_source = solve2->parsed() && (solve2->count("--f") || solve2->count("--f-im"));

        stieltjes::cli::run(cfg);
        return 0;
    } catch (const stieltjes::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const stieltjes::AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << " (error bound " << e.error_bound()
                  << ")\n";
        return 3;
    } catch (const stieltjes::DomainError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    }
}
