// Prints the damped oscillator trajectory for the worked example derivators
// at a few jump sizes, comparing against the jump-free classical solution.

#include <cstdio>

#include "stieltjes/stieltjes.hpp"

int main() {
    using namespace stieltjes;
    const double T = example1_horizon;
    std::printf("# t  v(l=0)  v(l=1/3)  [underdamped, zeta=0.5, omega0=2, g2]\n");
    OscillatorSpec smooth{2.0, 0.5, 1.0, 1.0, example1_g2(0.0, T)};
    OscillatorSpec jumpy{2.0, 0.5, 1.0, 1.0, example1_g2(1.0 / 3.0, T)};
    OscillatorSolution a = solve_oscillator(smooth);
    OscillatorSolution b = solve_oscillator(jumpy);
    for (int i = 0; i <= 50; ++i) {
        double t = T * (i / 50.0);
        std::printf("%8.4f  %12.8f  %12.8f\n", t, a.value(t), b.value(t));
    }
    return 0;
}
