#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace stieltjes;
using test_support::riemann_stieltjes_left;
using test_support::riemann_stieltjes_midpoint_refined;

TEST_CASE("ls_integral reduces to Lebesgue for the identity derivator") {
    Derivator id(ContinuousPart::identity(1.0), JumpSet());
    Complex v = ls_integral(id, [](double) { return Complex{1.0, 0.0}; }, 1.0);
    CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(v.imag() == 0.0);
}

TEST_CASE("pure-jump derivators reduce to the exact jump sum") {
    Derivator pure(ContinuousPart::piecewise_linear({{0, 0.0}}, 1.0),
                   JumpSet({{0.5, 2.0}}, 1.0));
    Complex v = ls_integral(pure, [](double s) { return Complex{s, 0.0}; }, 1.0);
    CHECK(v.real() == 1.0);  // 0.5 * 2.0, no quadrature involved
    CHECK(v.imag() == 0.0);

    // jump exactly at t is excluded by the half-open convention
    Complex at_jump = ls_integral(pure, [](double s) { return Complex{s, 0.0}; }, 0.5);
    CHECK(at_jump == Complex{0.0, 0.0});

    Complex smooth = ls_integral(pure, [](double s) { return Complex{std::sin(s), s * s}; }, 1.0);
    CHECK(smooth == Complex{std::sin(0.5) * 2.0, 0.25 * 2.0});
}

TEST_CASE("example-1 g2 measure matches brute-force Riemann-Stieltjes sums") {
    const double t = 2.0 * std::atan(1.0);  // pi/2, itself a jump time (excluded)
    Derivator g2 = example1_g2(1.0 / 3.0, 2.0);
    Complex v = ls_integral(g2, [](double) { return Complex{1.0, 0.0}; }, t);
    Complex oracle = riemann_stieltjes_left(g2, [](double) { return Complex{1.0, 0.0}; }, t,
                                            200000);
    CHECK(v.real() == doctest::Approx(oracle.real()).epsilon(1e-9));
    CHECK(v.real() == doctest::Approx(1.0 + 1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("ls_measure") {
    Derivator id(ContinuousPart::identity(1.0), JumpSet());
    CHECK(ls_measure(id, 0.2, 0.8) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK_THROWS_AS(ls_measure(id, 0.8, 0.2), DomainError);

    Derivator d(ContinuousPart::identity(1.0), JumpSet({{0.5, 1.0}}, 1.0));
    CHECK(ls_measure(d, 0.5, 0.5 + 1e-9) == doctest::Approx(1.0).epsilon(1e-8));

    Derivator flat(ContinuousPart::piecewise_linear({{0, 1}, {1, 0}, {2, 1}}, 3.0), JumpSet());
    CHECK(ls_measure(flat, 1.0, 2.0) == 0.0);
}

TEST_CASE("change of variables agrees with midpoint Riemann-Stieltjes sums") {
    std::mt19937 rng(2209);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    QuadratureSettings q;
    q.abs_tol = 1e-9;
    q.rel_tol = 1e-9;
    for (int rep = 0; rep < 20; ++rep) {
        Derivator d = test_support::random_derivator(rng);
        Derivator cont_only(d.continuous(), JumpSet());  // purely continuous
        double a = 0.5 + unif(rng), b = -1.0 + 2.0 * unif(rng);
        auto f = [a, b](double s) { return Complex{std::sin(a * s) + b * s, std::cos(s)}; };
        double t = cont_only.horizon() * (0.3 + 0.7 * unif(rng));
        Complex got = ls_integral(cont_only, f, t, q);
        Complex oracle = riemann_stieltjes_midpoint_refined(cont_only, f, t, 4000);
        CHECK(std::abs(got - oracle) <= 10.0 * q.abs_tol);
    }
}

TEST_CASE("additivity over subintervals") {
    std::mt19937 rng(5151);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    QuadratureSettings q;
    for (int rep = 0; rep < 12; ++rep) {
        Derivator d = test_support::random_derivator(rng);
        auto f = [](double s) { return Complex{std::cos(2.0 * s), std::sin(s)}; };
        double t = d.horizon() * (0.6 + 0.4 * unif(rng));
        double s = t * (0.2 + 0.6 * unif(rng));
        if (d.jump_at(s) > 0.0) s *= 1.0001;
        Complex whole = ls_integral(d, f, t, q);
        Complex head = ls_integral(d, f, s, q);
        auto masked = [&](double u) { return u >= s ? f(u) : Complex{0.0, 0.0}; };
        Complex tail = ls_integral(d, masked, t, q);
        CHECK(std::abs(whole - (head + tail)) <= 1e-8);
    }
}

TEST_CASE("linearity in f and monotonicity in t") {
    std::mt19937 rng(77);
    Derivator d = test_support::random_derivator(rng);
    auto f = [](double s) { return Complex{std::sin(s), 0.5 * s}; };
    auto h = [](double s) { return Complex{s * s, std::cos(s)}; };
    Complex alpha{0.3, -1.1}, beta{2.0, 0.7};
    auto combo = [&](double s) { return alpha * f(s) + beta * h(s); };
    double t = 0.8 * d.horizon();
    Complex lhs = ls_integral(d, combo, t);
    Complex rhs = alpha * ls_integral(d, f, t) + beta * ls_integral(d, h, t);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));

    auto nonneg = [](double s) { return Complex{1.0 + std::sin(s) * std::sin(s), 0.0}; };
    double prev = 0.0;
    for (int i = 1; i <= 10; ++i) {
        double u = d.horizon() * (static_cast<double>(i) / 10.0);
        double v = ls_integral(d, nonneg, u).real();
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("quadrature failure carries the best estimate and a bound") {
    Derivator id(ContinuousPart::identity(1.0), JumpSet());
    QuadratureSettings tight;
    tight.abs_tol = 1e-14;
    tight.rel_tol = 1e-14;
    tight.max_subdivisions = 8;  // far too few for the oscillatory integrand
    auto nasty = [](double s) {
        return Complex{std::sin(200.0 / (s + 0.01)), 0.0};
    };
    bool threw = false;
    try {
        ls_integral(id, nasty, 1.0, tight);
    } catch (const AccuracyError& e) {
        threw = true;
        CHECK(std::isfinite(e.best_estimate().real()));
        CHECK(e.error_bound() > tight.abs_tol);
    }
    CHECK(threw);
}
