#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace stieltjes;

TEST_CASE("g-exponential: classical limit") {
    Derivator id(ContinuousPart::identity(2.0), JumpSet());
    Complex lambda{0.35, -1.2};
    GExp e(id, Coefficient(lambda));
    for (int i = 0; i <= 40; ++i) {
        double t = 2.0 * i / 40.0;
        CHECK(std::abs(e.value(t) - std::exp(lambda * t)) < 1e-12);
    }
    CHECK(e.value(0.0) == Complex{1.0, 0.0});
}

TEST_CASE("g-exponential: pure-jump Euler product") {
    Derivator pure(ContinuousPart::piecewise_linear({{0, 0.0}}, 1.0),
                   JumpSet({{0.5, 1.0}}, 1.0));
    GExp e(pure, Coefficient(1.0));
    CHECK(e.value(1.0) == Complex{2.0, 0.0});
    CHECK(e.value(0.5) == Complex{1.0, 0.0});
    CHECK(e.value_right(0.5) == Complex{2.0, 0.0});
}

TEST_CASE("g-exponential: negative factors match the real-case cosine form") {
    Derivator d(ContinuousPart::identity(2.0), JumpSet({{0.5, 1.0}, {1.2, 0.5}}, 2.0));
    const double beta = -3.0;  // factors: 1-3 = -2 and 1-1.5 = -0.5
    GExp e(d, Coefficient(beta));

    auto reference = [&](double t) {
        // cos(j pi) * exp(beta * g^C(t) + sum ln|1+beta Delta|), j = #negative factors
        double log_mag = beta * d.continuous().value(t);
        int negatives = 0;
        for (const Jump& j : d.jumps()) {
            if (j.time >= t) break;
            double factor = 1.0 + beta * j.delta;
            log_mag += std::log(std::abs(factor));
            if (factor < 0.0) ++negatives;
        }
        return std::cos(negatives * M_PI) * std::exp(log_mag);
    };
    for (double t : {0.2, 0.5, 0.7, 1.0, 1.2, 1.5, 2.0}) {
        CHECK(e.value(t).real() == doctest::Approx(reference(t)).epsilon(1e-12));
        CHECK(e.value(t).imag() == 0.0);
    }
    // sign flips exactly past the first negative factor
    CHECK(e.value(0.5).real() > 0.0);
    CHECK(e.value(0.500001).real() < 0.0);
}

TEST_CASE("g-exponential: vanishing factor truncates the solution") {
    Derivator d(ContinuousPart::identity(2.0), JumpSet({{0.5, 1.0}}, 2.0));
    GExp e(d, Coefficient(-1.0));  // 1 + (-1)(1) = 0
    CHECK(e.truncated());
    CHECK(e.truncation_time() == 0.5);
    CHECK(e.value(0.5) != Complex{0.0, 0.0});
    CHECK(e.value_right(0.5) == Complex{0.0, 0.0});
    CHECK(e.value(1.7) == Complex{0.0, 0.0});
    CHECK_THROWS_AS(e.inverse_value(0.7), TruncationError);
    CHECK_THROWS_AS(g_exp_properties_check(d, Coefficient(-1.0), 2), DomainError);
}

TEST_CASE("near-vanishing factors raise a conditioning warning, not truncation") {
    Derivator d(ContinuousPart::identity(2.0), JumpSet({{0.5, 1.0}}, 2.0));
    GExp e(d, Coefficient(-1.0 + 1e-12));
    CHECK_FALSE(e.truncated());
    REQUIRE(e.ill_conditioned_jumps().size() == 1);
    CHECK(e.ill_conditioned_jumps()[0] == 0.5);
    CHECK(std::abs(e.value(1.0)) > 0.0);

    CHECK_THROWS_AS(g_exp_properties_check(d, Coefficient(0.5), 1), DomainError);
}

TEST_CASE("exponential algebra identities") {
    SUBCASE("identity derivator: everything collapses to the classical laws") {
        Derivator id(ContinuousPart::identity(1.5), JumpSet());
        auto rep = g_exp_properties_check(id, Coefficient(Complex{0.4, 0.8}), 3);
        CHECK(rep.max() < 1e-12);
    }
    SUBCASE("single jump, hand-expanded power law") {
        Derivator d(ContinuousPart::identity(1.0), JumpSet({{0.5, 2.0}}, 1.0));
        // p_2(t_1) = 2*1 + 1*2 = 4; 1 + 4*2 = 9 = (1 + 1*2)^2
        Coefficient p2 = power_coefficient(d, Coefficient(1.0), 2);
        CHECK(p2(0.5) == Complex{4.0, 0.0});
        CHECK(p2(0.3) == Complex{2.0, 0.0});
        auto rep = g_exp_properties_check(d, Coefficient(1.0), 2);
        CHECK(rep.power < 1e-13);
        CHECK(rep.max() < 1e-12);
    }
    SUBCASE("inverse coefficient gives the constant function 1") {
        std::mt19937 rng(12);
        Derivator d = test_support::random_derivator(rng);
        Complex b = test_support::random_safe_beta(rng, d);
        auto dd = d;
        Coefficient beta(b);
        Coefficient beta_inv = Coefficient::piecewise(
            -b, [dd, b](double t) { return -b / (1.0 + b * dd.jump_at(t)); });
        GExp e1(d, beta), e2(d, beta_inv);
        for (int i = 0; i <= 20; ++i) {
            double t = d.horizon() * (i / 20.0);
            CHECK(std::abs(e1.value(t) * e2.value(t) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("g-sine and g-cosine") {
    SUBCASE("classical limit") {
        Derivator id(ContinuousPart::identity(3.0), JumpSet());
        GSinCos sc(id, Coefficient(2.0));
        for (int i = 0; i <= 60; ++i) {
            double t = 3.0 * i / 60.0;
            CHECK(std::abs(sc.sin(t) - std::sin(2.0 * t)) < 1e-12);
            CHECK(std::abs(sc.cos(t) - std::cos(2.0 * t)) < 1e-12);
        }
    }
    SUBCASE("initial conditions") {
        std::mt19937 rng(5);
        Derivator d = test_support::random_derivator(rng);
        GSinCos sc(d, Coefficient(1.7));
        CHECK(sc.sin(0.0) == 0.0);
        CHECK(sc.cos(0.0) == 1.0);
    }
    SUBCASE("squares sum to the jump-modulus product") {
        Derivator d(ContinuousPart::identity(1.0), JumpSet({{0.5, 1.0}}, 1.0));
        GSinCos sc(d, Coefficient(1.0));
        double s = sc.sin(1.0), c = sc.cos(1.0);
        CHECK(s * s + c * c == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("non-homogeneous first-order solutions") {
    SUBCASE("zero source reduces to the g-exponential") {
        std::mt19937 rng(71);
        Derivator d = test_support::random_derivator(rng);
        Complex beta = test_support::random_safe_beta(rng, d);
        FirstOrderSolution sol(d, Coefficient(beta), [](double) { return Complex{0.0, 0.0}; },
                               Complex{1.5, -0.5});
        GExp e(d, Coefficient(beta), Complex{1.5, -0.5});
        for (int i = 0; i <= 15; ++i) {
            double t = d.horizon() * (i / 15.0);
            CHECK(std::abs(sol.value(t) - e.value(t)) < 1e-12);
        }
    }
    SUBCASE("classical constant source") {
        Derivator id(ContinuousPart::identity(2.0), JumpSet());
        FirstOrderSolution sol(id, Coefficient(0.0), [](double) { return Complex{1.0, 0.0}; },
                               Complex{0.7, 0.0});
        for (int i = 0; i <= 20; ++i) {
            double t = 2.0 * i / 20.0;
            CHECK(std::abs(sol.value(t) - Complex{0.7 + t, 0.0}) < 1e-12);
        }
    }
    SUBCASE("exponential source matches the worked closed form") {
        Derivator d(ContinuousPart::identity(2.0), JumpSet({{0.6, 0.9}, {1.4, 0.4}}, 2.0));
        Complex x{0.5, 0.0}, z{-0.3, 0.8};
        GExp ez(d, Coefficient(z));
        FirstOrderSolution sol(d, Coefficient(x), [&](double s) { return ez.value(s); },
                               Complex{1.0, 0.0});
        GExp ex(d, Coefficient(x));
        for (double t : {0.3, 0.6, 0.9, 1.4, 1.9}) {
            Complex expected = ex.value(t) + (ez.value(t) - ex.value(t)) / (z - x);
            CHECK(std::abs(sol.value(t) - expected) < 1e-9);
        }
    }
    SUBCASE("queries past the truncation time are refused") {
        Derivator d(ContinuousPart::identity(2.0), JumpSet({{0.5, 1.0}}, 2.0));
        FirstOrderSolution sol(d, Coefficient(-1.0), [](double) { return Complex{1.0, 0.0}; },
                               Complex{1.0, 0.0});
        CHECK_NOTHROW(sol.value(0.5));
        CHECK_THROWS_AS(sol.value(0.6), TruncationError);
        try {
            sol.value(0.6);
        } catch (const TruncationError& e) {
            CHECK(e.truncation_time() == 0.5);
        }
    }
}

TEST_CASE("jump/continuous split of the non-homogeneous solution") {
    // With v0 = 1 the solution decomposes as v = v^C vB~ + v^B vC~, where
    // vB~ carries the jump-sum part of the source and vC~ the continuous
    // part, each riding on the opposite factor of the exponential.
    std::mt19937 rng(100);
    Derivator d = test_support::random_derivator(rng);
    Complex beta = test_support::random_safe_beta(rng, d);
    auto f = [](double s) { return Complex{std::sin(1.1 * s), 0.4 * s}; };
    FirstOrderSolution sol(d, Coefficient(beta), f, Complex{1.0, 0.0});

    auto vB = [&](double t) {
        Complex p{1.0, 0.0};
        for (const Jump& j : d.jumps())
            if (j.time < t) p *= 1.0 + beta * j.delta;
        return p;
    };
    auto vC = [&](double t) { return std::exp(beta * d.continuous().value(t)); };

    for (double frac : {0.3, 0.65, 0.95}) {
        double t = frac * d.horizon();
        Complex jump_sum{0.0, 0.0};
        for (const Jump& j : d.jumps())
            if (j.time < t)
                jump_sum += f(j.time) * j.delta /
                            (vB(j.time) * vC(j.time) * (1.0 + beta * j.delta));
        Complex vB_tilde = vB(t) * (0.5 + jump_sum);
        Complex cont = ls_integral_continuous(
            d, [&](double s) { return f(s) / (vC(s) * vB(s)); }, t);
        Complex vC_tilde = vC(t) * (0.5 + cont);
        Complex recomposed = vC(t) * vB_tilde + vB(t) * vC_tilde;
        CHECK(std::abs(recomposed - sol.value(t)) < 1e-9);
    }
}

TEST_CASE("first-order Green's kernel") {
    SUBCASE("triangular support and the classical kernel") {
        Derivator id(ContinuousPart::identity(2.0), JumpSet());
        GreenKernel G = green_first_order(id, Coefficient(0.8));
        CHECK(G(0.5, 0.7) == Complex{0.0, 0.0});
        CHECK(G(0.5, 0.5) == Complex{0.0, 0.0});
        CHECK(std::abs(G(1.5, 0.5) - std::exp(Complex{0.8, 0.0})) < 1e-12);
    }
    SUBCASE("a jump between s and t contributes one factor") {
        Derivator d(ContinuousPart::identity(2.0), JumpSet({{1.0, 0.7}}, 2.0));
        Complex beta{0.5, 0.2};
        GreenKernel G = green_first_order(d, Coefficient(beta));
        Complex expected = std::exp(beta * (1.6 - 0.4)) * (1.0 + beta * 0.7);
        CHECK(std::abs(G(1.6, 0.4) - expected) < 1e-12);
    }
    SUBCASE("convolution reproduces the particular solution") {
        std::mt19937 rng(2024);
        for (int rep = 0; rep < 5; ++rep) {
            Derivator d = test_support::random_derivator(rng);
            Complex beta = test_support::random_safe_beta(rng, d);
            auto f = [](double s) { return Complex{std::sin(s) + 0.3, 0.4 * s}; };
            FirstOrderSolution sol(d, Coefficient(beta), f, Complex{0.0, 0.0});
            GreenKernel G = green_first_order(d, Coefficient(beta));
            for (double frac : {0.4, 0.8}) {
                double t = frac * d.horizon();
                Complex conv =
                    ls_integral(d, [&](double s) { return G(t, s) * f(s); }, t);
                CHECK(std::abs(conv - sol.particular(t)) < 1e-9);
            }
        }
    }
}

TEST_CASE("jump relation, flat invariance and the modulus law") {
    std::mt19937 rng(31415);
    for (int rep = 0; rep < 20; ++rep) {
        Derivator d = test_support::random_derivator(rng);
        Complex b = test_support::random_safe_beta(rng, d);
        GExp e(d, Coefficient(b));

        for (const Jump& j : d.jumps()) {
            Complex lhs = e.value_right(j.time);
            Complex rhs = (1.0 + b * j.delta) * e.value(j.time);
            CHECK(std::abs(lhs - rhs) <= 2.0 * std::numeric_limits<double>::epsilon() *
                                             std::abs(rhs));
        }

        for (auto [a, bb] : d.flat_components()) {
            double lo = a + 0.25 * (bb - a), hi = a + 0.75 * (bb - a);
            CHECK(e.value(lo) == e.value(hi));
        }

        GSinCos sc(d, Coefficient(std::abs(b)));
        double t = 0.9 * d.horizon();
        double mod2 = 1.0;
        for (const Jump& j : d.jumps())
            if (j.time < t) mod2 *= 1.0 + std::abs(b) * std::abs(b) * j.delta * j.delta;
        double s = sc.sin(t), c = sc.cos(t);
        CHECK(s * s + c * c == doctest::Approx(mod2).epsilon(1e-10));
    }
}

TEST_CASE("exp_g(a+bi) factors with the modulated imaginary coefficient only") {
    Derivator d(ContinuousPart::identity(1.0), JumpSet({{0.5, 1.0}}, 1.0));
    const double a = 1.0, b = 1.0;
    GExp lhs(d, Coefficient(Complex{a, b}));
    auto dd = d;
    Coefficient modulated = Coefficient::piecewise(
        Complex{0.0, b}, [dd, a, b](double t) {
            return Complex{0.0, 1.0} * b / (1.0 + a * dd.jump_at(t));
        });
    GExp ea(d, Coefficient(a));
    GExp emod(d, modulated);
    GExp eib(d, Coefficient(Complex{0.0, b}));
    for (double t : {0.3, 0.6, 1.0}) {
        CHECK(std::abs(lhs.value(t) - ea.value(t) * emod.value(t)) < 1e-12);
    }
    // with a jump present the naive real/imaginary split differs
    CHECK(std::abs(lhs.value(0.9) - ea.value(0.9) * eib.value(0.9)) > 0.05);
}

TEST_CASE("first-order ODE residual") {
    std::mt19937 rng(5150);
    Derivator d = test_support::random_derivator(rng);
    Complex beta = test_support::random_safe_beta(rng, d);
    auto f = [](double s) { return Complex{0.2 * s, std::cos(s)}; };
    FirstOrderSolution sol(d, Coefficient(beta), f, Complex{1.0, 0.3});
    auto tracks = sol.solution();
    auto grid = residual_grid(d, 40);
    CHECK(residual_first_order(d, tracks, [beta](double) { return beta; }, f, grid) < 1e-6);

    // exact quotient residual at jumps alone
    std::vector<double> jump_grid;
    for (const Jump& j : d.jumps()) jump_grid.push_back(j.time);
    CHECK(residual_first_order(d, tracks, [beta](double) { return beta; }, f, jump_grid) <
          1e-9);
}
