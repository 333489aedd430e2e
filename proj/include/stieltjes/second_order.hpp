#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "stieltjes/first_order.hpp"

namespace stieltjes {

/// Constant-coefficient second-order problem v''_g + P v'_g + Q v = f with
/// initial value x0 and initial g-derivative v0.
struct SecondOrderProblem {
    Complex P{0.0, 0.0};
    Complex Q{0.0, 0.0};
    Complex x0{0.0, 0.0};
    Complex v0{0.0, 0.0};
    std::optional<Integrand> f;  // absent: homogeneous
};

namespace detail {

struct CharacteristicRoots {
    Complex lambda1, lambda2;
    bool double_root;
};

/// Roots of lambda^2 + P lambda + Q = 0 in complex arithmetic; nearly equal
/// roots collapse onto the double root -P/2, where the distinct-root formulas
/// lose a (lambda1-lambda2)^{-1} cancellation.
inline CharacteristicRoots characteristic_roots(Complex P, Complex Q) {
    Complex disc = std::sqrt(P * P - 4.0 * Q);
    Complex l1 = 0.5 * (-P + disc);
    Complex l2 = 0.5 * (-P - disc);
    bool dbl = std::abs(l1 - l2) < 1e-8 * (1.0 + std::abs(l1));
    if (dbl) l1 = l2 = -0.5 * P;
    return {l1, l2, dbl};
}

inline void validate_roots(const Derivator& d, const CharacteristicRoots& r) {
    for (const Jump& j : d.jumps()) {
        for (Complex l : {r.lambda1, r.lambda2}) {
            Complex factor = 1.0 + l * j.delta;
            if (std::abs(factor) <= 1e-14 * (1.0 + std::abs(l * j.delta)))
                throw DomainError("second order: 1 + lambda Delta+g vanishes at a jump; the "
                                  "closed form is not applicable");
        }
    }
}

} // namespace detail

/// Closed-form solution of the second-order problem. Holds exact right limits
/// and the analytic g-derivative track (v, v'_g), which the residual oracle
/// uses for exact jump quotients. Immutable; concurrent evaluation is safe.
class SecondOrderSolution {
public:
    SecondOrderSolution(const Derivator& d, const SecondOrderProblem& prob,
                        QuadratureSettings quad = {})
        : d_(d), prob_(prob), quad_(quad),
          roots_(detail::characteristic_roots(prob.P, prob.Q)) {
        detail::validate_roots(d_, roots_);
        if (roots_.double_root) {
            e1_ = std::make_shared<GExp>(d_, Coefficient(roots_.lambda1));
            e2_ = e1_;
        } else {
            e1_ = std::make_shared<GExp>(d_, Coefficient(roots_.lambda1));
            e2_ = std::make_shared<GExp>(d_, Coefficient(roots_.lambda2));
        }
    }

    Complex lambda1() const { return roots_.lambda1; }
    Complex lambda2() const { return roots_.lambda2; }
    bool double_root() const { return roots_.double_root; }

    Complex value(double t) const { return homogeneous(t) + particular(t); }
    Complex operator()(double t) const { return value(t); }

    Complex value_right(double t) const {
        return homogeneous_right(t) + particular_right(t);
    }

    /// Analytic g-derivative v'_g.
    Complex derivative(double t) const {
        return homogeneous_derivative(t) + particular_derivative(t);
    }

    Complex derivative_right(double t) const {
        return homogeneous_derivative_right(t) + particular_derivative_right(t);
    }

    /// Particular part (zero initial data); identically 0 for homogeneous
    /// problems.
    Complex particular(double t) const {
        if (!prob_.f) return {0.0, 0.0};
        if (roots_.double_root) {
            // v_p = E (I J - K - L)
            return e1_->value(t) * (flat_integral(t) * source_integral1(t) -
                                    nested_weight_integral(t) - jump_correction_integral(t));
        }
        Complex kappa = 1.0 / (roots_.lambda1 - roots_.lambda2);
        return kappa * (e1_->value(t) * source_integral1(t) -
                        e2_->value(t) * source_integral2(t));
    }

private:
    // --- homogeneous part -------------------------------------------------
    Complex homogeneous(double t) const {
        if (roots_.double_root) {
            Complex c = prob_.v0 - roots_.lambda1 * prob_.x0;
            return e1_->value(t) * (prob_.x0 + c * flat_integral(t));
        }
        auto [c1, c2] = homogeneous_weights();
        return c1 * e1_->value(t) - c2 * e2_->value(t);
    }

    Complex homogeneous_right(double t) const {
        if (roots_.double_root) {
            Complex c = prob_.v0 - roots_.lambda1 * prob_.x0;
            return e1_->value_right(t) * (prob_.x0 + c * flat_integral_right(t));
        }
        auto [c1, c2] = homogeneous_weights();
        return c1 * e1_->value_right(t) - c2 * e2_->value_right(t);
    }

    // v' = c1 l1 E1 + c2 l2 E2 (distinct) or v' = lambda v + c E (double).
    Complex homogeneous_derivative(double t) const {
        if (roots_.double_root) {
            Complex c = prob_.v0 - roots_.lambda1 * prob_.x0;
            return roots_.lambda1 * homogeneous(t) + c * e1_->value(t);
        }
        auto [c1, c2] = homogeneous_weights();
        return c1 * roots_.lambda1 * e1_->value(t) - c2 * roots_.lambda2 * e2_->value(t);
    }

    Complex homogeneous_derivative_right(double t) const {
        if (roots_.double_root) {
            Complex c = prob_.v0 - roots_.lambda1 * prob_.x0;
            return roots_.lambda1 * homogeneous_right(t) + c * e1_->value_right(t);
        }
        auto [c1, c2] = homogeneous_weights();
        return c1 * roots_.lambda1 * e1_->value_right(t) -
               c2 * roots_.lambda2 * e2_->value_right(t);
    }

    std::pair<Complex, Complex> homogeneous_weights() const {
        Complex denom = roots_.lambda1 - roots_.lambda2;
        return {(prob_.v0 - roots_.lambda2 * prob_.x0) / denom,
                (prob_.v0 - roots_.lambda1 * prob_.x0) / denom};
    }

    // --- particular part --------------------------------------------------
    Complex particular_right(double t) const {
        if (!prob_.f) return {0.0, 0.0};
        if (roots_.double_root) {
            return e1_->value_right(t) *
                   (flat_integral_right(t) * source_integral1_right(t) -
                    nested_weight_integral_right(t) - jump_correction_integral_right(t));
        }
        Complex kappa = 1.0 / (roots_.lambda1 - roots_.lambda2);
        return kappa * (e1_->value_right(t) * source_integral1_right(t) -
                        e2_->value_right(t) * source_integral2_right(t));
    }

    // v_p' = kappa (l1 E1 J1 - l2 E2 J2) (distinct), v_p' = l v_p + E J
    // (double root).
    Complex particular_derivative(double t) const {
        if (!prob_.f) return {0.0, 0.0};
        if (roots_.double_root)
            return roots_.lambda1 * particular(t) + e1_->value(t) * source_integral1(t);
        Complex kappa = 1.0 / (roots_.lambda1 - roots_.lambda2);
        return kappa * (roots_.lambda1 * e1_->value(t) * source_integral1(t) -
                        roots_.lambda2 * e2_->value(t) * source_integral2(t));
    }

    Complex particular_derivative_right(double t) const {
        if (!prob_.f) return {0.0, 0.0};
        if (roots_.double_root)
            return roots_.lambda1 * particular_right(t) +
                   e1_->value_right(t) * source_integral1_right(t);
        Complex kappa = 1.0 / (roots_.lambda1 - roots_.lambda2);
        return kappa * (roots_.lambda1 * e1_->value_right(t) * source_integral1_right(t) -
                        roots_.lambda2 * e2_->value_right(t) * source_integral2_right(t));
    }

    // --- integral building blocks ------------------------------------------
    // I(t) = int 1/(1 + lambda Delta+g) d(mu_g): integrand is 1 off D_g, so
    // the continuous part contributes g^C(t) exactly.
    Complex flat_integral(double t) const {
        Complex sum = d_.continuous().value(t);
        for (const Jump& j : d_.jumps()) {
            if (j.time >= t) break;
            sum += j.delta / (1.0 + roots_.lambda1 * j.delta);
        }
        return sum;
    }

    Complex flat_integral_right(double t) const {
        Complex v = flat_integral(t);
        double delta = d_.jump_at(t);
        if (delta > 0.0) v += delta / (1.0 + roots_.lambda1 * delta);
        return v;
    }

    Complex source_kernel(const GExp& e, Complex lambda, double s) const {
        return e.inverse_value(s) * (*prob_.f)(s) / (1.0 + lambda * d_.jump_at(s));
    }

    Complex source_integral1(double t) const {
        return ls_integral(d_, [this](double s) {
            return source_kernel(*e1_, roots_.lambda1, s);
        }, t, quad_);
    }

    Complex source_integral2(double t) const {
        return ls_integral(d_, [this](double s) {
            return source_kernel(*e2_, roots_.lambda2, s);
        }, t, quad_);
    }

    Complex source_integral1_right(double t) const {
        Complex v = source_integral1(t);
        double delta = d_.jump_at(t);
        if (delta > 0.0) v += source_kernel(*e1_, roots_.lambda1, t) * delta;
        return v;
    }

    Complex source_integral2_right(double t) const {
        Complex v = source_integral2(t);
        double delta = d_.jump_at(t);
        if (delta > 0.0) v += source_kernel(*e2_, roots_.lambda2, t) * delta;
        return v;
    }

    // K(t) = int I(s) E^{-1} f/(1 + lambda Delta+g) d(mu_g) (double root).
    Complex nested_weight_integrand(double s) const {
        return flat_integral(s) * source_kernel(*e1_, roots_.lambda1, s);
    }

    Complex nested_weight_integral(double t) const {
        return ls_integral(d_, [this](double s) { return nested_weight_integrand(s); }, t,
                           quad_);
    }

    Complex nested_weight_integral_right(double t) const {
        Complex v = nested_weight_integral(t);
        double delta = d_.jump_at(t);
        if (delta > 0.0) v += nested_weight_integrand(t) * delta;
        return v;
    }

    // L(t) = int E^{-1} f Delta+g/(1 + lambda Delta+g)^2 d(mu_g): pure jump
    // sum, the integrand vanishes off D_g.
    Complex jump_correction_integral(double t) const {
        Complex sum{0.0, 0.0};
        for (const Jump& j : d_.jumps()) {
            if (j.time >= t) break;
            Complex denom = 1.0 + roots_.lambda1 * j.delta;
            sum += e1_->inverse_value(j.time) * (*prob_.f)(j.time) * j.delta * j.delta /
                   (denom * denom);
        }
        return sum;
    }

    Complex jump_correction_integral_right(double t) const {
        Complex v = jump_correction_integral(t);
        double delta = d_.jump_at(t);
        if (delta > 0.0) {
            Complex denom = 1.0 + roots_.lambda1 * delta;
            v += e1_->inverse_value(t) * (*prob_.f)(t) * delta * delta / (denom * denom);
        }
        return v;
    }

public:
    /// Self-contained tracks (safe to outlive this object).
    GSolution solution() const {
        auto self = std::make_shared<SecondOrderSolution>(*this);
        return GSolution{[self](double t) { return self->value(t); },
                         [self](double t) { return self->value_right(t); },
                         [self](double t) { return self->derivative(t); },
                         [self](double t) { return self->derivative_right(t); }};
    }

private:
    Derivator d_;
    SecondOrderProblem prob_;
    QuadratureSettings quad_;
    detail::CharacteristicRoots roots_;
    std::shared_ptr<GExp> e1_, e2_;
};

inline SecondOrderSolution solve_homogeneous(const Derivator& d, const SecondOrderProblem& prob) {
    if (prob.f) throw DomainError("solve_homogeneous: problem carries a source term");
    return SecondOrderSolution(d, prob);
}

inline SecondOrderSolution solve_nonhomogeneous(const Derivator& d,
                                                const SecondOrderProblem& prob,
                                                const QuadratureSettings& quad = {}) {
    return SecondOrderSolution(d, prob, quad);
}

/// Second-order Green's function. Distinct roots:
///   G(t,r) = (l1-l2)^{-1} [E1(t) E1(r)^{-1} (1+l1 D(r))^{-1}
///                          - E2(t) E2(r)^{-1} (1+l2 D(r))^{-1}] on r < t;
/// double root: the three-term kernel with the flat integral
/// I(t) - I(r) - D(r)/(1+l D(r)).
inline GreenKernel green_second_order(const Derivator& d, Complex P, Complex Q) {
    auto roots = detail::characteristic_roots(P, Q);
    detail::validate_roots(d, roots);
    auto e1 = std::make_shared<GExp>(d, Coefficient(roots.lambda1));
    auto dd = d;
    if (roots.double_root) {
        Complex l = roots.lambda1;
        return GreenKernel{[e1, dd, l](double t, double r) -> Complex {
            if (r >= t) return Complex{0.0, 0.0};
            auto flat = [&](double u) {
                Complex s = dd.continuous().value(u);
                for (const Jump& j : dd.jumps()) {
                    if (j.time >= u) break;
                    s += j.delta / (1.0 + l * j.delta);
                }
                return s;
            };
            double dr = dd.jump_at(r);
            Complex bracket = flat(t) - flat(r) - dr / (1.0 + l * dr);
            return e1->value(t) * e1->inverse_value(r) / (1.0 + l * dr) * bracket;
        }};
    }
    auto e2 = std::make_shared<GExp>(d, Coefficient(roots.lambda2));
    Complex l1 = roots.lambda1, l2 = roots.lambda2;
    return GreenKernel{[e1, e2, dd, l1, l2](double t, double r) -> Complex {
        if (r >= t) return Complex{0.0, 0.0};
        double dr = dd.jump_at(r);
        Complex kappa = 1.0 / (l1 - l2);
        return kappa * (e1->value(t) * e1->inverse_value(r) / (1.0 + l1 * dr) -
                        e2->value(t) * e2->inverse_value(r) / (1.0 + l2 * dr));
    }};
}

/// Nested double-integral form of the non-homogeneous solution (test oracle;
/// the production path uses the integrated-by-parts single-integral forms).
inline Complex solve_nonhomogeneous_nested(const Derivator& d, const SecondOrderProblem& prob,
                                           double t, const QuadratureSettings& outer_quad,
                                           const QuadratureSettings& inner_quad) {
    if (!prob.f) throw DomainError("solve_nonhomogeneous_nested: source term required");
    auto roots = detail::characteristic_roots(prob.P, prob.Q);
    detail::validate_roots(d, roots);
    GExp e1(d, Coefficient(roots.lambda1));
    GExp e2(d, Coefficient(roots.lambda2));

    auto inner = [&](double s) {
        return ls_integral(d, [&](double r) {
            return e1.inverse_value(r) * (*prob.f)(r) / (1.0 + roots.lambda1 * d.jump_at(r));
        }, s, inner_quad);
    };
    auto weight = [&](double s) {
        return e2.inverse_value(s) * e1.value(s) / (1.0 + roots.lambda2 * d.jump_at(s));
    };

    Complex term0 = prob.x0 * e2.value(t);
    Complex term1 = (prob.v0 - roots.lambda2 * prob.x0) * e2.value(t) *
                    ls_integral(d, weight, t, outer_quad);
    Complex term2 = e2.value(t) * ls_integral(d, [&](double s) { return weight(s) * inner(s); },
                                              t, outer_quad);
    return term0 + term1 + term2;
}

} // namespace stieltjes
