#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "stieltjes/g_derivative.hpp"

namespace stieltjes {

/// Coefficient beta of a first-order linear problem. Most coefficients in
/// closed-form solutions are constant off the jump set with explicit values
/// at jumps (e.g. b/(1 + a*Delta+g)); carrying that constant lets the
/// continuous-part integral be evaluated exactly instead of by quadrature.
class Coefficient {
public:
    Coefficient(Complex c)
        : fn_([c](double) { return c; }), continuous_constant_(c) {}
    Coefficient(double c) : Coefficient(Complex{c, 0.0}) {}

    explicit Coefficient(std::function<Complex(double)> fn) : fn_(std::move(fn)) {}

    /// Coefficient equal to `off_jump` outside D_g, with `fn` supplying the
    /// values everywhere (including at jumps).
    static Coefficient piecewise(Complex off_jump, std::function<Complex(double)> fn) {
        Coefficient c{std::move(fn)};
        c.continuous_constant_ = off_jump;
        return c;
    }

    Complex operator()(double t) const { return fn_(t); }
    bool has_continuous_constant() const { return continuous_constant_.has_value(); }
    Complex continuous_constant() const { return *continuous_constant_; }

private:
    std::function<Complex(double)> fn_;
    std::optional<Complex> continuous_constant_;
};

/// The g-exponential exp_g(beta; 0, t) scaled by v0: the unique AC_g solution
/// of v'_g = beta v, v(0) = v0, evaluated as the finite product of jump
/// factors (1 + beta Delta+g) times exp of the continuous-part integral.
/// Products are taken directly rather than through logarithms, so zero and
/// negative factors need no branch-cut bookkeeping.
///
/// When a jump factor vanishes, t0 (the truncation time) is that jump and the
/// solution is identically 0 on (t0, T]. Immutable after construction,
/// including the eagerly built prefix products; concurrent queries are safe.
class GExp {
public:
    GExp(const Derivator& d, Coefficient beta, Complex v0 = 1.0, QuadratureSettings quad = {})
        : d_(d), beta_(std::move(beta)), v0_(v0), quad_(quad) {
        const auto& jumps = d_.jumps();
        prefix_.reserve(jumps.size() + 1);
        prefix_.push_back(Complex{1.0, 0.0});
        truncation_ = d_.horizon();
        truncated_ = false;
        for (const Jump& j : jumps) {
            Complex b = beta_(j.time);
            Complex factor = 1.0 + b * j.delta;
            double mag = std::abs(factor);
            double ref = 1.0 + std::abs(b * j.delta);
            if (mag <= 1e-14 * ref) {
                factor = 0.0;
                if (!truncated_) {
                    truncated_ = true;
                    truncation_ = j.time;
                }
            } else if (mag < 1e-10 * ref) {
                ill_conditioned_.push_back(j.time);
            }
            jump_factors_.emplace_back(j.time, factor);
            prefix_.push_back(prefix_.back() * factor);
        }
    }

    const Derivator& derivator() const { return d_; }
    const Coefficient& coefficient() const { return beta_; }

    /// First jump time with 1 + beta Delta+g = 0, or T when no factor
    /// vanishes.
    double truncation_time() const { return truncation_; }
    bool truncated() const { return truncated_; }

    /// Jumps whose factor is nonzero but below 1e-10 in relative magnitude.
    const std::vector<double>& ill_conditioned_jumps() const { return ill_conditioned_; }

    const std::vector<std::pair<double, Complex>>& jump_factors() const { return jump_factors_; }

    Complex value(double t) const {
        if (!(t >= 0.0) || !(t <= d_.horizon()))
            throw DomainError("GExp::value: t outside [0, T]");
        if (truncated_ && t > truncation_) return Complex{0.0, 0.0};
        return v0_ * prefix_[d_.count_jumps_before(t)] * std::exp(continuous_integral(t));
    }

    Complex operator()(double t) const { return value(t); }

    /// Exact right limit v(t+) = v(t) * (1 + beta(t) Delta+g(t)).
    Complex value_right(double t) const {
        double delta = d_.jump_at(t);
        if (delta == 0.0) return value(t);
        return value(t) * (1.0 + beta_(t) * delta);
    }

    /// 1 / value(t); refuses queries past the truncation time, where the
    /// exponential is identically zero.
    Complex inverse_value(double t) const {
        if (truncated_ && t > truncation_)
            throw TruncationError("GExp::inverse_value: the g-exponential vanishes past t0",
                                  truncation_);
        return 1.0 / value(t);
    }

    /// int_{[0,t)} beta d(mu_{g^C}); exact for coefficients constant off D_g.
    Complex continuous_integral(double t) const {
        if (beta_.has_continuous_constant())
            return beta_.continuous_constant() * d_.continuous().value(t);
        auto acc = detail::continuous_part_integral(
            d_, [this](double s) { return beta_(s); }, t, quad_);
        if (acc.budget_exhausted)
            throw AccuracyError("GExp: coefficient quadrature did not converge", acc.value,
                                acc.bound);
        return acc.value;
    }

private:
    Derivator d_;
    Coefficient beta_;
    Complex v0_;
    QuadratureSettings quad_;
    std::vector<Complex> prefix_;
    std::vector<std::pair<double, Complex>> jump_factors_;
    std::vector<double> ill_conditioned_;
    double truncation_;
    bool truncated_;
};

inline GExp g_exp(const Derivator& d, const Coefficient& beta, Complex v0 = 1.0,
                  const QuadratureSettings& quad = {}) {
    return GExp(d, beta, v0, quad);
}

namespace detail {

inline Coefficient map_coefficient(const Coefficient& b,
                                   const std::function<Complex(Complex)>& op) {
    auto fn = [b, op](double t) { return op(b(t)); };
    if (b.has_continuous_constant())
        return Coefficient::piecewise(op(b.continuous_constant()), fn);
    return Coefficient{fn};
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

} // namespace detail

/// p_n(beta) = n beta + sum_{k=2}^n C(n,k) beta^k Delta+g^{k-1}, the
/// coefficient whose g-exponential is exp_g(beta)^n.
inline Coefficient power_coefficient(const Derivator& d, const Coefficient& beta, int n) {
    auto fn = [d, beta, n](double t) {
        Complex b = beta(t);
        double delta = d.jump_at(t);
        Complex p = static_cast<double>(n) * b;
        Complex bd = b * delta;
        Complex term = b;  // beta^k Delta^{k-1}
        for (int k = 2; k <= n; ++k) {
            term *= bd;
            p += detail::binomial(n, k) * term;
        }
        return p;
    };
    if (beta.has_continuous_constant())
        return Coefficient::piecewise(static_cast<double>(n) * beta.continuous_constant(), fn);
    return Coefficient{fn};
}

/// q_n(beta) = -p_n(beta) / (1 + p_n(beta) Delta+g), the coefficient whose
/// g-exponential is exp_g(beta)^{-n}.
inline Coefficient inverse_power_coefficient(const Derivator& d, const Coefficient& beta, int n) {
    Coefficient p = power_coefficient(d, beta, n);
    auto fn = [d, p](double t) {
        Complex pv = p(t);
        return -pv / (1.0 + pv * d.jump_at(t));
    };
    if (p.has_continuous_constant())
        return Coefficient::piecewise(-p.continuous_constant(), fn);
    return Coefficient{fn};
}

/// beta1 + beta2 + beta1 beta2 Delta+g, the coefficient of the product
/// exp_g(beta1) exp_g(beta2).
inline Coefficient product_coefficient(const Derivator& d, const Coefficient& b1,
                                       const Coefficient& b2) {
    auto fn = [d, b1, b2](double t) {
        return b1(t) + b2(t) + b1(t) * b2(t) * d.jump_at(t);
    };
    if (b1.has_continuous_constant() && b2.has_continuous_constant())
        return Coefficient::piecewise(b1.continuous_constant() + b2.continuous_constant(), fn);
    return Coefficient{fn};
}

struct GExpPropertiesReport {
    double conjugation = 0.0;    // conj exp_g(beta) vs exp_g(conj beta)
    double power = 0.0;          // exp_g(beta)^n vs exp_g(p_n(beta))
    double inverse_power = 0.0;  // exp_g(beta)^{-n} vs exp_g(q_n(beta))
    double product = 0.0;        // product law with a second coefficient
    double max() const {
        return std::max(std::max(conjugation, power), std::max(inverse_power, product));
    }
};

/// Verifies the algebraic identities of the complex g-exponential at sampled
/// times and returns the largest normalized deviation |lhs - rhs|/(1 + |rhs|)
/// per identity (powers of the exponential span many orders of magnitude, so
/// raw absolute deviations are scale-dependent). Throws DomainError if a
/// vanishing factor makes the inverse undefined inside the window.
inline GExpPropertiesReport g_exp_properties_check(const Derivator& d, const Coefficient& beta,
                                                   int n, std::size_t samples = 33) {
    if (n < 2) throw DomainError("g_exp_properties_check: need n >= 2");
    GExp e(d, beta);
    if (e.truncated())
        throw DomainError("g_exp_properties_check: sampling past t0 (vanishing jump factor); "
                          "inverse powers are undefined there");
    GExp e_conj(d, detail::map_coefficient(beta, [](Complex b) { return std::conj(b); }));
    GExp e_pow(d, power_coefficient(d, beta, n));
    GExp e_inv(d, inverse_power_coefficient(d, beta, n));
    Coefficient beta2 = detail::map_coefficient(beta, [](Complex b) {
        return 0.5 * b + Complex{0.25, 0.125};
    });
    GExp e_b2(d, beta2);
    GExp e_prod(d, product_coefficient(d, beta, beta2));

    std::vector<double> times;
    const double T = d.horizon();
    for (std::size_t i = 0; i <= samples; ++i)
        times.push_back(T * static_cast<double>(i) / static_cast<double>(samples));
    for (const Jump& j : d.jumps()) times.push_back(j.time);

    auto dev = [](Complex lhs, Complex rhs) {
        return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    };
    GExpPropertiesReport rep;
    for (double t : times) {
        Complex v = e.value(t);
        rep.conjugation = std::max(rep.conjugation, dev(std::conj(v), e_conj.value(t)));
        rep.power = std::max(rep.power, dev(std::pow(v, n), e_pow.value(t)));
        rep.inverse_power = std::max(rep.inverse_power, dev(std::pow(v, -n), e_inv.value(t)));
        rep.product = std::max(rep.product, dev(v * e_b2.value(t), e_prod.value(t)));
    }
    return rep;
}

/// g-sine and g-cosine: imaginary and real parts of exp_g(i b; 0, t). Their
/// squares sum to the jump-modulus product, not to 1.
class GSinCos {
public:
    GSinCos(const Derivator& d, const Coefficient& b)
        : exp_(d, detail::map_coefficient(b, [](Complex x) { return Complex{0.0, 1.0} * x; })) {}

    double sin(double t) const { return exp_.value(t).imag(); }
    double cos(double t) const { return exp_.value(t).real(); }
    double sin_right(double t) const { return exp_.value_right(t).imag(); }
    double cos_right(double t) const { return exp_.value_right(t).real(); }

    const GExp& exponential() const { return exp_; }

private:
    GExp exp_;
};

inline GSinCos g_sin_cos(const Derivator& d, const Coefficient& b) { return GSinCos(d, b); }

/// Variation-of-constants solution of v'_g = beta v + f, v(0) = v0:
///   v(t) = v0 exp_g(beta;0,t)
///        + exp_g(beta;0,t) int_{[0,t)} exp_g(beta;0,s)^{-1} f(s) /
///          (1 + beta(s) Delta+g(s)) d(mu_g).
/// Queries past the truncation time t0 are refused; the paper defines the
/// non-homogeneous solution on [0, t0] only.
class FirstOrderSolution {
public:
    FirstOrderSolution(const Derivator& d, Coefficient beta, Integrand f, Complex v0,
                       QuadratureSettings quad = {})
        : exp_(d, beta, 1.0, quad), beta_(std::move(beta)), f_(std::move(f)), v0_(v0),
          quad_(quad) {}

    Complex value(double t) const {
        guard(t);
        return exp_.value(t) * (v0_ + particular_integral(t));
    }

    Complex operator()(double t) const { return value(t); }

    Complex value_right(double t) const {
        guard(t);
        if (exp_.truncated() && t == exp_.truncation_time())
            throw TruncationError("FirstOrderSolution: v(t0+) is not defined; the solution "
                                  "stops at t0",
                                  exp_.truncation_time());
        const Derivator& d = exp_.derivator();
        double delta = d.jump_at(t);
        Complex integral = particular_integral(t);
        if (delta > 0.0) integral += kernel_integrand(t) * delta;
        return exp_.value_right(t) * (v0_ + integral);
    }

    /// Particular part alone (v0 = 0), for Green-kernel comparisons.
    Complex particular(double t) const {
        guard(t);
        return exp_.value(t) * particular_integral(t);
    }

    const GExp& exponential() const { return exp_; }

    /// Self-contained tracks (safe to outlive this object).
    GSolution solution() const {
        auto self = std::make_shared<FirstOrderSolution>(*this);
        return GSolution{[self](double t) { return self->value(t); },
                         [self](double t) { return self->value_right(t); }, {}, {}};
    }

private:
    void guard(double t) const {
        if (exp_.truncated() && t > exp_.truncation_time())
            throw TruncationError("FirstOrderSolution: query past t0; the solution is defined "
                                  "on [0, t0] only",
                                  exp_.truncation_time());
    }

    Complex kernel_integrand(double s) const {
        const Derivator& d = exp_.derivator();
        return exp_.inverse_value(s) * f_(s) / (1.0 + beta_(s) * d.jump_at(s));
    }

    Complex particular_integral(double t) const {
        return ls_integral(exp_.derivator(), [this](double s) { return kernel_integrand(s); },
                           t, quad_);
    }

    GExp exp_;
    Coefficient beta_;
    Integrand f_;
    Complex v0_;
    QuadratureSettings quad_;
};

inline FirstOrderSolution solve_first_order(const Derivator& d, const Coefficient& beta,
                                            const Integrand& f, Complex v0,
                                            const QuadratureSettings& quad = {}) {
    return FirstOrderSolution(d, beta, f, v0, quad);
}

/// Two-argument kernel G(t, r) with triangular support r < t.
struct GreenKernel {
    std::function<Complex(double, double)> kernel;
    Complex operator()(double t, double r) const { return kernel(t, r); }
};

/// First-order Green's function
///   G(t, s) = exp_g(beta;0,t) exp_g(beta;0,s)^{-1} / (1 + beta(s) Delta+g(s))
/// on s < t, zero elsewhere; its mu_g-convolution with the source reproduces
/// the particular solution.
inline GreenKernel green_first_order(const Derivator& d, const Coefficient& beta) {
    auto e = std::make_shared<GExp>(d, beta);
    auto b = beta;
    auto dd = d;
    return GreenKernel{[e, b, dd](double t, double s) -> Complex {
        if (s >= t) return Complex{0.0, 0.0};
        return e->value(t) * e->inverse_value(s) / (1.0 + b(s) * dd.jump_at(s));
    }};
}

} // namespace stieltjes
