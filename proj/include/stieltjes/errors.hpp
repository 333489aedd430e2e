#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace stieltjes {

using Complex = std::complex<double>;

/// Input outside the working window or structurally invalid data.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Query past the truncation time t0 of a g-exponential with a vanishing
/// jump factor; the solution is not defined (non-homogeneous case) or not
/// invertible there.
class TruncationError : public DomainError {
public:
    TruncationError(const std::string& what, double truncation_time)
        : DomainError(what), truncation_time_(truncation_time) {}
    double truncation_time() const { return truncation_time_; }

private:
    double truncation_time_;
};

/// Quadrature failed to meet the requested tolerances; carries the best
/// estimate obtained and a bound on its error.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, Complex best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}
    Complex best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    Complex best_estimate_;
    double error_bound_;
};

/// The difference quotient denominator vanished for every admissible step.
class DegeneratePointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN or overflow produced by the right-hand side during time stepping.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t node, double time)
        : std::runtime_error(what), node_(node), time_(time) {}
    std::size_t node() const { return node_; }
    double time() const { return time_; }

private:
    std::size_t node_;
    double time_;
};

/// Malformed configuration file or command line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace stieltjes
