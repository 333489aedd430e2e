#pragma once

// Stieltjes differential calculus: derivators, Lebesgue-Stieltjes
// integration, g-derivatives, closed-form linear solvers and the
// predictor-corrector scheme.

#include "stieltjes/derivator.hpp"
#include "stieltjes/integral.hpp"
#include "stieltjes/g_derivative.hpp"
#include "stieltjes/first_order.hpp"
#include "stieltjes/second_order.hpp"
#include "stieltjes/oscillator.hpp"
#include "stieltjes/scheme.hpp"
#include "stieltjes/trajectory.hpp"
#include "stieltjes/config.hpp"
