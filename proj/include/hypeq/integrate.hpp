// Table-driven symbolic integration: polynomials, exp/sin/cos of arguments
// affine in the integration variable, rational functions with a linear
// denominator, and the power rule for exponential atoms. Everything else is
// declined so callers can fall back to numeric quadrature.

#pragma once

#include <functional>
#include <optional>

#include "hypeq/expr.hpp"

namespace hypeq {

std::optional<Expr> integrate_table(const Expr& e, const std::string& var,
                                    const VariableSpace& space);

// F(hi) - F(lo) for a table antiderivative F; nullopt when the table fails
// or a bound substitution is singular.
std::optional<Expr> integrate_definite(const Expr& e, const std::string& var,
                                       const Expr& lo, const Expr& hi,
                                       const VariableSpace& space);

// exp(w), splitting additive rational multiples of logarithms into powers:
// exp(c*ln(a) + r) = a^c * exp(r).
Expr exp_of(const Expr& w, const VariableSpace& space);

double simpson_adaptive(const std::function<double(double)>& g, double a, double b,
                        double tol = 1e-10);

}  // namespace hypeq
