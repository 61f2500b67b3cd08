// Contact symmetries of the wave equation u_xy = 0: the separated shape
// x~ = X(x,ux), y~ = Y(y,uy), u~ = c u + U1(x,ux) + U2(y,uy) with its four
// closure conditions, the quadrature-based builder for U1 and U2, and the
// discrete catalog generated by the permutation and the three sign flips.

#pragma once

#include "hypeq/darboux.hpp"

namespace hypeq {

struct InverseMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IntegrationFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WaveSymmetryReport {
    bool passed = false;
    bool used_swap = false;      // shape recognized after permutation
    std::optional<Expr> c;       // the constant multiplier of u
    std::vector<ResidualItem> shape_items;      // separated-shape residuals
    std::vector<ResidualItem> condition_items;  // the four closure conditions
    double numeric_tolerance = 1e-9;
};

WaveSymmetryReport verify_wave_symmetry(const ContactTransform& phi,
                                        const VariableSpace& space,
                                        const SamplerConfig& config = {});

// Builder inputs. X is an expression in (x, ux), Y in (y, uy). On the
// X_ux != 0 branch theta1(tau, eta) must invert X with respect to ux
// (tau = the x slot, eta = the value of X), and U1 comes from the quadrature
// formula; phi1(eta) is the free function of the X-value. On the X_ux = 0
// branch phi1 is read as U1(x) directly and theta1 is ignored. The Y side
// mirrors this with theta2/phi2.
struct WaveSymmetrySpec {
    Rational c{1};
    Expr X, Y;
    Expr phi1, phi2;
    std::optional<Expr> theta1, theta2;
    Rational t0{0};  // base point of the quadrature
};

ContactTransform build_wave_symmetry(const WaveSymmetrySpec& spec,
                                     const VariableSpace& space,
                                     const SamplerConfig& config = {});

// The permutation, the three sign alternations, and the composition closure
// they generate: 16 distinct transforms in deterministic order.
std::vector<ContactTransform> wave_discrete_generators();
std::vector<ContactTransform> wave_discrete_catalog(const VariableSpace& space);

}  // namespace hypeq
