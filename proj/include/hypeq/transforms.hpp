// Point and contact transformations of the first jet space: representation,
// prolongation, contact-condition verification, Jacobian nondegeneracy,
// composition, pushforward of the arbitrary element, and the closed-form
// inversion catalog.

#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "hypeq/jets.hpp"
#include "hypeq/zero_test.hpp"

namespace hypeq {

struct DegenerateTransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (x~, y~, u~, u~_x~, u~_y~) = (X, Y, U, Ux, Uy) on (x, y, u, ux, uy).
struct ContactTransform {
    Expr X, Y, U, Ux, Uy;
    std::vector<Condition> domain;
    std::optional<std::array<Expr, 5>> inverse;  // components of the inverse map

    std::array<Expr, 5> components() const { return {X, Y, U, Ux, Uy}; }
    // "X|Y|U|Ux|Uy" of normalized components; stable identity for tables
    std::string key() const;
};

ContactTransform identity_contact();
// x <-> y permutation with ux <-> uy.
ContactTransform i0_transform();

// x~ = X(x), y~ = Y(y), u~ = U(x,y,u); swap pre-composes the permutation.
struct PointEquivalenceTransform {
    Expr X, Y, U;
    bool swap = false;
    std::vector<Condition> domain;
};

// First-order prolongation; the result carries the contact condition by
// construction. Throws DegenerateTransformError when X_x Y_y U_u vanishes
// identically or cannot be certified nonzero on the domain.
ContactTransform prolong_point(const PointEquivalenceTransform& p,
                               const VariableSpace& space,
                               const SamplerConfig& config = {});

struct ResidualItem {
    std::string name;
    Expr residual;
    ZeroStatus status;
    std::optional<double> max_numeric;
};

struct ContactCheckReport {
    std::vector<ResidualItem> items;
    bool passed = false;          // every residual proven zero or numerically tiny
    bool symbolically_exact = false;  // every residual ProvenZero
    double numeric_tolerance = 1e-9;
};

ContactCheckReport check_contact_condition(const ContactTransform& phi,
                                           const VariableSpace& space,
                                           const SamplerConfig& config = {});

// det d(X,Y,U,Ux,Uy)/d(x,y,u,ux,uy), symbolically zero-tested.
ZeroStatus jacobian_nondegenerate(const ContactTransform& phi,
                                  const VariableSpace& space,
                                  const SamplerConfig& config = {});
Expr jacobian_determinant(const ContactTransform& phi, const VariableSpace& space);

// second after first (components of `second` pulled back through `first`).
ContactTransform compose(const ContactTransform& second, const ContactTransform& first,
                         const VariableSpace& space);

// Result of pushing f through a point-equivalence transform: the pullback
// f~ o Phi always, the tilde-coordinate form when the inversion catalog
// applies.
struct PointApplyResult {
    Expr pullback;                       // in source coordinates
    std::optional<Expr> tilde;           // in tx, ty, tu, tux, tuy
    std::vector<Condition> tilde_domain;
};

PointApplyResult apply_point_equivalence(const PointEquivalenceTransform& p,
                                         const Expr& f, const VariableSpace& space,
                                         const SamplerConfig& config = {});

// Closed-form inverse when X, Y, U(.,.,u) lie in the inversion catalog
// (affine, odd power, exp/ln, Moebius in u, depressed cubic, compositions);
// nullopt otherwise.
std::optional<PointEquivalenceTransform> invert_point(
    const PointEquivalenceTransform& p, const VariableSpace& space,
    const SamplerConfig& config = {});

// Catalog inversion of a single expression in one variable: returns the
// inverse written in terms of `target`, plus domain conditions in the target
// variable. Exposed for the numeric inverter and the wave-symmetry builder.
struct InverseExpr {
    Expr expr;
    std::vector<Condition> conditions;
};
std::optional<InverseExpr> invert_in_variable(const Expr& e, const std::string& var,
                                              const Expr& target,
                                              const VariableSpace& space,
                                              const SamplerConfig& config = {});

// Bisection-then-Newton scalar inversion of e(var) = target on [lo, hi].
std::optional<double> numeric_invert(const Expr& e, const std::string& var,
                                     double target, double lo, double hi,
                                     const NumericPoint& other_vars,
                                     const VariableSpace& space, double tol = 1e-12);

// (f, Phi, f~): the target is primarily carried as the pullback f~ o Phi.
struct AdmissibleTransformation {
    Expr source_f;
    ContactTransform phi;
    Expr target_pullback;          // f~ o Phi in source coordinates
    std::optional<Expr> target_tilde;  // f~ in tilde coordinates when known
};

}  // namespace hypeq
