// Trivially Darboux-integrable representations D_x g = 0, D_y h = 0,
// D_x D_y theta = 0: recovering the arbitrary element from a datum,
// reconstructing theta from an equation in the bilinear subclass, gauge
// changes of h, the genuine contact admissible transformations built from a
// reparameterized h, induced targets, and the determining-system verifier.

#pragma once

#include <functional>

#include "hypeq/classifier.hpp"
#include "hypeq/transforms.hpp"

namespace hypeq {

struct DegenerateDatumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContactConditionViolatedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BranchUndeterminedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DarbouxDatum {
    enum class Kind { G, H, Theta };
    Kind kind = Kind::H;
    Expr expr;
    std::vector<Condition> domain;
};

// D_y h = 0 with h = h(x,y,u,ux):  f = -(h_y + h_u uy)/h_ux
Expr f_from_h(const DarbouxDatum& h, const VariableSpace& space,
              const SamplerConfig& config = {});
// D_x g = 0 with g = g(x,y,u,uy):  f = -(g_x + g_u ux)/g_uy
Expr f_from_g(const DarbouxDatum& g, const VariableSpace& space,
              const SamplerConfig& config = {});
// f = (theta_xy + theta_xu uy + theta_yu ux + theta_uu ux uy)/theta_u
Expr f_from_theta(const DarbouxDatum& theta, const VariableSpace& space,
                  const SamplerConfig& config = {});

struct ThetaBasePoint {
    Rational x0{0}, y0{0}, u0{0};
};

struct ThetaReconstruction {
    enum class Status { Ok, NotInHxy, IntegrationFailure };
    Status status = Status::IntegrationFailure;
    std::optional<Expr> theta;
    MembershipCheck hxy;
    std::optional<ZeroStatus> verification;  // f_from_theta(theta) - f
    ThetaBasePoint base;
    std::string note;
    // quadrature-backed evaluator, available when the table fails
    std::function<double(double, double, double)> numeric_theta;
};

ThetaReconstruction reconstruct_theta(const Expr& f, const VariableSpace& space,
                                      const SamplerConfig& config = {},
                                      std::optional<ThetaBasePoint> base = {});

// h~ = H(x, h) with H given as an expression in (x, eta), H_eta != 0.
DarbouxDatum gauge_h(const DarbouxDatum& h, const Expr& gauge,
                     const VariableSpace& space, const SamplerConfig& config = {});

// f~ o Phi: Uy_ux/X_ux on the X_ux != 0 branch, the permuted mirror on the
// other, the point formula when both X_ux and Y_uy vanish.
Expr induced_target(const ContactTransform& phi, const Expr& f,
                    const VariableSpace& space, const SamplerConfig& config = {});

struct DeterminingReport {
    std::vector<ResidualItem> residuals;  // eight reduced equations + contact four
    bool passed = false;
    bool symbolically_exact = false;
    bool used_swap = false;  // verified after pre-composition with the permutation
    double numeric_tolerance = 1e-9;
};

DeterminingReport verify_determining_system(const AdmissibleTransformation& t,
                                            const VariableSpace& space,
                                            const SamplerConfig& config = {});

struct HyAdmissibleBuild {
    AdmissibleTransformation transformation;
    DeterminingReport determining;
    ContactCheckReport contact;
    ZeroStatus jacobian;
};

// Contact transformation built over the reparameterized class: tau~ = eta,
// xi~ = xi, ups~ = Upsilon(tau,xi,ups,eta), eta~ = tau, pulled back through
// (tau,xi,ups) = (x,y,u), eta = h. `hfun` is the inverse of h with respect
// to ux, supplied by the caller and verified.
HyAdmissibleBuild build_hy_admissible(const DarbouxDatum& h, const Expr& upsilon,
                                      const Expr& hfun, const VariableSpace& space,
                                      const SamplerConfig& config = {});

}  // namespace hypeq
