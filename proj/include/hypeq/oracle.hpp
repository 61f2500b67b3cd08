// Numeric ground truth: on-equation jet sampling, second-order prolongation
// of contact transforms by 2x2 linear solves, and end-to-end admissibility
// residuals.

#pragma once

#include "hypeq/transforms.hpp"

namespace hypeq {

struct SingularPushforwardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContactInconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Box {
    double lo = -2.0;
    double hi = 2.0;
};

// n jets with (x,y,u,ux,uy,uxx,uyy) uniform in the box and uxy = f imposed;
// deterministic under the seed, with rejection of singular samples up to a
// retry cap.
std::vector<JetPoint2> sample_on_equation(const Expr& f, int n, Box box,
                                          std::uint64_t seed,
                                          const std::vector<Condition>& avoid,
                                          const VariableSpace& space);

struct Prolong2Result {
    double x, y, u, ux, uy;     // image first jet
    double uxx, uxy, uyy;       // image second jet
    double uxy_alt;             // the second, independent computation of uxy
};

Prolong2Result prolong2_numeric(const ContactTransform& phi, const JetPoint2& jet,
                                const VariableSpace& space,
                                double consistency_tol = 1e-9);

struct VerificationReport {
    int samples = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    bool passed = false;
    bool implicit_mode = false;  // residual against f~ o Phi in source coordinates
    int aborted = 0;             // jets lost to singular pushforwards
    std::vector<JetPoint2> failures;  // up to a handful of witnesses
};

VerificationReport check_admissible_numeric(const AdmissibleTransformation& t,
                                            int n, Box box, double tol,
                                            std::uint64_t seed,
                                            const VariableSpace& space,
                                            int jobs = 1);

}  // namespace hypeq
