// Membership of u_xy = f(x,y,u,ux,uy) in the contact-invariant subclasses:
// affine-in-ux with its compatibility constraint (Hx), the mirrored family
// (Hy), the bilinear intersection (Hxy), and the complement (C1).

#pragma once

#include "hypeq/zero_test.hpp"

namespace hypeq {

enum class ClassLabel { Hxy, HxPrime, HyPrime, C1, Indeterminate };

const char* class_label_name(ClassLabel l);

struct MembershipCheck {
    enum class Outcome { Member, NotMember, NotAffine, Indeterminate };
    Outcome outcome = Outcome::Indeterminate;
    std::vector<std::pair<std::string, Expr>> coefficients;
    std::vector<std::pair<std::string, Expr>> residual_exprs;
    std::vector<ZeroStatus> residual_status;

    bool member() const { return outcome == Outcome::Member; }
    // NotMember with a nonzero witness, or a decisive shape failure
    bool decisively_fails() const {
        return outcome == Outcome::NotMember || outcome == Outcome::NotAffine;
    }
};

MembershipCheck check_hx(const Expr& f, const VariableSpace& space,
                         const SamplerConfig& config = {});
MembershipCheck check_hy(const Expr& f, const VariableSpace& space,
                         const SamplerConfig& config = {});
MembershipCheck check_hxy(const Expr& f, const VariableSpace& space,
                          const SamplerConfig& config = {});

struct ClassificationReport {
    ClassLabel label = ClassLabel::Indeterminate;
    MembershipCheck hx, hy;
    std::optional<MembershipCheck> hxy;  // run when both axis checks pass
    std::uint64_t seed = 0;
};

ClassificationReport classify(const Expr& f, const VariableSpace& space,
                              const SamplerConfig& config = {});

}  // namespace hypeq
