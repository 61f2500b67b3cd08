#include "hypeq/classifier.hpp"

namespace hypeq {

const char* class_label_name(ClassLabel l) {
    switch (l) {
        case ClassLabel::Hxy: return "Hxy";
        case ClassLabel::HxPrime: return "HxPrime";
        case ClassLabel::HyPrime: return "HyPrime";
        case ClassLabel::C1: return "C1";
        case ClassLabel::Indeterminate: return "Indeterminate";
    }
    return "?";
}

namespace {

// shared body for the two axis checks; split = ux for Hx, uy for Hy, and the
// constraint differentiates along the OTHER base direction
MembershipCheck check_axis(const Expr& f, const std::string& split,
                           const std::string& other_base,
                           const VariableSpace& space,
                           const SamplerConfig& config) {
    MembershipCheck out;
    AffineResult aff = affine_coefficients(f, {split}, space, config);
    if (aff.status == AffineResult::Status::NotAffine) {
        out.outcome = MembershipCheck::Outcome::NotAffine;
        return out;
    }
    if (aff.status == AffineResult::Status::Indeterminate) {
        out.outcome = MembershipCheck::Outcome::Indeterminate;
        return out;
    }
    Expr F0 = aff.coefficients[0], F1 = aff.coefficients[1];
    out.coefficients = {{"F0", F0}, {"F1", F1}};

    // F1_b + F0*F1_s = F0_u + F1*F0_s  with b = other base, s = the other jet
    std::string other_jet = split == "ux" ? "uy" : "ux";
    Expr residual = differentiate(F1, other_base, space) +
                    F0 * differentiate(F1, other_jet, space) -
                    differentiate(F0, "u", space) -
                    F1 * differentiate(F0, other_jet, space);
    ZeroStatus st = is_zero(residual, config);
    // keep reports small where the test already decided the expression is zero
    if (st.proven_zero()) residual = Expr::zero();
    out.residual_exprs = {{"compatibility", residual}};
    out.residual_status = {st};
    if (st.proven_zero())
        out.outcome = MembershipCheck::Outcome::Member;
    else if (st.proven_nonzero())
        out.outcome = MembershipCheck::Outcome::NotMember;
    else
        out.outcome = MembershipCheck::Outcome::Indeterminate;
    return out;
}

}  // namespace

MembershipCheck check_hx(const Expr& f, const VariableSpace& space,
                         const SamplerConfig& config) {
    return check_axis(f, "ux", "x", space, config);
}

MembershipCheck check_hy(const Expr& f, const VariableSpace& space,
                         const SamplerConfig& config) {
    return check_axis(f, "uy", "y", space, config);
}

MembershipCheck check_hxy(const Expr& f, const VariableSpace& space,
                          const SamplerConfig& config) {
    MembershipCheck out;
    AffineResult aff = affine_coefficients(f, {"ux", "uy"}, space, config);
    if (aff.status == AffineResult::Status::NotAffine) {
        out.outcome = MembershipCheck::Outcome::NotAffine;
        return out;
    }
    if (aff.status == AffineResult::Status::Indeterminate) {
        out.outcome = MembershipCheck::Outcome::Indeterminate;
        return out;
    }
    Expr f0 = aff.coefficients[0], f1 = aff.coefficients[1];
    Expr f2 = aff.coefficients[2], f3 = aff.coefficients[3];
    out.coefficients = {{"f0", f0}, {"f1", f1}, {"f2", f2}, {"f3", f3}};

    std::vector<std::pair<std::string, Expr>> residuals = {
        {"f3_y - f1_u",
         differentiate(f3, "y", space) - differentiate(f1, "u", space)},
        {"f3_x - f2_u",
         differentiate(f3, "x", space) - differentiate(f2, "u", space)},
        {"f2_y - f1_x",
         differentiate(f2, "y", space) - differentiate(f1, "x", space)},
        {"f1_x - (f0_u + f1*f2 - f3*f0)",
         differentiate(f1, "x", space) -
             (differentiate(f0, "u", space) + f1 * f2 - f3 * f0)},
    };
    bool all_zero = true, any_nonzero = false;
    for (auto& [name, raw] : residuals) {
        ZeroStatus st = is_zero(raw, config);
        out.residual_exprs.emplace_back(name, st.proven_zero() ? Expr::zero() : raw);
        out.residual_status.push_back(st);
        all_zero = all_zero && st.proven_zero();
        any_nonzero = any_nonzero || st.proven_nonzero();
    }
    out.outcome = all_zero ? MembershipCheck::Outcome::Member
                  : any_nonzero ? MembershipCheck::Outcome::NotMember
                                : MembershipCheck::Outcome::Indeterminate;
    return out;
}

ClassificationReport classify(const Expr& f, const VariableSpace& space,
                              const SamplerConfig& config) {
    ClassificationReport rep;
    rep.seed = config.seed;
    rep.hx = check_hx(f, space, config);
    rep.hy = check_hy(f, space, config);

    if (rep.hx.member() && rep.hy.member()) {
        rep.label = ClassLabel::Hxy;
        rep.hxy = check_hxy(f, space, config);
    } else if (rep.hx.member() && rep.hy.decisively_fails()) {
        rep.label = ClassLabel::HxPrime;
    } else if (rep.hy.member() && rep.hx.decisively_fails()) {
        rep.label = ClassLabel::HyPrime;
    } else if (rep.hx.decisively_fails() && rep.hy.decisively_fails()) {
        rep.label = ClassLabel::C1;
    } else {
        rep.label = ClassLabel::Indeterminate;
    }
    return rep;
}

}  // namespace hypeq
