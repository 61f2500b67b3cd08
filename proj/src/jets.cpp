#include "hypeq/jets.hpp"

#include <stdexcept>

namespace hypeq {

NumericPoint JetPoint2::as_point() const {
    NumericPoint pt;
    pt.vars = {{"x", x},   {"y", y},     {"u", u},     {"ux", ux},
               {"uy", uy}, {"uxx", uxx}, {"uxy", uxy}, {"uyy", uyy}};
    return pt;
}

Expr truncated_total_derivative(const Expr& e, Axis axis,
                                const VariableSpace& space) {
    const char* base = axis == Axis::X ? "x" : "y";
    const char* jet = axis == Axis::X ? "ux" : "uy";
    return differentiate(e, base, space) +
           Expr::variable(jet) * differentiate(e, "u", space);
}

Expr total_derivative2(const Expr& e, Axis axis, const VariableSpace& space) {
    for (const char* second : {"uxx", "uxy", "uyy"}) {
        if (depends_on(e, second))
            throw std::invalid_argument(
                "total_derivative2: expression already depends on second jet "
                "variable " +
                std::string(second));
    }
    Expr d = truncated_total_derivative(e, axis, space);
    if (axis == Axis::X) {
        d = d + Expr::variable("uxx") * differentiate(e, "ux", space) +
            Expr::variable("uxy") * differentiate(e, "uy", space);
    } else {
        d = d + Expr::variable("uxy") * differentiate(e, "ux", space) +
            Expr::variable("uyy") * differentiate(e, "uy", space);
    }
    return d;
}

Expr characteristic_apply(const Expr& e, const Expr& f, CharacteristicOp which,
                          const VariableSpace& space) {
    switch (which) {
        case CharacteristicOp::DUx: return differentiate(e, "ux", space);
        case CharacteristicOp::DUy: return differentiate(e, "uy", space);
        case CharacteristicOp::DxHatPlusFDuy:
            return truncated_total_derivative(e, Axis::X, space) +
                   f * differentiate(e, "uy", space);
        case CharacteristicOp::DyHatPlusFDux:
            return truncated_total_derivative(e, Axis::Y, space) +
                   f * differentiate(e, "ux", space);
    }
    throw std::logic_error("unreachable characteristic op");
}

}  // namespace hypeq
