// Jet-space differential operators: truncated and full total derivatives
// capped at the second jet, and the characteristic operator set used by the
// determining-system analysis.

#pragma once

#include "hypeq/expr.hpp"

namespace hypeq {

enum class Axis { X, Y };

struct JetPoint2 {
    double x = 0, y = 0, u = 0, ux = 0, uy = 0, uxx = 0, uxy = 0, uyy = 0;
    bool on_equation = false;  // uxy was imposed as f at construction

    NumericPoint as_point() const;
};

// D^x = d_x + ux d_u (and the y analogue); e may depend on (x,y,u,ux,uy).
Expr truncated_total_derivative(const Expr& e, Axis axis, const VariableSpace& space);

// D_x = d_x + ux d_u + uxx d_ux + uxy d_uy (and the y analogue); e must be a
// first-order differential function, the result lives on the second jet.
Expr total_derivative2(const Expr& e, Axis axis, const VariableSpace& space);

enum class CharacteristicOp { DUx, DUy, DxHatPlusFDuy, DyHatPlusFDux };

// Applies the selected member of (d_ux, d_uy, D^x + f d_uy, D^y + f d_ux).
Expr characteristic_apply(const Expr& e, const Expr& f, CharacteristicOp which,
                          const VariableSpace& space);

}  // namespace hypeq
