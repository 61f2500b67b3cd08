#include "doctest.h"
#include "hypeq/jets.hpp"

#include <cmath>
#include <random>

using namespace hypeq;

namespace {
const VariableSpace& S = standard_space();
Expr P(const std::string& t) { return parse(t, S); }
bool zero(const Expr& e) { return is_normalized_zero(e); }
}  // namespace

TEST_CASE("truncated total derivatives") {
    CHECK(zero(truncated_total_derivative(P("-1/ux-y"), Axis::Y, S) - P("-1")));
    CHECK(zero(truncated_total_derivative(P("u"), Axis::X, S) - P("ux")));
    // d_x only touches the explicit x; ux is untouched by the truncation
    CHECK(zero(truncated_total_derivative(P("x*ux"), Axis::X, S) - P("ux")));
}

TEST_CASE("full total derivatives on the second jet") {
    CHECK(zero(total_derivative2(P("u-x*ux"), Axis::X, S) - P("-x*uxx")));
    CHECK(zero(total_derivative2(P("-1/ux-y"), Axis::Y, S) - P("uxy/ux^2-1")));
    CHECK(zero(total_derivative2(P("y"), Axis::X, S)));
    CHECK_THROWS_AS(total_derivative2(P("uxx"), Axis::X, S), std::invalid_argument);
}

TEST_CASE("truncated equals full on zeroth-order expressions") {
    for (const char* s : {"x*y+u", "exp(u)+sin(x)", "u^3/(2+y^2)"}) {
        Expr e = P(s);
        CHECK(zero(truncated_total_derivative(e, Axis::X, S) -
                   total_derivative2(e, Axis::X, S)));
        CHECK(zero(truncated_total_derivative(e, Axis::Y, S) -
                   total_derivative2(e, Axis::Y, S)));
    }
}

TEST_CASE("characteristic operators") {
    // (Dy^ + f d_ux) X = 0 for X = -1/ux - y on f = ux^2
    Expr r = characteristic_apply(P("-1/ux-y"), P("ux^2"),
                                  CharacteristicOp::DyHatPlusFDux, S);
    CHECK(zero(r));
    CHECK(zero(characteristic_apply(P("x+u"), P("ux^2"), CharacteristicOp::DUy, S)));
    CHECK(zero(characteristic_apply(P("u"), P("ux^2"),
                                    CharacteristicOp::DxHatPlusFDuy, S) -
               P("ux")));
}

TEST_CASE("total derivative matches finite differences along solution germs") {
    // Build a polynomial 2-jet germ u(x,y) = c0 + c1 dx + c2 dy + c3 dx^2/2
    // + c4 dx dy + c5 dy^2/2 around a base point and compare D_x e with the
    // x-derivative of e along the germ.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const char* exprs[] = {"u*ux+y", "sin(u)+ux*uy", "x*uy-u^2", "ux/(2+uy^2)"};
    for (const char* s : exprs) {
        Expr e = P(s);
        Expr dxe = total_derivative2(e, Axis::X, S);
        for (int trial = 0; trial < 25; ++trial) {
            double x0 = dist(rng), y0 = dist(rng);
            double c0 = dist(rng), c1 = dist(rng), c2 = dist(rng);
            double c3 = dist(rng), c4 = dist(rng), c5 = dist(rng);
            auto jet_at = [&](double dx) {
                NumericPoint pt;
                pt.vars["x"] = x0 + dx;
                pt.vars["y"] = y0;
                pt.vars["u"] = c0 + c1 * dx + 0.5 * c3 * dx * dx;
                pt.vars["ux"] = c1 + c3 * dx;
                pt.vars["uy"] = c2 + c4 * dx;
                pt.vars["uxx"] = c3;
                pt.vars["uxy"] = c4;
                pt.vars["uyy"] = c5;
                return pt;
            };
            double h = 1e-5;
            double sym, fp, fm;
            try {
                sym = eval_numeric(dxe, jet_at(0.0));
                fp = eval_numeric(e, jet_at(h));
                fm = eval_numeric(e, jet_at(-h));
            } catch (const PoleError&) {
                continue;
            }
            double fd = (fp - fm) / (2 * h);
            CHECK(std::abs(fd - sym) / std::max(1.0, std::abs(sym)) < 1e-6);
        }
    }
}
