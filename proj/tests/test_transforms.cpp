#include "doctest.h"
#include "hypeq/transforms.hpp"

#include <cmath>

using namespace hypeq;

namespace {
const VariableSpace& S = standard_space();
Expr P(const std::string& t) { return parse(t, S); }
bool zero(const Expr& e) { return is_normalized_zero(e); }
bool same(const Expr& a, const Expr& b) {
    return structurally_equal(normalize(a), normalize(b));
}

ContactTransform partial_legendre() {
    ContactTransform phi{P("ux"), P("y"), P("u-x*ux"), P("-x"), P("uy"), {}, {}};
    return phi;
}
}  // namespace

TEST_CASE("prolong identity and simple point maps") {
    PointEquivalenceTransform id{P("x"), P("y"), P("u"), false, {}};
    ContactTransform phi = prolong_point(id, S);
    CHECK(same(phi.Ux, P("ux")));
    CHECK(same(phi.Uy, P("uy")));

    PointEquivalenceTransform expu{P("x"), P("y"), P("exp(u)"), false, {}};
    ContactTransform pe = prolong_point(expu, S);
    CHECK(same(pe.Ux, P("exp(u)*ux")));
    CHECK(same(pe.Uy, P("exp(u)*uy")));

    PointEquivalenceTransform scale{P("2*x"), P("y"), P("u"), false, {}};
    ContactTransform ps = prolong_point(scale, S);
    CHECK(same(ps.Ux, P("ux/2")));
    CHECK(same(ps.Uy, P("uy")));

    PointEquivalenceTransform bad{P("x"), P("y"), P("x+y"), false, {}};
    CHECK_THROWS_AS(prolong_point(bad, S), DegenerateTransformError);
}

TEST_CASE("swap flag pre-composes the permutation") {
    PointEquivalenceTransform p{P("2*x"), P("y"), P("u"), true, {}};
    ContactTransform phi = prolong_point(p, S);
    CHECK(same(phi.X, P("2*y")));
    CHECK(same(phi.Y, P("x")));
    CHECK(same(phi.Ux, P("uy/2")));
    CHECK(same(phi.Uy, P("ux")));
    CHECK(check_contact_condition(phi, S).symbolically_exact);
}

TEST_CASE("contact condition: prolonged, Legendre, tampered") {
    PointEquivalenceTransform expu{P("x"), P("y"), P("exp(u)"), false, {}};
    CHECK(check_contact_condition(prolong_point(expu, S), S).symbolically_exact);

    ContactCheckReport good = check_contact_condition(partial_legendre(), S);
    CHECK(good.symbolically_exact);

    ContactTransform tam = partial_legendre();
    tam.Ux = P("x");  // sign flipped
    ContactCheckReport bad = check_contact_condition(tam, S);
    CHECK_FALSE(bad.passed);
    // the ux-split equation breaks with residual 2x
    CHECK(same(bad.items[0].residual, P("2*x")));
    CHECK(bad.items[0].status.proven_nonzero());
}

TEST_CASE("jacobian nondegeneracy") {
    CHECK(jacobian_nondegenerate(identity_contact(), S).proven_nonzero());
    CHECK(same(jacobian_determinant(identity_contact(), S), P("1")));

    ContactTransform degenerate{P("x"), P("y"), P("x+y"), P("1"), P("1"), {}, {}};
    CHECK(jacobian_nondegenerate(degenerate, S).proven_zero());

    ContactTransform leg = partial_legendre();
    leg.domain.push_back({P("ux"), CondKind::NonZero});
    CHECK(jacobian_nondegenerate(leg, S).proven_nonzero());
}

TEST_CASE("compose: identities, involution, Legendre inverse") {
    ContactTransform leg = partial_legendre();
    ContactTransform idc = identity_contact();
    ContactTransform li = compose(leg, idc, S);
    CHECK(li.key() == leg.key());

    ContactTransform ii = compose(i0_transform(), i0_transform(), S);
    CHECK(ii.key() == identity_contact().key());

    // inverse by exchanging the roles of (x, ux) and (X, Ux)
    ContactTransform leg_inv{P("-ux"), P("y"), P("u-x*ux"), P("x"), P("uy"), {}, {}};
    ContactTransform round = compose(leg_inv, leg, S);
    CHECK(round.key() == identity_contact().key());
    ContactTransform round2 = compose(leg, leg_inv, S);
    CHECK(round2.key() == identity_contact().key());

    // associativity on a catalog triple
    ContactTransform a = partial_legendre();
    ContactTransform b = i0_transform();
    ContactTransform c =
        prolong_point({P("2*x"), P("y"), P("u"), false, {}}, S);
    CHECK(compose(compose(a, b, S), c, S).key() == compose(a, compose(b, c, S), S).key());
}

TEST_CASE("apply_point_equivalence pullback and tilde forms") {
    PointEquivalenceTransform id{P("x"), P("y"), P("u"), false, {}};
    PointApplyResult r0 = apply_point_equivalence(id, P("sin(u)+ux*uy"), S);
    CHECK(same(r0.pullback, P("sin(u)+ux*uy")));
    REQUIRE(r0.tilde.has_value());
    CHECK(same(untilde(*r0.tilde, S), P("sin(u)+ux*uy")));

    PointEquivalenceTransform expu{P("x"), P("y"), P("exp(u)"), false, {}};
    PointApplyResult r1 = apply_point_equivalence(expu, P("0"), S);
    CHECK(same(r1.pullback, P("exp(u)*ux*uy")));
    REQUIRE(r1.tilde.has_value());
    CHECK(same(*r1.tilde, P("tux*tuy/tu")));

    PointApplyResult r2 = apply_point_equivalence(expu, P("ux*uy"), S);
    CHECK(same(r2.pullback, P("2*exp(u)*ux*uy")));
    REQUIRE(r2.tilde.has_value());
    CHECK(same(*r2.tilde, P("2*tux*tuy/tu")));
}

TEST_CASE("invert_point catalog") {
    PointEquivalenceTransform p{P("2*x"), P("y"), P("u"), false, {}};
    auto q = invert_point(p, S);
    REQUIRE(q.has_value());
    CHECK(same(q->X, P("x/2")));

    PointEquivalenceTransform pe{P("x"), P("y"), P("exp(u)"), false, {}};
    auto qe = invert_point(pe, S);
    REQUIRE(qe.has_value());
    CHECK(same(qe->U, P("ln(u)")));
    REQUIRE(qe->domain.size() == 1);
    CHECK(qe->domain[0].kind == CondKind::Positive);
    CHECK(same(qe->domain[0].expr, P("u")));

    PointEquivalenceTransform bad{P("x+sin(x)"), P("y"), P("u"), false, {}};
    CHECK_FALSE(invert_point(bad, S).has_value());

    // Moebius in u and cubic in x
    PointEquivalenceTransform pm{P("x^3+x"), P("y"), P("u/(1+u/4)"), false, {}};
    auto qm = invert_point(pm, S);
    REQUIRE(qm.has_value());
    NumericPoint pt;
    pt.vars = {{"x", 1.3 * 1.3 * 1.3 + 1.3}, {"y", 0.5}, {"u", 0.7 / (1 + 0.7 / 4)}};
    CHECK(eval_numeric(qm->X, pt) == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(eval_numeric(qm->U, pt) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("invert then compose is the identity up to normalize") {
    PointEquivalenceTransform cases[] = {
        {P("2*x+1"), P("3*y"), P("exp(u)"), false, {}},
        {P("x^3"), P("y"), P("2*u+x*y"), false, {}},
        {P("exp(2*x)"), P("y+1"), P("u*exp(x+y)"), false, {}},
    };
    for (const auto& p : cases) {
        auto q = invert_point(p, S);
        REQUIRE(q.has_value());
        ContactTransform pc = prolong_point(p, S, SamplerConfig{}.with_conditions(p.domain));
        SamplerConfig qcfg = SamplerConfig{}.with_conditions(q->domain);
        ContactTransform qc = prolong_point(*q, S, qcfg);
        ContactTransform round = compose(qc, pc, S);
        CHECK(round.key() == identity_contact().key());
    }
}

TEST_CASE("numeric inversion by bisection-newton") {
    NumericPoint others;
    auto t = numeric_invert(P("x^3+x"), "x", 2.0 + std::exp(1.0), -5.0, 5.0, others, S);
    // solve x^3+x = 2+e ~ 4.718..., root ~ 1.4845
    REQUIRE(t.has_value());
    double v = *t;
    CHECK(std::abs(v * v * v + v - (2.0 + std::exp(1.0))) < 1e-9);
    CHECK_FALSE(numeric_invert(P("x^2"), "x", -1.0, -2.0, 2.0, others, S).has_value());
}

TEST_CASE("prolonged transforms push jets consistently (numeric spot check)") {
    // u~_x~ = (U_x + U_u ux)/X_x evaluated numerically equals the chain rule
    PointEquivalenceTransform p{P("2*x+1"), P("y"), P("exp(u)"), false, {}};
    ContactTransform phi = prolong_point(p, S);
    NumericPoint pt;
    pt.vars = {{"x", 0.3}, {"y", -0.4}, {"u", 0.25}, {"ux", 1.1}, {"uy", -0.7}};
    double ux_img = eval_numeric(phi.Ux, pt);
    CHECK(ux_img == doctest::Approx(std::exp(0.25) * 1.1 / 2.0));
}
