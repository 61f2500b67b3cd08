#include "doctest.h"
#include "hypeq/oracle.hpp"
#include "hypeq/catalog.hpp"
#include "hypeq/darboux.hpp"

#include <cmath>

using namespace hypeq;

namespace {
const VariableSpace& S = standard_space();
Expr P(const std::string& t) { return parse(t, S); }
}  // namespace

TEST_CASE("on-equation sampling") {
    std::vector<JetPoint2> wave = sample_on_equation(P("0"), 50, Box{}, 1, {}, S);
    CHECK(wave.size() == 50);
    for (const JetPoint2& j : wave) CHECK(j.uxy == 0.0);

    std::vector<JetPoint2> quad = sample_on_equation(P("ux^2"), 50, Box{}, 1, {}, S);
    for (const JetPoint2& j : quad) CHECK(j.uxy == doctest::Approx(j.ux * j.ux));

    // deterministic under the seed
    std::vector<JetPoint2> again = sample_on_equation(P("ux^2"), 50, Box{}, 1, {}, S);
    for (size_t i = 0; i < 50; ++i) CHECK(quad[i].x == again[i].x);

    // poles are rejected and resampled
    std::vector<JetPoint2> inv =
        sample_on_equation(P("1/ux"), 50, Box{}, 1, {{P("ux"), CondKind::NonZero}}, S);
    for (const JetPoint2& j : inv) CHECK(std::abs(j.ux) > 1e-4);
}

TEST_CASE("numeric prolongation on model maps") {
    JetPoint2 j{0.3, -0.7, 0.2, 1.4, -0.6, 1.0, 0.8, -0.3, true};

    Prolong2Result idr = prolong2_numeric(identity_contact(), j, S);
    CHECK(idr.uxx == doctest::Approx(j.uxx));
    CHECK(idr.uxy == doctest::Approx(j.uxy));
    CHECK(idr.uyy == doctest::Approx(j.uyy));

    // Legendre with uxx = 1: image u~_x~x~ = -1/uxx
    ContactTransform leg{P("ux"), P("y"), P("u-x*ux"), P("-x"), P("uy"),
                         {{P("ux"), CondKind::NonZero}},
                         {}};
    Prolong2Result lr = prolong2_numeric(leg, j, S);
    CHECK(lr.uxx == doctest::Approx(-1.0 / j.uxx));

    // prolonged scaling X = 2x: u~_x~x~ = uxx/4
    PointEquivalenceTransform sc{P("2*x"), P("y"), P("u"), false, {}};
    Prolong2Result sr = prolong2_numeric(prolong_point(sc, S), j, S);
    CHECK(sr.uxx == doctest::Approx(j.uxx / 4.0));

    // singular pushforward: Legendre needs uxx != 0 generically; a flat jet
    // in the ux direction makes the matrix singular
    JetPoint2 flat{0.3, -0.7, 0.2, 1.4, -0.6, 0.0, 0.0, 0.5, true};
    CHECK_THROWS_AS(prolong2_numeric(leg, flat, S), SingularPushforwardError);
}

TEST_CASE("admissibility oracle: worked example passes, mismatch fails") {
    DarbouxDatum h{DarbouxDatum::Kind::H, P("-1/ux-y"),
                   {{P("ux"), CondKind::NonZero}}};
    HyAdmissibleBuild b =
        build_hy_admissible(h, P("ups+tau/(eta+xi)"), P("-1/(eta+xi)"), S);
    VerificationReport good =
        check_admissible_numeric(b.transformation, 1000, Box{}, 1e-9, 42, S);
    CHECK(good.passed);
    CHECK(good.samples == 1000);
    CHECK(good.max_residual < 1e-9);

    // deliberately mismatched pair: f = ux^2 with the Legendre map to f~ = 0
    AdmissibleTransformation bad;
    bad.source_f = P("ux^2");
    bad.phi = ContactTransform{P("ux"), P("y"), P("u-x*ux"), P("-x"), P("uy"),
                               {{P("ux"), CondKind::NonZero}},
                               {}};
    bad.target_pullback = P("0");
    bad.target_tilde = P("0");
    VerificationReport fail =
        check_admissible_numeric(bad, 1000, Box{}, 1e-9, 42, S);
    CHECK_FALSE(fail.passed);
    CHECK(fail.max_residual > 0.1);
}

TEST_CASE("reports are reproducible and job-count independent") {
    PointEquivalenceTransform pe{P("2*x"), P("y"), P("exp(u)"), false, {}};
    AdmissibleTransformation t;
    t.phi = prolong_point(pe, S);
    t.source_f = P("sin(u)");
    t.target_pullback = induced_target(t.phi, t.source_f, S);
    VerificationReport a = check_admissible_numeric(t, 300, Box{}, 1e-9, 9, S, 1);
    VerificationReport b = check_admissible_numeric(t, 300, Box{}, 1e-9, 9, S, 4);
    CHECK(a.passed);
    CHECK(a.max_residual == b.max_residual);
    CHECK(a.mean_residual == b.mean_residual);
}

TEST_CASE("prolonged templates agree with the numeric second prolongation") {
    // the pushforward formula and the jet-level prolongation tell the same
    // story across template families and catalog equations
    auto templates = point_transform_templates(77, 3);
    const char* fs[] = {"0", "exp(u)", "ux*uy"};
    for (const auto& p : templates) {
        for (const char* fs_text : fs) {
            AdmissibleTransformation t;
            SamplerConfig cfg;
            cfg.avoid = p.domain;
            t.phi = prolong_point(p, S, cfg);
            t.source_f = P(fs_text);
            PointApplyResult applied = apply_point_equivalence(p, t.source_f, S, cfg);
            t.target_pullback = applied.pullback;
            VerificationReport rep =
                check_admissible_numeric(t, 1000, Box{}, 1e-9, 13, S);
            CHECK_MESSAGE(rep.passed, p.U.str() << " on " << fs_text
                                                << " max=" << rep.max_residual);
        }
    }
}

TEST_CASE("pullback mode and tilde mode agree on a point equivalence") {
    PointEquivalenceTransform pe{P("x"), P("y"), P("exp(u)"), false, {}};
    PointApplyResult applied = apply_point_equivalence(pe, P("ux*uy"), S);
    REQUIRE(applied.tilde.has_value());
    AdmissibleTransformation t;
    t.phi = prolong_point(pe, S);
    t.source_f = P("ux*uy");
    t.target_pullback = applied.pullback;
    VerificationReport implicit_mode =
        check_admissible_numeric(t, 400, Box{}, 1e-9, 3, S);
    CHECK(implicit_mode.passed);
    CHECK(implicit_mode.implicit_mode);
    t.target_tilde = *applied.tilde;
    VerificationReport tilde_mode =
        check_admissible_numeric(t, 400, Box{}, 1e-9, 3, S);
    CHECK(tilde_mode.passed);
    CHECK_FALSE(tilde_mode.implicit_mode);
}
