#include "doctest.h"
#include "hypeq/catalog.hpp"

using namespace hypeq;

namespace {
const VariableSpace& S = standard_space();
Expr P(const std::string& t) { return parse(t, S); }
}  // namespace

TEST_CASE("catalog entries and golden labels") {
    CHECK(catalog_entries().size() == 8);
    CHECK(is_normalized_zero(catalog_get("wave").f));
    CHECK(catalog_get("wave").expected == ClassLabel::Hxy);
    CHECK(is_normalized_zero(catalog_get("liouville").f - P("exp(u)")));
    CHECK(catalog_get("liouville").expected == ClassLabel::C1);
    CHECK(is_normalized_zero(catalog_get("log-wave").f - P("ux*uy")));
    CHECK(catalog_get("log-wave").darboux->kind == DarbouxDatum::Kind::Theta);
    CHECK(is_normalized_zero(catalog_get("log-wave").darboux->expr - P("exp(u)")));
    CHECK_THROWS_AS(catalog_get("nope"), UnknownNameError);

    for (const CatalogEntry& e : catalog_entries()) {
        SamplerConfig cfg;
        cfg.avoid = e.domain;
        ClassificationReport rep = classify(e.f, S, cfg);
        CHECK_MESSAGE(rep.label == e.expected, e.name);
    }
}

TEST_CASE("catalog darboux data reproduce their equations") {
    for (const CatalogEntry& e : catalog_entries()) {
        if (!e.darboux) continue;
        SamplerConfig cfg;
        cfg.avoid = e.domain;
        Expr f;
        switch (e.darboux->kind) {
            case DarbouxDatum::Kind::H: f = f_from_h(*e.darboux, S, cfg); break;
            case DarbouxDatum::Kind::G: f = f_from_g(*e.darboux, S, cfg); break;
            case DarbouxDatum::Kind::Theta:
                f = f_from_theta(*e.darboux, S, cfg);
                break;
        }
        CHECK_MESSAGE(is_normalized_zero(f - e.f), e.name);
    }
}

TEST_CASE("template draws are deterministic and well formed") {
    auto a = point_transform_templates(42, 25);
    auto b = point_transform_templates(42, 25);
    REQUIRE(a.size() == 25);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(structurally_equal(a[i].X, b[i].X));
        CHECK(structurally_equal(a[i].Y, b[i].Y));
        CHECK(structurally_equal(a[i].U, b[i].U));
    }
    CHECK(point_transform_templates(7, 0).empty());
    CHECK_FALSE(structurally_equal(point_transform_templates(1, 1)[0].U,
                                   point_transform_templates(2, 1)[0].U));
}

TEST_CASE("every template is nondegenerate and catalog-invertible") {
    auto templates = point_transform_templates(123, 40);
    for (const auto& p : templates) {
        SamplerConfig cfg;
        cfg.lo = -1.0;
        cfg.hi = 1.0;
        cfg.avoid = p.domain;
        // prolongation certifies X_x * Y_y * U_u nonzero on the box
        CHECK_NOTHROW(prolong_point(p, S, cfg));
        auto inv = invert_point(p, S, cfg);
        CHECK_MESSAGE(inv.has_value(),
                      p.X.str() << " | " << p.Y.str() << " | " << p.U.str());
    }
}
