// Built-in equations with their expected labels and Darboux data, plus the
// seeded point-equivalence template families used by invariance tests.

#pragma once

#include "hypeq/classifier.hpp"
#include "hypeq/darboux.hpp"

namespace hypeq {

struct CatalogEntry {
    std::string name;
    Expr f;
    ClassLabel expected = ClassLabel::Indeterminate;
    std::optional<DarbouxDatum> darboux;
    std::vector<Condition> domain;
    std::string note;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_get(const std::string& name);  // throws UnknownName

struct UnknownNameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Seeded draws from the closed template families
//   X, Y in {a t + b, t^3 + a t, exp(a t)};
//   U in {a u + b + p(x,y), exp(a u), u exp(a x + b y), u/(1 + c u)};
// all parameters dyadic rationals bounded away from zero, so every draw is
// nondegenerate on the sample box and admits a catalog inverse.
std::vector<PointEquivalenceTransform> point_transform_templates(std::uint64_t seed,
                                                                 int n);

}  // namespace hypeq
