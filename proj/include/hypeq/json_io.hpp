// JSON bundles and report serialization (nlohmann::json).

#pragma once

#include "json.hpp"

#include "hypeq/catalog.hpp"
#include "hypeq/oracle.hpp"
#include "hypeq/wave_symmetry.hpp"

namespace hypeq {

using Json = nlohmann::ordered_json;

// domain entries: "expr" (nonzero) or "expr>0" (positive)
std::string condition_to_string(const Condition& c);
Condition condition_from_string(const std::string& text, const VariableSpace& space);
Json conditions_to_json(const std::vector<Condition>& cs);
std::vector<Condition> conditions_from_json(const Json& j, const VariableSpace& space);

Json point_to_json(const PointEquivalenceTransform& p);
Json contact_to_json(const ContactTransform& phi);

struct TransformBundle {
    bool is_point = false;
    PointEquivalenceTransform point;
    ContactTransform contact;
    std::optional<Expr> source_f;
    std::optional<Expr> target_tilde;
    std::optional<Expr> target_pullback;
};
TransformBundle bundle_from_json(const Json& j, const VariableSpace& space);
// contact view of a bundle (point bundles are prolonged)
ContactTransform bundle_contact(const TransformBundle& b, const VariableSpace& space,
                                const SamplerConfig& config = {});

Json darboux_datum_to_json(const DarbouxDatum& d);
DarbouxDatum darboux_datum_from_json(const Json& j, const VariableSpace& space);

Json zero_status_to_json(const ZeroStatus& st);
Json residual_items_to_json(const std::vector<ResidualItem>& items);
Json classification_to_json(const ClassificationReport& rep);
Json membership_to_json(const MembershipCheck& check);
Json contact_report_to_json(const ContactCheckReport& rep);
Json determining_to_json(const DeterminingReport& rep);
Json wave_report_to_json(const WaveSymmetryReport& rep);
Json jet_to_json(const JetPoint2& j);
Json verification_to_json(const VerificationReport& rep);
Json catalog_entry_to_json(const CatalogEntry& e);

}  // namespace hypeq
