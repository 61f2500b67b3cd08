#include "hypeq/json_io.hpp"

namespace hypeq {

std::string condition_to_string(const Condition& c) {
    std::string s = c.expr.str();
    if (c.kind == CondKind::Positive) s += ">0";
    return s;
}

Condition condition_from_string(const std::string& text,
                                const VariableSpace& space) {
    Condition c;
    if (text.size() > 2 && text.substr(text.size() - 2) == ">0") {
        c.kind = CondKind::Positive;
        c.expr = parse(text.substr(0, text.size() - 2), space);
    } else {
        c.kind = CondKind::NonZero;
        c.expr = parse(text, space);
    }
    return c;
}

Json conditions_to_json(const std::vector<Condition>& cs) {
    Json arr = Json::array();
    for (const Condition& c : cs) arr.push_back(condition_to_string(c));
    return arr;
}

std::vector<Condition> conditions_from_json(const Json& j,
                                            const VariableSpace& space) {
    std::vector<Condition> out;
    if (j.is_null()) return out;
    for (const auto& item : j)
        out.push_back(condition_from_string(item.get<std::string>(), space));
    return out;
}

Json point_to_json(const PointEquivalenceTransform& p) {
    Json j;
    j["kind"] = "point";
    j["components"] = {{"X", p.X.str()}, {"Y", p.Y.str()}, {"U", p.U.str()}};
    j["swap"] = p.swap;
    j["domain"] = conditions_to_json(p.domain);
    return j;
}

Json contact_to_json(const ContactTransform& phi) {
    Json j;
    j["kind"] = "contact";
    j["components"] = {{"X", phi.X.str()},
                       {"Y", phi.Y.str()},
                       {"U", phi.U.str()},
                       {"Ux", phi.Ux.str()},
                       {"Uy", phi.Uy.str()}};
    j["swap"] = false;
    j["domain"] = conditions_to_json(phi.domain);
    if (phi.inverse) {
        Json inv;
        inv["components"] = {{"X", (*phi.inverse)[0].str()},
                             {"Y", (*phi.inverse)[1].str()},
                             {"U", (*phi.inverse)[2].str()},
                             {"Ux", (*phi.inverse)[3].str()},
                             {"Uy", (*phi.inverse)[4].str()}};
        j["inverse"] = inv;
    }
    return j;
}

TransformBundle bundle_from_json(const Json& j, const VariableSpace& space) {
    TransformBundle b;
    std::string kind = j.at("kind").get<std::string>();
    const Json& comp = j.at("components");
    auto get = [&](const char* key) {
        return parse(comp.at(key).get<std::string>(), space);
    };
    if (kind == "point") {
        b.is_point = true;
        b.point.X = get("X");
        b.point.Y = get("Y");
        b.point.U = get("U");
        b.point.swap = j.value("swap", false);
        if (j.contains("domain"))
            b.point.domain = conditions_from_json(j["domain"], space);
    } else if (kind == "contact") {
        b.contact.X = get("X");
        b.contact.Y = get("Y");
        b.contact.U = get("U");
        b.contact.Ux = get("Ux");
        b.contact.Uy = get("Uy");
        if (j.value("swap", false))
            b.contact = compose(b.contact, i0_transform(), space);
        if (j.contains("domain"))
            b.contact.domain = conditions_from_json(j["domain"], space);
        if (j.contains("inverse")) {
            const Json& ic = j["inverse"].at("components");
            auto geti = [&](const char* key) {
                return parse(ic.at(key).get<std::string>(), space);
            };
            b.contact.inverse = {{geti("X"), geti("Y"), geti("U"), geti("Ux"),
                                  geti("Uy")}};
        }
    } else {
        throw std::invalid_argument("bundle kind must be 'point' or 'contact'");
    }
    if (j.contains("source_f"))
        b.source_f = parse(j["source_f"].get<std::string>(), space);
    if (j.contains("target"))
        b.target_tilde = parse(j["target"].get<std::string>(), space);
    if (j.contains("target_pullback"))
        b.target_pullback = parse(j["target_pullback"].get<std::string>(), space);
    return b;
}

ContactTransform bundle_contact(const TransformBundle& b, const VariableSpace& space,
                                const SamplerConfig& config) {
    if (b.is_point) return prolong_point(b.point, space, config);
    return b.contact;
}

Json darboux_datum_to_json(const DarbouxDatum& d) {
    Json j;
    j["kind"] = d.kind == DarbouxDatum::Kind::G   ? "g"
                : d.kind == DarbouxDatum::Kind::H ? "h"
                                                  : "theta";
    j["expr"] = d.expr.str();
    j["domain"] = conditions_to_json(d.domain);
    return j;
}

DarbouxDatum darboux_datum_from_json(const Json& j, const VariableSpace& space) {
    DarbouxDatum d;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "g")
        d.kind = DarbouxDatum::Kind::G;
    else if (kind == "h")
        d.kind = DarbouxDatum::Kind::H;
    else if (kind == "theta")
        d.kind = DarbouxDatum::Kind::Theta;
    else
        throw std::invalid_argument("darboux datum kind must be g, h or theta");
    d.expr = parse(j.at("expr").get<std::string>(), space);
    if (j.contains("domain")) d.domain = conditions_from_json(j["domain"], space);
    return d;
}

Json zero_status_to_json(const ZeroStatus& st) {
    Json j;
    j["status"] = zero_status_name(st.kind);
    j["seed"] = st.seed;
    if (st.witness) {
        Json w;
        for (const auto& [k, v] : st.witness->vars) w[k] = v;
        for (const auto& [k, v] : st.witness->free_atoms) w[k] = v;
        j["witness"] = w;
        j["witness_value"] = st.witness_value;
    }
    if (st.kind == ZeroStatus::Kind::Unknown) {
        j["valid_samples"] = st.valid_samples;
        j["max_abs"] = st.max_abs;
    }
    if (!st.note.empty()) j["note"] = st.note;
    return j;
}

Json residual_items_to_json(const std::vector<ResidualItem>& items) {
    Json arr = Json::array();
    for (const ResidualItem& item : items) {
        Json j;
        j["equation"] = item.name;
        j["residual"] = item.residual.str();
        j["zero_test"] = zero_status_to_json(item.status);
        if (item.max_numeric) j["max_numeric"] = *item.max_numeric;
        arr.push_back(j);
    }
    return arr;
}

Json membership_to_json(const MembershipCheck& check) {
    Json j;
    switch (check.outcome) {
        case MembershipCheck::Outcome::Member: j["outcome"] = "member"; break;
        case MembershipCheck::Outcome::NotMember: j["outcome"] = "not-member"; break;
        case MembershipCheck::Outcome::NotAffine: j["outcome"] = "not-affine"; break;
        case MembershipCheck::Outcome::Indeterminate:
            j["outcome"] = "indeterminate";
            break;
    }
    Json coeffs = Json::object();
    for (const auto& [name, e] : check.coefficients) coeffs[name] = e.str();
    j["coefficients"] = coeffs;
    Json residuals = Json::array();
    for (size_t i = 0; i < check.residual_exprs.size(); ++i) {
        Json r;
        r["constraint"] = check.residual_exprs[i].first;
        r["residual"] = check.residual_exprs[i].second.str();
        r["zero_test"] = zero_status_to_json(check.residual_status[i]);
        residuals.push_back(r);
    }
    j["residuals"] = residuals;
    return j;
}

Json classification_to_json(const ClassificationReport& rep) {
    Json j;
    j["label"] = class_label_name(rep.label);
    j["seed"] = rep.seed;
    j["Hx"] = membership_to_json(rep.hx);
    j["Hy"] = membership_to_json(rep.hy);
    if (rep.hxy) j["Hxy"] = membership_to_json(*rep.hxy);
    return j;
}

Json contact_report_to_json(const ContactCheckReport& rep) {
    Json j;
    j["passed"] = rep.passed;
    j["symbolically_exact"] = rep.symbolically_exact;
    j["residuals"] = residual_items_to_json(rep.items);
    return j;
}

Json determining_to_json(const DeterminingReport& rep) {
    Json j;
    j["passed"] = rep.passed;
    j["symbolically_exact"] = rep.symbolically_exact;
    j["used_swap"] = rep.used_swap;
    j["residuals"] = residual_items_to_json(rep.residuals);
    return j;
}

Json wave_report_to_json(const WaveSymmetryReport& rep) {
    Json j;
    j["passed"] = rep.passed;
    j["used_swap"] = rep.used_swap;
    if (rep.c) j["c"] = rep.c->str();
    j["shape"] = residual_items_to_json(rep.shape_items);
    j["conditions"] = residual_items_to_json(rep.condition_items);
    return j;
}

Json jet_to_json(const JetPoint2& jet) {
    return Json{{"x", jet.x},     {"y", jet.y},     {"u", jet.u},
                {"ux", jet.ux},   {"uy", jet.uy},   {"uxx", jet.uxx},
                {"uxy", jet.uxy}, {"uyy", jet.uyy}};
}

Json verification_to_json(const VerificationReport& rep) {
    Json j;
    j["passed"] = rep.passed;
    j["samples"] = rep.samples;
    j["aborted"] = rep.aborted;
    j["max_residual"] = rep.max_residual;
    j["mean_residual"] = rep.mean_residual;
    j["tol"] = rep.tol;
    j["seed"] = rep.seed;
    j["mode"] = rep.implicit_mode ? "pullback" : "tilde";
    Json failures = Json::array();
    for (const JetPoint2& jet : rep.failures) failures.push_back(jet_to_json(jet));
    j["failures"] = failures;
    return j;
}

Json catalog_entry_to_json(const CatalogEntry& e) {
    Json j;
    j["name"] = e.name;
    j["f"] = e.f.str();
    j["expected"] = class_label_name(e.expected);
    if (e.darboux) j["darboux"] = darboux_datum_to_json(*e.darboux);
    j["domain"] = conditions_to_json(e.domain);
    j["note"] = e.note;
    return j;
}

}  // namespace hypeq
