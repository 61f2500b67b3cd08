#include "hypeq/catalog.hpp"

#include <random>

namespace hypeq {

namespace {

DarbouxDatum theta_datum(const char* text) {
    DarbouxDatum d;
    d.kind = DarbouxDatum::Kind::Theta;
    d.expr = parse(text, standard_space());
    return d;
}

DarbouxDatum h_datum(const char* text, std::vector<Condition> domain) {
    DarbouxDatum d;
    d.kind = DarbouxDatum::Kind::H;
    d.expr = parse(text, standard_space());
    d.domain = std::move(domain);
    return d;
}

DarbouxDatum g_datum(const char* text, std::vector<Condition> domain) {
    DarbouxDatum d;
    d.kind = DarbouxDatum::Kind::G;
    d.expr = parse(text, standard_space());
    d.domain = std::move(domain);
    return d;
}

std::vector<CatalogEntry> build_catalog() {
    const VariableSpace& S = standard_space();
    auto P = [&](const char* t) { return parse(t, S); };
    Condition ux_nz{P("ux"), CondKind::NonZero};
    Condition uy_nz{P("uy"), CondKind::NonZero};

    std::vector<CatalogEntry> entries;
    entries.push_back({"wave", P("0"), ClassLabel::Hxy, theta_datum("u"),
                       {},
                       "u_xy = 0; the reference point of the bilinear orbit"});
    entries.push_back({"liouville", P("exp(u)"), ClassLabel::C1, std::nullopt,
                       {},
                       "u_xy = e^u; integrable but outside both affine families"});
    entries.push_back({"sine-gordon", P("sin(u)"), ClassLabel::C1, std::nullopt,
                       {},
                       "u_xy = sin u (Bonnet)"});
    entries.push_back({"klein-gordon", P("u"), ClassLabel::C1, std::nullopt,
                       {},
                       "u_xy = u; the linear Klein-Gordon equation in light-cone "
                       "coordinates"});
    entries.push_back({"tzitzeica", P("exp(u)-exp(-2*u)"), ClassLabel::C1,
                       std::nullopt,
                       {},
                       "u_xy = e^u - e^{-2u}"});
    entries.push_back({"quasilinear-x", P("ux^2"), ClassLabel::HyPrime,
                       h_datum("-1/ux-y", {ux_nz}),
                       {ux_nz},
                       "u_xy = ux^2, written as D_y(-1/ux - y) = 0"});
    entries.push_back({"quasilinear-y", P("uy^2"), ClassLabel::HxPrime,
                       g_datum("-1/uy-x", {uy_nz}),
                       {uy_nz},
                       "u_xy = uy^2, the permuted mirror"});
    entries.push_back({"log-wave", P("ux*uy"), ClassLabel::Hxy,
                       theta_datum("exp(u)"),
                       {},
                       "u_xy = ux uy; linearized by theta = e^u"});
    return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = build_catalog();
    return entries;
}

const CatalogEntry& catalog_get(const std::string& name) {
    for (const CatalogEntry& e : catalog_entries())
        if (e.name == name) return e;
    throw UnknownNameError("unknown catalog entry '" + name + "'");
}

std::vector<PointEquivalenceTransform> point_transform_templates(std::uint64_t seed,
                                                                 int n) {
    const VariableSpace& S = standard_space();
    auto P = [&](const std::string& t) { return parse(t, S); };
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(8, 32);   // sixteenths in [1/2, 2]
    std::uniform_int_distribution<int> small(1, 4);   // sixteenths in [1/16, 1/4]
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> xf(0, 2), uf(0, 3), pf(0, 3);

    auto dyadic = [&](bool allow_negative) {
        int k = coef(rng);
        bool neg = allow_negative && coin(rng);
        return std::string(neg ? "-" : "") + std::to_string(k) + "/16";
    };

    auto axis = [&](const char* var) {
        switch (xf(rng)) {
            case 0: return dyadic(true) + "*" + var + "+" + dyadic(true);
            case 1: return std::string(var) + "^3+" + dyadic(false) + "*" + var;
            default: return "exp(" + dyadic(true) + "*" + var + ")";
        }
    };

    std::vector<PointEquivalenceTransform> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        PointEquivalenceTransform p;
        p.X = P(axis("x"));
        p.Y = P(axis("y"));
        switch (uf(rng)) {
            case 0: {
                std::string poly;
                switch (pf(rng)) {
                    case 0: poly = "0"; break;
                    case 1: poly = dyadic(true) + "*x*y"; break;
                    case 2: poly = dyadic(true) + "*(x+y)"; break;
                    default: poly = dyadic(true) + "*x^2*y"; break;
                }
                p.U = P(dyadic(true) + "*u+" + dyadic(true) + "+" + poly);
                break;
            }
            case 1: p.U = P("exp(" + dyadic(true) + "*u)"); break;
            case 2:
                p.U = P("u*exp(" + dyadic(true) + "*x+" + dyadic(true) + "*y)");
                break;
            default: {
                int k = small(rng);
                std::string c = std::string(coin(rng) ? "-" : "") +
                                std::to_string(k) + "/16";
                p.U = P("u/(1+" + c + "*u)");
                p.domain.push_back({P("1+" + c + "*u"), CondKind::NonZero});
                break;
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace hypeq
