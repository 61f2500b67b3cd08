#include "hypeq/wave_symmetry.hpp"

#include <map>

#include "hypeq/integrate.hpp"

namespace hypeq {

namespace {

Expr V(const char* n) { return Expr::variable(n); }

ResidualItem make_item(const std::string& name, const Expr& raw,
                       const SamplerConfig& cfg) {
    ResidualItem item;
    item.name = name;
    item.residual = normalize(raw);
    item.status = is_zero(item.residual, cfg);
    if (!item.status.proven_zero())
        item.max_numeric = max_abs_on_samples(item.residual, cfg);
    return item;
}

bool item_ok(const ResidualItem& item, double tol) {
    return item.status.proven_zero() ||
           (item.max_numeric.has_value() && *item.max_numeric < tol);
}

WaveSymmetryReport verify_one(const ContactTransform& phi,
                              const VariableSpace& space,
                              const SamplerConfig& config) {
    WaveSymmetryReport rep;
    SamplerConfig cfg = config;
    for (const Condition& c : phi.domain) cfg.avoid.push_back(c);
    auto d = [&](const Expr& e, const char* v) { return differentiate(e, v, space); };

    // separated shape: X = X(x,ux), Y = Y(y,uy), U = c u + U1(x,ux) + U2(y,uy)
    std::vector<std::pair<std::string, Expr>> shape = {
        {"X_y", d(phi.X, "y")},     {"X_u", d(phi.X, "u")},
        {"X_uy", d(phi.X, "uy")},   {"Y_x", d(phi.Y, "x")},
        {"Y_u", d(phi.Y, "u")},     {"Y_ux", d(phi.Y, "ux")},
        {"U_uu", d(d(phi.U, "u"), "u")},
        {"U_ux_u", d(d(phi.U, "u"), "x")},
        {"U_uy_u", d(d(phi.U, "u"), "y")},
        {"U_uux", d(d(phi.U, "u"), "ux")},
        {"U_uuy", d(d(phi.U, "u"), "uy")},
        {"U_x_y", d(d(phi.U, "x"), "y")},
        {"U_x_uy", d(d(phi.U, "x"), "uy")},
        {"U_ux_y", d(d(phi.U, "ux"), "y")},
        {"U_ux_uy", d(d(phi.U, "ux"), "uy")},
    };
    bool shape_ok = true;
    for (auto& [name, raw] : shape) {
        ResidualItem item = make_item(name, raw, cfg);
        shape_ok = shape_ok && item_ok(item, rep.numeric_tolerance);
        rep.shape_items.push_back(std::move(item));
    }
    if (!shape_ok) {
        rep.passed = false;
        return rep;
    }

    Expr c = normalize(d(phi.U, "u"));
    rep.c = c;
    // derivatives of the split parts: U1_* from the (x,ux) block of U
    Expr U1x = d(phi.U, "x");
    Expr U1ux = d(phi.U, "ux");
    Expr U2y = d(phi.U, "y");
    Expr U2uy = d(phi.U, "uy");

    std::vector<std::pair<std::string, Expr>> conds = {
        {"U1_ux - Ux*X_ux", U1ux - phi.Ux * d(phi.X, "ux")},
        {"c*ux + U1_x - Ux*X_x", c * V("ux") + U1x - phi.Ux * d(phi.X, "x")},
        {"U2_uy - Uy*Y_uy", U2uy - phi.Uy * d(phi.Y, "uy")},
        {"c*uy + U2_y - Uy*Y_y", c * V("uy") + U2y - phi.Uy * d(phi.Y, "y")},
    };
    rep.passed = true;
    for (auto& [name, raw] : conds) {
        ResidualItem item = make_item(name, raw, cfg);
        rep.passed = rep.passed && item_ok(item, rep.numeric_tolerance);
        rep.condition_items.push_back(std::move(item));
    }
    // the constant must actually be constant and nonzero
    for (const char* v : {"x", "y", "ux", "uy"}) {
        ResidualItem item = make_item(std::string("c_") + v, d(c, v), cfg);
        rep.passed = rep.passed && item_ok(item, rep.numeric_tolerance);
        rep.shape_items.push_back(std::move(item));
    }
    if (!is_zero(c, cfg).proven_nonzero()) rep.passed = false;
    return rep;
}

}  // namespace

WaveSymmetryReport verify_wave_symmetry(const ContactTransform& phi,
                                        const VariableSpace& space,
                                        const SamplerConfig& config) {
    WaveSymmetryReport direct = verify_one(phi, space, config);
    if (direct.passed) return direct;
    ContactTransform swapped = compose(phi, i0_transform(), space);
    WaveSymmetryReport alt = verify_one(swapped, space, config);
    if (alt.passed) {
        alt.used_swap = true;
        return alt;
    }
    return direct;
}

namespace {

// one side of the builder: returns (U_part, U_component) for the x side or
// the y side, where `base` = x|y, `jet` = ux|uy
std::pair<Expr, Expr> build_side(const Rational& c, const Expr& comp,
                                 const std::optional<Expr>& theta,
                                 const Expr& phi_free, const Rational& t0,
                                 const char* base, const char* jet,
                                 const VariableSpace& space,
                                 const SamplerConfig& config) {
    Expr d_jet = normalize(differentiate(comp, jet, space));
    ZeroStatus st = is_zero(d_jet, config);
    if (st.unknown())
        throw IntegrationFailureError(
            std::string("cannot decide the ") + base +
            "-branch: derivative with respect to " + jet + " is indeterminate");

    if (st.proven_zero()) {
        // point branch: the free slot is read as U_part(base) directly
        Expr u_part = phi_free;
        if (depends_on(u_part, "eta") || depends_on(u_part, jet))
            throw std::invalid_argument(
                "point-branch U part must depend on the base variable only");
        Expr comp_base = differentiate(comp, base, space);
        Expr u_comp = normalize(Expr::div(
            Expr::number(c) * Expr::variable(jet) +
                differentiate(u_part, base, space),
            comp_base));
        return {normalize(u_part), u_comp};
    }

    // contact branch: verify the supplied inverse, integrate the quadrature
    if (!theta)
        throw InverseMismatchError(std::string("missing inverse function for the ") +
                                   base + " side");
    Expr check = substitute(
        *theta, {{"tau", Expr::variable(base)}, {"eta", comp}}, space);
    if (!is_zero(normalize(check - Expr::variable(jet)), config).proven_zero())
        throw InverseMismatchError(std::string("inverse mismatch on the ") + base +
                                   " side");
    auto integral = integrate_definite(*theta, "tau", Expr::number(t0),
                                       Expr::variable(base), space);
    if (!integral)
        throw IntegrationFailureError(
            std::string("quadrature integrand for the ") + base +
            " side is outside the symbolic table");
    Expr with_value = substitute(*integral, {{"eta", comp}}, space);
    Expr phi_applied = substitute(phi_free, {{"eta", comp}}, space);
    Expr u_part =
        normalize(Expr::integer(-1) * Expr::number(c) * with_value + phi_applied);
    Expr u_comp = normalize(Expr::div(differentiate(u_part, jet, space), d_jet));
    return {u_part, u_comp};
}

}  // namespace

ContactTransform build_wave_symmetry(const WaveSymmetrySpec& spec,
                                     const VariableSpace& space,
                                     const SamplerConfig& config) {
    if (spec.c.is_zero()) throw std::invalid_argument("c must be nonzero");
    for (const auto& v : free_variables(spec.X))
        if (v != "x" && v != "ux")
            throw std::invalid_argument("X must be an expression in (x, ux)");
    for (const auto& v : free_variables(spec.Y))
        if (v != "y" && v != "uy")
            throw std::invalid_argument("Y must be an expression in (y, uy)");

    auto [u1, ux_comp] = build_side(spec.c, spec.X, spec.theta1, spec.phi1, spec.t0,
                                    "x", "ux", space, config);
    auto [u2, uy_comp] = build_side(spec.c, spec.Y, spec.theta2, spec.phi2, spec.t0,
                                    "y", "uy", space, config);

    ContactTransform phi;
    phi.X = normalize(spec.X);
    phi.Y = normalize(spec.Y);
    phi.U = normalize(Expr::number(spec.c) * V("u") + u1 + u2);
    phi.Ux = ux_comp;
    phi.Uy = uy_comp;
    return phi;
}

std::vector<ContactTransform> wave_discrete_generators() {
    ContactTransform swap = i0_transform();
    ContactTransform flip_x{parse("-x", standard_space()), V("y"), V("u"),
                            parse("-ux", standard_space()), V("uy"), {}, {}};
    ContactTransform flip_y{V("x"), parse("-y", standard_space()), V("u"),
                            V("ux"), parse("-uy", standard_space()), {}, {}};
    ContactTransform flip_u{V("x"), V("y"), parse("-u", standard_space()),
                            parse("-ux", standard_space()),
                            parse("-uy", standard_space()), {}, {}};
    return {swap, flip_x, flip_y, flip_u};
}

std::vector<ContactTransform> wave_discrete_catalog(const VariableSpace& space) {
    std::vector<ContactTransform> gens = wave_discrete_generators();
    std::vector<ContactTransform> catalog = {identity_contact()};
    std::map<std::string, size_t> seen = {{identity_contact().key(), 0}};
    // breadth-first closure under composition with the generators
    for (size_t i = 0; i < catalog.size(); ++i) {
        for (const ContactTransform& g : gens) {
            ContactTransform next = compose(g, catalog[i], space);
            std::string key = next.key();
            if (seen.emplace(key, catalog.size()).second)
                catalog.push_back(std::move(next));
        }
    }
    return catalog;
}

}  // namespace hypeq
