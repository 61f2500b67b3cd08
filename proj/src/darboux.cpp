#include "hypeq/darboux.hpp"

#include <cmath>

#include "hypeq/integrate.hpp"

namespace hypeq {

namespace {

Expr V(const char* n) { return Expr::variable(n); }

void require_kind(const DarbouxDatum& d, DarbouxDatum::Kind k, const char* what) {
    if (d.kind != k)
        throw std::invalid_argument(std::string("darboux datum is not of kind ") + what);
}

Expr certified_nondegenerate(const Expr& e, const std::vector<Condition>& domain,
                             const SamplerConfig& config, const char* what) {
    Expr n = normalize(e);
    SamplerConfig cfg = config.with_conditions(domain);
    ZeroStatus st = is_zero(n, cfg);
    if (!st.proven_nonzero())
        throw DegenerateDatumError(std::string(what) + " not certified nonzero (" +
                                   zero_status_name(st.kind) + ")");
    return n;
}

}  // namespace

Expr f_from_h(const DarbouxDatum& h, const VariableSpace& space,
              const SamplerConfig& config) {
    require_kind(h, DarbouxDatum::Kind::H, "h(x,y,u,ux)");
    if (depends_on(h.expr, "uy"))
        throw std::invalid_argument("h must not depend on uy");
    Expr hux = certified_nondegenerate(differentiate(h.expr, "ux", space), h.domain,
                                       config, "h_ux");
    Expr num = differentiate(h.expr, "y", space) +
               differentiate(h.expr, "u", space) * V("uy");
    return normalize(Expr::div(Expr::integer(-1) * num, hux));
}

Expr f_from_g(const DarbouxDatum& g, const VariableSpace& space,
              const SamplerConfig& config) {
    require_kind(g, DarbouxDatum::Kind::G, "g(x,y,u,uy)");
    if (depends_on(g.expr, "ux"))
        throw std::invalid_argument("g must not depend on ux");
    Expr guy = certified_nondegenerate(differentiate(g.expr, "uy", space), g.domain,
                                       config, "g_uy");
    Expr num = differentiate(g.expr, "x", space) +
               differentiate(g.expr, "u", space) * V("ux");
    return normalize(Expr::div(Expr::integer(-1) * num, guy));
}

Expr f_from_theta(const DarbouxDatum& theta, const VariableSpace& space,
                  const SamplerConfig& config) {
    require_kind(theta, DarbouxDatum::Kind::Theta, "theta(x,y,u)");
    for (const char* bad : {"ux", "uy", "uxx", "uxy", "uyy"})
        if (depends_on(theta.expr, bad))
            throw std::invalid_argument("theta must depend on (x,y,u) only");
    Expr tu = certified_nondegenerate(differentiate(theta.expr, "u", space),
                                      theta.domain, config, "theta_u");
    Expr tx = differentiate(theta.expr, "x", space);
    Expr ty = differentiate(theta.expr, "y", space);
    Expr num = differentiate(tx, "y", space) +
               differentiate(tx, "u", space) * V("uy") +
               differentiate(ty, "u", space) * V("ux") +
               differentiate(tu, "u", space) * V("ux") * V("uy");
    return normalize(Expr::div(num, tu));
}

DarbouxDatum gauge_h(const DarbouxDatum& h, const Expr& gauge,
                     const VariableSpace& space, const SamplerConfig& config) {
    require_kind(h, DarbouxDatum::Kind::H, "h(x,y,u,ux)");
    for (const auto& v : free_variables(gauge))
        if (v != "x" && v != "eta")
            throw std::invalid_argument("gauge must be an expression in (x, eta)");
    certified_nondegenerate(differentiate(gauge, "eta", space), {}, config, "H_eta");
    DarbouxDatum out;
    out.kind = DarbouxDatum::Kind::H;
    out.expr = substitute(gauge, {{"eta", h.expr}}, space);
    out.domain = h.domain;
    return out;
}

// ---------------------------------------------------------------------------
// theta reconstruction

namespace {

struct LineIntegrals {
    std::optional<Expr> w;
    std::string failed_leg;
};

LineIntegrals line_integrate_w(const Expr& f1, const Expr& f2, const Expr& f3,
                               const ThetaBasePoint& base,
                               const VariableSpace& space) {
    LineIntegrals out;
    Expr x0 = Expr::number(base.x0), y0 = Expr::number(base.y0),
         u0 = Expr::number(base.u0);
    // x-leg at (y0, u0), then y-leg at (x, u0), then u-leg at (x, y)
    std::optional<Expr> leg1, leg2, leg3;
    try {
        Expr i1 = substitute(f2, {{"x", V("tau")}, {"y", y0}, {"u", u0}}, space);
        leg1 = integrate_definite(i1, "tau", x0, V("x"), space);
        Expr i2 = substitute(f1, {{"y", V("tau")}, {"u", u0}}, space);
        leg2 = integrate_definite(i2, "tau", y0, V("y"), space);
        Expr i3 = substitute(f3, {{"u", V("tau")}}, space);
        leg3 = integrate_definite(i3, "tau", u0, V("u"), space);
    } catch (const DivisionByZeroError&) {
        out.failed_leg = "singular substitution at the base point";
        return out;
    }
    if (!leg1 || !leg2 || !leg3) {
        out.failed_leg = !leg1 ? "x-leg" : !leg2 ? "y-leg" : "u-leg";
        return out;
    }
    out.w = normalize(*leg1 + *leg2 + *leg3);
    return out;
}

// a number-literal argument of ln that is not positive marks a bad base point
bool has_singular_log(const Expr& e) {
    if (e.kind() == NodeKind::Call && e.builtin() == Builtin::Ln) {
        const Expr& a = e.kid(0);
        if (a.is_number() && !(Rational(0) < a.num())) return true;
    }
    for (size_t i = 0; i < e.nkids(); ++i)
        if (has_singular_log(e.kid(i))) return true;
    return false;
}

}  // namespace

ThetaReconstruction reconstruct_theta(const Expr& f, const VariableSpace& space,
                                      const SamplerConfig& config,
                                      std::optional<ThetaBasePoint> base_opt) {
    ThetaReconstruction out;
    out.hxy = check_hxy(f, space, config);
    if (!out.hxy.member()) {
        out.status = ThetaReconstruction::Status::NotInHxy;
        out.note = out.hxy.outcome == MembershipCheck::Outcome::Indeterminate
                       ? "membership in the bilinear subclass is indeterminate"
                       : "equation is not in the bilinear subclass";
        return out;
    }
    Expr f0 = out.hxy.coefficients[0].second;
    Expr f1 = out.hxy.coefficients[1].second;
    Expr f2 = out.hxy.coefficients[2].second;
    Expr f3 = out.hxy.coefficients[3].second;

    std::vector<ThetaBasePoint> candidates;
    if (base_opt) {
        candidates.push_back(*base_opt);
    } else {
        for (long long k : {0, 1, -1, 2}) {
            ThetaBasePoint b;
            b.x0 = Rational(k);
            b.y0 = Rational(k);
            b.u0 = Rational(0);
            candidates.push_back(b);
            b.u0 = Rational(1);
            candidates.push_back(b);
        }
    }

    std::string last_note;
    for (const ThetaBasePoint& base : candidates) {
        LineIntegrals li = line_integrate_w(f1, f2, f3, base, space);
        if (!li.w) {
            last_note = "line integration failed: " + li.failed_leg;
            continue;
        }
        if (has_singular_log(*li.w)) {
            last_note = "singular logarithm at the base point";
            continue;
        }
        Expr theta_u = exp_of(*li.w, space);
        auto P = integrate_table(theta_u, "u", space);
        if (!P) {
            last_note = "antiderivative of exp(w) in u is outside the table";
            continue;
        }
        Expr Pxy = differentiate(differentiate(*P, "x", space), "y", space);
        Expr rho = normalize(f0 * theta_u - Pxy);
        ZeroStatus ufree = is_zero(differentiate(rho, "u", space), config);
        if (!ufree.proven_zero()) {
            last_note =
                "phi equation has a u-dependent source; the representation "
                "formula does not close for this equation";
            continue;
        }
        Expr x0 = Expr::number(base.x0), y0 = Expr::number(base.y0);
        std::optional<Expr> inner, phi;
        try {
            Expr rho_st =
                substitute(rho, {{"x", V("xi")}, {"y", V("tau")}, {"u", V("ups")}},
                           space);
            inner = integrate_definite(rho_st, "tau", y0, V("y"), space);
            if (inner)
                phi = integrate_definite(*inner, "xi", x0, V("x"), space);
        } catch (const DivisionByZeroError&) {
            phi = std::nullopt;
        }
        if (!phi || has_singular_log(*phi)) {
            last_note = "phi double integral is outside the table";
            continue;
        }
        Expr theta = normalize(*P + *phi);

        DarbouxDatum datum;
        datum.kind = DarbouxDatum::Kind::Theta;
        datum.expr = theta;
        Expr rebuilt;
        try {
            rebuilt = f_from_theta(datum, space, config);
        } catch (const DegenerateDatumError&) {
            last_note = "reconstructed theta has degenerate theta_u";
            continue;
        }
        ZeroStatus verify = is_zero(normalize(rebuilt - f), config);
        out.verification = verify;
        if (!verify.proven_zero()) {
            last_note = "verification residual not proven zero";
            continue;
        }
        out.status = ThetaReconstruction::Status::Ok;
        out.theta = theta;
        out.base = base;
        out.note.clear();
        return out;
    }

    // numeric fallback: quadrature along the same integration path
    out.status = ThetaReconstruction::Status::IntegrationFailure;
    out.note = last_note.empty() ? "no admissible base point" : last_note;
    ThetaBasePoint nb = base_opt ? *base_opt : ThetaBasePoint{};
    double x0 = nb.x0.to_double(), y0 = nb.y0.to_double(), u0 = nb.u0.to_double();
    auto eval3 = [space](const Expr& e, double x, double y, double u) {
        NumericPoint pt;
        pt.vars = {{"x", x}, {"y", y}, {"u", u}};
        return eval_numeric(e, pt);
    };
    Expr f0c = f0, f1c = f1, f2c = f2, f3c = f3;
    auto wnum = [=](double x, double y, double u) {
        double w = simpson_adaptive(
            [&](double t) { return eval3(f2c, t, y0, u0); }, x0, x);
        w += simpson_adaptive([&](double t) { return eval3(f1c, x, t, u0); }, y0, y);
        w += simpson_adaptive([&](double t) { return eval3(f3c, x, y, t); }, u0, u);
        return w;
    };
    out.numeric_theta = [=](double x, double y, double u) {
        double P = simpson_adaptive(
            [&](double t) { return std::exp(wnum(x, y, t)); }, u0, u, 1e-9);
        double phi = simpson_adaptive(
            [&](double s) {
                return simpson_adaptive(
                    [&](double t) {
                        return eval3(f0c, s, t, u0) * std::exp(wnum(s, t, u0));
                    },
                    y0, y, 1e-8);
            },
            x0, x, 1e-8);
        return P + phi;
    };
    return out;
}

// ---------------------------------------------------------------------------

Expr induced_target(const ContactTransform& phi, const Expr& f,
                    const VariableSpace& space, const SamplerConfig& config) {
    SamplerConfig cfg = config;
    for (const Condition& c : phi.domain) cfg.avoid.push_back(c);
    Expr Xux = normalize(differentiate(phi.X, "ux", space));
    Expr Yuy = normalize(differentiate(phi.Y, "uy", space));
    ZeroStatus sx = is_zero(Xux, cfg);
    ZeroStatus sy = is_zero(Yuy, cfg);
    if (sx.unknown() || sy.unknown())
        throw BranchUndeterminedError(
            "induced_target: X_ux or Y_uy has indeterminate vanishing");

    if (sx.proven_nonzero()) {
        Expr value = normalize(
            Expr::div(differentiate(phi.Uy, "ux", space), Xux));
        Expr cross = sy.proven_zero()
                         ? normalize(differentiate(phi.Ux, "uy", space))
                         : normalize(differentiate(phi.Ux, "uy", space) -
                                     value * Yuy);
        ZeroStatus cs = is_zero(cross, cfg);
        if (cs.proven_nonzero())
            throw ContactConditionViolatedError(
                "induced_target: the two branch formulas disagree");
        return value;
    }
    if (sy.proven_nonzero()) {
        Expr value = normalize(
            Expr::div(differentiate(phi.Ux, "uy", space), Yuy));
        ZeroStatus cs = is_zero(differentiate(phi.Uy, "ux", space), cfg);
        if (cs.proven_nonzero())
            throw ContactConditionViolatedError(
                "induced_target: Uy_ux should vanish on the permuted branch");
        return value;
    }
    // point branch: eq for the pushforward of the arbitrary element
    Expr Uu = differentiate(phi.U, "u", space);
    Expr Ux = differentiate(phi.U, "x", space);
    Expr Uy = differentiate(phi.U, "y", space);
    Expr num = Uu * f + differentiate(Ux, "y", space) +
               differentiate(Ux, "u", space) * V("uy") +
               differentiate(Uy, "u", space) * V("ux") +
               differentiate(Uu, "u", space) * V("ux") * V("uy");
    return normalize(Expr::div(
        num, differentiate(phi.X, "x", space) * differentiate(phi.Y, "y", space)));
}

namespace {

DeterminingReport run_determining(const AdmissibleTransformation& t,
                                  const VariableSpace& space,
                                  const SamplerConfig& config) {
    DeterminingReport rep;
    const ContactTransform& p = t.phi;
    const Expr& f = t.source_f;
    const Expr& ft = t.target_pullback;
    SamplerConfig cfg = config;
    for (const Condition& c : p.domain) cfg.avoid.push_back(c);

    auto dhat = [&](const Expr& e, Axis a) {
        return truncated_total_derivative(e, a, space);
    };
    auto d = [&](const Expr& e, const char* v) { return differentiate(e, v, space); };

    std::vector<std::pair<std::string, Expr>> residuals = {
        {"DyX + f*X_ux", dhat(p.X, Axis::Y) + f * d(p.X, "ux")},
        {"X_uy", d(p.X, "uy")},
        {"Ux_uy - ft*Y_uy", d(p.Ux, "uy") - ft * d(p.Y, "uy")},
        {"DyUx + f*Ux_ux - ft*DyY",
         dhat(p.Ux, Axis::Y) + f * d(p.Ux, "ux") - ft * dhat(p.Y, Axis::Y)},
        {"DxY + f*Y_uy", dhat(p.Y, Axis::X) + f * d(p.Y, "uy")},
        {"Y_ux", d(p.Y, "ux")},
        {"Uy_ux - ft*X_ux", d(p.Uy, "ux") - ft * d(p.X, "ux")},
        {"DxUy + f*Uy_uy - ft*DxX",
         dhat(p.Uy, Axis::X) + f * d(p.Uy, "uy") - ft * dhat(p.X, Axis::X)},
    };

    rep.passed = true;
    rep.symbolically_exact = true;
    for (auto& [name, raw] : residuals) {
        ResidualItem item;
        item.name = name;
        item.residual = normalize(raw);
        item.status = is_zero(item.residual, cfg);
        if (!item.status.proven_zero())
            item.max_numeric = max_abs_on_samples(item.residual, cfg);
        bool ok = item.status.proven_zero() ||
                  (item.max_numeric.has_value() &&
                   *item.max_numeric < rep.numeric_tolerance);
        rep.passed = rep.passed && ok;
        rep.symbolically_exact = rep.symbolically_exact && item.status.proven_zero();
        rep.residuals.push_back(std::move(item));
    }

    ContactCheckReport contact = check_contact_condition(p, space, config);
    for (ResidualItem& item : contact.items) {
        rep.passed = rep.passed && (item.status.proven_zero() ||
                                    (item.max_numeric.has_value() &&
                                     *item.max_numeric < rep.numeric_tolerance));
        rep.symbolically_exact =
            rep.symbolically_exact && item.status.proven_zero();
        rep.residuals.push_back(std::move(item));
    }
    return rep;
}

}  // namespace

DeterminingReport verify_determining_system(const AdmissibleTransformation& t,
                                            const VariableSpace& space,
                                            const SamplerConfig& config) {
    DeterminingReport direct = run_determining(t, space, config);
    if (direct.passed) return direct;

    // the reduced system holds up to pre-composition with the permutation
    AdmissibleTransformation swapped;
    swapped.source_f = swap_xy(t.source_f, space);
    swapped.phi = compose(t.phi, i0_transform(), space);
    swapped.target_pullback = swap_xy(t.target_pullback, space);
    swapped.target_tilde = t.target_tilde;
    DeterminingReport alt = run_determining(swapped, space, config);
    if (alt.passed) {
        alt.used_swap = true;
        return alt;
    }
    return direct;
}

HyAdmissibleBuild build_hy_admissible(const DarbouxDatum& h, const Expr& upsilon,
                                      const Expr& hfun, const VariableSpace& space,
                                      const SamplerConfig& config) {
    require_kind(h, DarbouxDatum::Kind::H, "h(x,y,u,ux)");
    for (const auto& v : free_variables(upsilon))
        if (v != "tau" && v != "xi" && v != "ups" && v != "eta")
            throw std::invalid_argument("Upsilon must live in (tau,xi,ups,eta)");
    for (const auto& v : free_variables(hfun))
        if (v != "tau" && v != "xi" && v != "ups" && v != "eta")
            throw std::invalid_argument("hfun must live in (tau,xi,ups,eta)");

    Expr ups_u = differentiate(upsilon, "ups", space);
    certified_nondegenerate(ups_u, {}, config, "Upsilon_ups");

    // hfun inverts h with respect to ux: h(tau,xi,ups,hfun) = eta
    Expr hcheck = substitute(h.expr,
                             {{"x", V("tau")},
                              {"y", V("xi")},
                              {"u", V("ups")},
                              {"ux", hfun}},
                             space);
    if (!is_zero(normalize(hcheck - V("eta")), config).proven_zero())
        throw DegenerateDatumError("hfun does not invert h with respect to ux");

    // the contact condition forces Upsilon_tau + hfun*Upsilon_ups = 0
    Expr compat = normalize(differentiate(upsilon, "tau", space) + hfun * ups_u);
    ZeroStatus comp_st = is_zero(compat, config);
    if (!comp_st.proven_zero())
        throw ContactConditionViolatedError(
            "Upsilon_tau + hfun*Upsilon_ups does not vanish (" +
            std::string(zero_status_name(comp_st.kind)) + ")");

    std::map<std::string, Expr> psi = {
        {"tau", V("x")}, {"xi", V("y")}, {"ups", V("u")}, {"eta", h.expr}};
    ContactTransform phi;
    phi.X = normalize(h.expr);
    phi.Y = V("y");
    phi.U = substitute(upsilon, psi, space);
    phi.Ux = substitute(differentiate(upsilon, "eta", space), psi, space);
    phi.Uy = normalize(substitute(differentiate(upsilon, "xi", space), psi, space) +
                       V("uy") * substitute(ups_u, psi, space));
    phi.domain = h.domain;
    phi.domain.push_back(
        {normalize(differentiate(h.expr, "ux", space)), CondKind::NonZero});

    HyAdmissibleBuild out;
    out.transformation.source_f = f_from_h(h, space, config);
    out.transformation.phi = phi;
    out.transformation.target_pullback =
        induced_target(phi, out.transformation.source_f, space, config);
    out.contact = check_contact_condition(phi, space, config);
    out.jacobian = jacobian_nondegenerate(phi, space, config);
    out.determining = verify_determining_system(out.transformation, space, config);
    return out;
}

}  // namespace hypeq
