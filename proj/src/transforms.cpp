#include "hypeq/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "normal_form.hpp"

namespace hypeq {

namespace {

Expr V(const char* n) { return Expr::variable(n); }

std::map<std::string, Expr> swap_map() {
    return {{"x", V("y")},   {"y", V("x")},   {"ux", V("uy")},
            {"uy", V("ux")}, {"uxx", V("uyy")}, {"uyy", V("uxx")}};
}

bool vars_subset(const Expr& e, const std::vector<std::string>& allowed) {
    for (const auto& v : free_variables(e))
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
            return false;
    return true;
}

// substitution that auto-records nonvanishing conditions produced by
// normalization cancellations
Expr substitute_recording(const Expr& e, const std::map<std::string, Expr>& bindings,
                          std::vector<Condition>& sink) {
    NormalizeResult r = normalize_full(substitute_raw(e, bindings));
    for (const Expr& c : r.cancelled_nonzero) {
        bool dup = false;
        for (const Condition& existing : sink)
            if (structurally_equal(existing.expr, c)) dup = true;
        if (!dup) sink.push_back({c, CondKind::NonZero});
    }
    return r.expr;
}

}  // namespace

std::string ContactTransform::key() const {
    std::string out;
    for (const Expr& c : components()) {
        if (!out.empty()) out += "|";
        out += normalize(c).str();
    }
    return out;
}

ContactTransform identity_contact() {
    return ContactTransform{V("x"), V("y"), V("u"), V("ux"), V("uy"), {}, {}};
}

ContactTransform i0_transform() {
    return ContactTransform{V("y"), V("x"), V("u"), V("uy"), V("ux"), {}, {}};
}

ContactTransform prolong_point(const PointEquivalenceTransform& p,
                               const VariableSpace& space,
                               const SamplerConfig& config) {
    Expr X = normalize(p.X), Y = normalize(p.Y), U = normalize(p.U);
    if (!vars_subset(X, {"x"}))
        throw DegenerateTransformError("point transform: X must depend on x only");
    if (!vars_subset(Y, {"y"}))
        throw DegenerateTransformError("point transform: Y must depend on y only");
    if (!vars_subset(U, {"x", "y", "u"}))
        throw DegenerateTransformError("point transform: U must depend on (x,y,u)");

    Expr Xx = differentiate(X, "x", space);
    Expr Yy = differentiate(Y, "y", space);
    Expr Uu = differentiate(U, "u", space);
    SamplerConfig cfg = config.with_conditions(p.domain);
    ZeroStatus nd = is_zero(normalize(Xx * Yy * Uu), cfg);
    if (!nd.proven_nonzero())
        throw DegenerateTransformError(
            "point transform: X_x*Y_y*U_u not certified nonzero (" +
            std::string(zero_status_name(nd.kind)) + ")");

    std::vector<Condition> recorded = p.domain;
    NormalizeResult ux_full =
        normalize_full(Expr::div(differentiate(U, "x", space) + Uu * V("ux"), Xx));
    NormalizeResult uy_full =
        normalize_full(Expr::div(differentiate(U, "y", space) + Uu * V("uy"), Yy));
    for (const auto* nr : {&ux_full, &uy_full})
        for (const Expr& cond : nr->cancelled_nonzero) {
            bool dup = false;
            for (const Condition& existing : recorded)
                if (structurally_equal(existing.expr, cond)) dup = true;
            if (!dup) recorded.push_back({cond, CondKind::NonZero});
        }
    ContactTransform phi{X, Y, U, ux_full.expr, uy_full.expr, recorded, {}};
    if (p.swap) {
        auto sm = swap_map();
        phi.X = substitute(phi.X, sm, space);
        phi.Y = substitute(phi.Y, sm, space);
        phi.U = substitute(phi.U, sm, space);
        phi.Ux = substitute(phi.Ux, sm, space);
        phi.Uy = substitute(phi.Uy, sm, space);
        std::vector<Condition> dom;
        for (const Condition& c : phi.domain)
            dom.push_back({substitute(c.expr, sm, space), c.kind});
        phi.domain = dom;
    }
    return phi;
}

ContactCheckReport check_contact_condition(const ContactTransform& phi,
                                           const VariableSpace& space,
                                           const SamplerConfig& config) {
    ContactCheckReport report;
    SamplerConfig cfg = config;
    for (const Condition& c : phi.domain) cfg.avoid.push_back(c);

    auto dhat = [&](const Expr& e, Axis a) {
        return truncated_total_derivative(e, a, space);
    };
    std::vector<std::pair<std::string, Expr>> residuals = {
        {"Ux*X_ux + Uy*Y_ux - U_ux",
         phi.Ux * differentiate(phi.X, "ux", space) +
             phi.Uy * differentiate(phi.Y, "ux", space) -
             differentiate(phi.U, "ux", space)},
        {"Ux*X_uy + Uy*Y_uy - U_uy",
         phi.Ux * differentiate(phi.X, "uy", space) +
             phi.Uy * differentiate(phi.Y, "uy", space) -
             differentiate(phi.U, "uy", space)},
        {"Ux*DxX + Uy*DxY - DxU",
         phi.Ux * dhat(phi.X, Axis::X) + phi.Uy * dhat(phi.Y, Axis::X) -
             dhat(phi.U, Axis::X)},
        {"Ux*DyX + Uy*DyY - DyU",
         phi.Ux * dhat(phi.X, Axis::Y) + phi.Uy * dhat(phi.Y, Axis::Y) -
             dhat(phi.U, Axis::Y)},
    };

    report.passed = true;
    report.symbolically_exact = true;
    for (auto& [name, raw] : residuals) {
        ResidualItem item;
        item.name = name;
        item.residual = normalize(raw);
        item.status = is_zero(item.residual, cfg);
        if (!item.status.proven_zero())
            item.max_numeric = max_abs_on_samples(item.residual, cfg);
        bool ok = item.status.proven_zero() ||
                  (item.max_numeric.has_value() &&
                   *item.max_numeric < report.numeric_tolerance);
        report.passed = report.passed && ok;
        report.symbolically_exact =
            report.symbolically_exact && item.status.proven_zero();
        report.items.push_back(std::move(item));
    }
    return report;
}

namespace {

Expr det_recursive(const std::vector<std::vector<Expr>>& m,
                   std::vector<size_t> cols, size_t row) {
    if (cols.size() == 1) return m[row][cols[0]];
    Expr acc = Expr::zero();
    for (size_t i = 0; i < cols.size(); ++i) {
        std::vector<size_t> rest;
        for (size_t j = 0; j < cols.size(); ++j)
            if (j != i) rest.push_back(cols[j]);
        Expr minor = det_recursive(m, rest, row + 1);
        Expr term = m[row][cols[i]] * minor;
        acc = (i % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

}  // namespace

Expr jacobian_determinant(const ContactTransform& phi, const VariableSpace& space) {
    const char* vars[5] = {"x", "y", "u", "ux", "uy"};
    std::array<Expr, 5> comps = phi.components();
    std::vector<std::vector<Expr>> m(5, std::vector<Expr>(5));
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j)
            m[i][j] = differentiate(comps[i], vars[j], space);
    return normalize(det_recursive(m, {0, 1, 2, 3, 4}, 0));
}

ZeroStatus jacobian_nondegenerate(const ContactTransform& phi,
                                  const VariableSpace& space,
                                  const SamplerConfig& config) {
    SamplerConfig cfg = config;
    for (const Condition& c : phi.domain) cfg.avoid.push_back(c);
    return is_zero(jacobian_determinant(phi, space), cfg);
}

ContactTransform compose(const ContactTransform& second,
                         const ContactTransform& first,
                         const VariableSpace& space) {
    std::map<std::string, Expr> pull = {{"x", first.X},
                                        {"y", first.Y},
                                        {"u", first.U},
                                        {"ux", first.Ux},
                                        {"uy", first.Uy}};
    ContactTransform out;
    try {
        out.domain = first.domain;
        out.X = substitute_recording(second.X, pull, out.domain);
        out.Y = substitute_recording(second.Y, pull, out.domain);
        out.U = substitute_recording(second.U, pull, out.domain);
        out.Ux = substitute_recording(second.Ux, pull, out.domain);
        out.Uy = substitute_recording(second.Uy, pull, out.domain);
        for (const Condition& c : second.domain)
            out.domain.push_back({substitute(c.expr, pull, space), c.kind});
    } catch (const DivisionByZeroError& e) {
        throw DomainMismatchError(std::string("compose: ") + e.what());
    }
    // the composed domain must admit sample points at all
    SamplerConfig probe;
    probe.samples = 1;
    probe.avoid = out.domain;
    std::vector<std::string> vars = {"x", "y", "u", "ux", "uy"};
    if (!sample_point(vars, {}, probe, 1).has_value())
        throw DomainMismatchError("compose: no sample point satisfies the joint domain");
    return out;
}

// ---------------------------------------------------------------------------
// Inversion catalog

namespace {

bool certified_nonzero(const Expr& e, const VariableSpace& space,
                       const SamplerConfig& config) {
    (void)space;
    Expr n = normalize(e);
    if (n.is_number()) return !n.num().is_zero();
    return is_zero(n, config).proven_nonzero();
}

std::optional<InverseExpr> invert_rec(const Expr& e, const std::string& var,
                                      const Expr& target, const VariableSpace& space,
                                      const SamplerConfig& config);

// affine / Moebius / depressed cubic recognized on the rational normal form
std::optional<InverseExpr> invert_ratform(const Expr& e, const std::string& var,
                                          const Expr& target,
                                          const VariableSpace& space,
                                          const SamplerConfig& config) {
    auto coeffs = nf::rational_coefficients(e, var);
    if (!coeffs) return std::nullopt;
    auto& [num, den] = *coeffs;
    if (num.size() > 4 || den.size() > 2) return std::nullopt;

    auto deg = [](const std::vector<Expr>& c) {
        size_t d = 0;
        for (size_t i = 0; i < c.size(); ++i)
            if (!is_normalized_zero(c[i])) d = i;
        return d;
    };
    size_t dn = deg(num), dd = deg(den);

    if (dn <= 1 && dd == 0) {
        // (a*var + b) / d
        Expr a = num.size() > 1 ? num[1] : Expr::zero();
        Expr b = num[0];
        Expr d = den[0];
        if (!certified_nonzero(a, space, config)) return std::nullopt;
        InverseExpr inv;
        inv.expr = normalize(Expr::div(target * d - b, a));
        return inv;
    }
    if (dn <= 1 && dd == 1) {
        // Moebius (a*var + b) / (c*var + d)
        Expr a = num.size() > 1 ? num[1] : Expr::zero();
        Expr b = num[0];
        Expr c = den[1];
        Expr d = den[0];
        if (!certified_nonzero(a * d - b * c, space, config)) return std::nullopt;
        InverseExpr inv;
        inv.expr = normalize(Expr::div(d * target - b, a - c * target));
        inv.conditions.push_back({normalize(a - c * target), CondKind::NonZero});
        return inv;
    }
    if (dn == 3 && dd == 0 && num.size() == 4 && is_normalized_zero(num[2])) {
        // depressed cubic c3*var^3 + c1*var + c0 with rational c3, c1, c1/c3 > 0
        Expr c3 = num[3], c1 = num[1], c0 = num[0];
        if (!c3.is_number() || !c1.is_number()) return std::nullopt;
        Rational p = c1.num() / c3.num();
        if (!(Rational(0) < p)) return std::nullopt;
        Expr q = normalize(Expr::div(target * den[0] - c0, c3));
        InverseExpr inv;
        inv.expr = Expr::call(Builtin::Cubroot, {Expr::number(p), q});
        return inv;
    }
    return std::nullopt;
}

std::optional<InverseExpr> invert_rec(const Expr& e, const std::string& var,
                                      const Expr& target, const VariableSpace& space,
                                      const SamplerConfig& config) {
    if (!depends_on(e, var)) return std::nullopt;
    if (e.kind() == NodeKind::Variable && e.name() == var) {
        return InverseExpr{target, {}};
    }
    switch (e.kind()) {
        case NodeKind::Add: {
            const Expr &a = e.kid(0), &b = e.kid(1);
            if (!depends_on(b, var)) return invert_rec(a, var, target - b, space, config);
            if (!depends_on(a, var)) return invert_rec(b, var, target - a, space, config);
            break;
        }
        case NodeKind::Sub: {
            const Expr &a = e.kid(0), &b = e.kid(1);
            if (!depends_on(b, var)) return invert_rec(a, var, target + b, space, config);
            if (!depends_on(a, var)) return invert_rec(b, var, a - target, space, config);
            break;
        }
        case NodeKind::Mul: {
            const Expr &a = e.kid(0), &b = e.kid(1);
            if (!depends_on(b, var) && certified_nonzero(b, space, config))
                return invert_rec(a, var, Expr::div(target, b), space, config);
            if (!depends_on(a, var) && certified_nonzero(a, space, config))
                return invert_rec(b, var, Expr::div(target, a), space, config);
            break;
        }
        case NodeKind::Div: {
            const Expr &a = e.kid(0), &b = e.kid(1);
            if (!depends_on(b, var) && certified_nonzero(b, space, config))
                return invert_rec(a, var, target * b, space, config);
            break;
        }
        case NodeKind::Pow: {
            const Rational& r = e.num();
            if (r.is_integer() && r.num().fits_longlong()) {
                long long k = r.num().to_longlong();
                if (k % 2 != 0) {
                    Rational recip = Rational(BigInt(1), BigInt(1)) / r;
                    return invert_rec(e.kid(0), var, Expr::pow(target, recip), space,
                                      config);
                }
            }
            break;
        }
        case NodeKind::Call: {
            if (e.builtin() == Builtin::Exp) {
                auto inner = invert_rec(e.kid(0), var, Expr::call(Builtin::Ln, target),
                                        space, config);
                if (!inner) return std::nullopt;
                inner->conditions.push_back({target, CondKind::Positive});
                return inner;
            }
            if (e.builtin() == Builtin::Ln) {
                return invert_rec(e.kid(0), var, Expr::call(Builtin::Exp, target),
                                  space, config);
            }
            if (e.builtin() == Builtin::Sqrt) {
                auto inner = invert_rec(e.kid(0), var,
                                        Expr::pow(target, Rational(2)), space, config);
                if (!inner) return std::nullopt;
                inner->conditions.push_back({target, CondKind::Positive});
                return inner;
            }
            break;
        }
        default: break;
    }
    return invert_ratform(e, var, target, space, config);
}

}  // namespace

std::optional<InverseExpr> invert_in_variable(const Expr& e, const std::string& var,
                                              const Expr& target,
                                              const VariableSpace& space,
                                              const SamplerConfig& config) {
    auto inv = invert_rec(e, var, target, space, config);
    if (inv) inv->expr = normalize(inv->expr);
    return inv;
}

std::optional<double> numeric_invert(const Expr& e, const std::string& var,
                                     double target, double lo, double hi,
                                     const NumericPoint& other_vars,
                                     const VariableSpace& space, double tol) {
    auto value_at = [&](double t) -> std::optional<double> {
        NumericPoint pt = other_vars;
        pt.vars[var] = t;
        try {
            return eval_numeric(e, pt) - target;
        } catch (const PoleError&) {
            return std::nullopt;
        }
    };
    auto flo = value_at(lo), fhi = value_at(hi);
    if (!flo || !fhi || (*flo > 0) == (*fhi > 0)) return std::nullopt;
    double a = lo, b = hi, fa = *flo;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (a + b);
        auto fm = value_at(mid);
        if (!fm) return std::nullopt;
        if ((*fm > 0) == (fa > 0)) {
            a = mid;
            fa = *fm;
        } else {
            b = mid;
        }
    }
    double t = 0.5 * (a + b);
    Expr de = differentiate(e, var, space);
    for (int i = 0; i < 8; ++i) {
        NumericPoint pt = other_vars;
        pt.vars[var] = t;
        double ft, dft;
        try {
            ft = eval_numeric(e, pt) - target;
            dft = eval_numeric(de, pt);
        } catch (const PoleError&) {
            break;
        }
        if (std::abs(dft) < 1e-14) break;
        double next = t - ft / dft;
        if (next < lo || next > hi) break;
        t = next;
        if (std::abs(ft) < tol) break;
    }
    auto fv = value_at(t);
    if (!fv || std::abs(*fv) > std::max(tol, 1e-9)) return std::nullopt;
    return t;
}

// ---------------------------------------------------------------------------

namespace {

struct ApplyCore {
    Expr pullback;
    std::optional<Expr> tilde;
    std::vector<Condition> tilde_domain;
};

ApplyCore apply_core(const Expr& X, const Expr& Y, const Expr& U, const Expr& f,
                     const std::vector<Condition>& domain,
                     const VariableSpace& space, const SamplerConfig& config) {
    Expr Xx = differentiate(X, "x", space);
    Expr Yy = differentiate(Y, "y", space);
    Expr Uu = differentiate(U, "u", space);
    Expr Uxd = differentiate(U, "x", space);
    Expr Uyd = differentiate(U, "y", space);

    ApplyCore out;
    out.pullback = normalize(Expr::div(
        Uu * f + differentiate(Uxd, "y", space) +
            differentiate(Uxd, "u", space) * V("uy") +
            differentiate(Uyd, "u", space) * V("ux") +
            differentiate(Uu, "u", space) * V("ux") * V("uy"),
        Xx * Yy));

    SamplerConfig cfg = config.with_conditions(domain);
    auto xinv = invert_in_variable(X, "x", V("tx"), space, cfg);
    auto yinv = invert_in_variable(Y, "y", V("ty"), space, cfg);
    auto uinv = invert_in_variable(U, "u", V("tu"), space, cfg);
    if (!xinv || !yinv || !uinv) return out;

    try {
        std::map<std::string, Expr> base = {{"x", xinv->expr}, {"y", yinv->expr}};
        Expr sub_u = substitute(uinv->expr, base, space);
        std::map<std::string, Expr> point = base;
        point["u"] = sub_u;
        Expr Uu_s = substitute(Uu, point, space);
        Expr sub_ux = normalize(
            Expr::div(V("tux") * substitute(Xx, base, space) -
                          substitute(Uxd, point, space),
                      Uu_s));
        Expr sub_uy = normalize(
            Expr::div(V("tuy") * substitute(Yy, base, space) -
                          substitute(Uyd, point, space),
                      Uu_s));
        std::map<std::string, Expr> full = point;
        full["ux"] = sub_ux;
        full["uy"] = sub_uy;
        out.tilde = substitute(out.pullback, full, space);
        for (auto* inv : {&xinv, &yinv, &uinv})
            for (const Condition& c : (*inv)->conditions)
                out.tilde_domain.push_back(c);
    } catch (const DivisionByZeroError&) {
        out.tilde = std::nullopt;
        out.tilde_domain.clear();
    }
    return out;
}

}  // namespace

PointApplyResult apply_point_equivalence(const PointEquivalenceTransform& p,
                                         const Expr& f, const VariableSpace& space,
                                         const SamplerConfig& config) {
    Expr Xx = differentiate(p.X, "x", space);
    Expr Yy = differentiate(p.Y, "y", space);
    Expr Uu = differentiate(p.U, "u", space);
    SamplerConfig cfg = config.with_conditions(p.domain);
    if (!is_zero(normalize(Xx * Yy * Uu), cfg).proven_nonzero())
        throw DegenerateTransformError(
            "apply_point_equivalence: transform not certified nondegenerate");

    Expr source = p.swap ? swap_xy(f, space) : f;
    ApplyCore core = apply_core(p.X, p.Y, p.U, source, p.domain, space, config);
    PointApplyResult out;
    out.pullback = p.swap ? swap_xy(core.pullback, space) : core.pullback;
    out.tilde = core.tilde;
    out.tilde_domain = core.tilde_domain;
    return out;
}

std::optional<PointEquivalenceTransform> invert_point(
    const PointEquivalenceTransform& p, const VariableSpace& space,
    const SamplerConfig& config) {
    SamplerConfig cfg = config.with_conditions(p.domain);
    auto xinv = invert_in_variable(p.X, "x", V("tx"), space, cfg);
    auto yinv = invert_in_variable(p.Y, "y", V("ty"), space, cfg);
    auto uinv = invert_in_variable(p.U, "u", V("tu"), space, cfg);
    if (!xinv || !yinv || !uinv) return std::nullopt;

    auto to_plain = [&](const Expr& e) {
        return substitute(e, {{"tx", V("x")}, {"ty", V("y")}, {"tu", V("u")}}, space);
    };
    Expr Xq = to_plain(xinv->expr);
    Expr Yq = to_plain(yinv->expr);
    Expr Uq = substitute(to_plain(uinv->expr), {{"x", Xq}, {"y", Yq}}, space);

    PointEquivalenceTransform q;
    q.swap = p.swap;
    if (p.swap) {
        // inverse of P o I0 is I0 o P^{-1} = (I0 o P^{-1} o I0) o I0
        q.X = substitute(Yq, {{"y", V("x")}}, space);
        q.Y = substitute(Xq, {{"x", V("y")}}, space);
        q.U = swap_xy(Uq, space);
    } else {
        q.X = Xq;
        q.Y = Yq;
        q.U = Uq;
    }
    for (auto* inv : {&xinv, &yinv, &uinv})
        for (const Condition& c : (*inv)->conditions)
            q.domain.push_back({to_plain(c.expr), c.kind});
    return q;
}

}  // namespace hypeq
