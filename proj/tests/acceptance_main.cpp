// Acceptance suite: one line per criterion, exit code = number of failures.
//
// Criteria are pinned here with their stated tolerances; nothing defers to
// later configuration.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "hypeq/catalog.hpp"
#include "hypeq/integrate.hpp"
#include "hypeq/json_io.hpp"
#include "hypeq/oracle.hpp"
#include "hypeq/wave_symmetry.hpp"

using namespace hypeq;

namespace {

const VariableSpace& S = standard_space();
Expr P(const std::string& t) { return parse(t, S); }

struct Criterion {
    int id;
    std::string name;
    bool passed;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool membership_decisive(const MembershipCheck& m) {
    if (m.outcome == MembershipCheck::Outcome::Indeterminate) return false;
    for (const ZeroStatus& st : m.residual_status)
        if (st.unknown()) return false;
    return true;
}

// --- criterion 1 ---------------------------------------------------------

Criterion catalog_classification() {
    Criterion c{1, "catalog classification with decisive residuals", true, ""};
    auto start = Clock::now();
    std::ostringstream detail;
    for (const CatalogEntry& e : catalog_entries()) {
        SamplerConfig cfg;
        cfg.avoid = e.domain;
        ClassificationReport rep = classify(e.f, S, cfg);
        bool ok = rep.label == e.expected && membership_decisive(rep.hx) &&
                  membership_decisive(rep.hy);
        if (!ok) {
            c.passed = false;
            detail << e.name << "->" << class_label_name(rep.label) << " ";
        }
    }
    double dt = seconds_since(start);
    if (dt >= 5.0) {
        c.passed = false;
        detail << "runtime " << dt << "s exceeds 5s";
    }
    std::ostringstream d;
    d << "8 equations in " << dt << "s";
    c.detail = c.passed ? d.str() : detail.str();
    return c;
}

// --- criterion 2 ---------------------------------------------------------

Criterion class_invariance() {
    Criterion c{2, "class invariance under 100 point-equivalence templates", true,
                ""};
    auto start = Clock::now();
    std::vector<PointEquivalenceTransform> templates =
        point_transform_templates(42, 100);
    int checked = 0, mismatches = 0, no_inverse = 0;
    std::ostringstream detail;
    for (const CatalogEntry& e : catalog_entries()) {
        SamplerConfig base_cfg;
        base_cfg.avoid = e.domain;
        ClassLabel expected = classify(e.f, S, base_cfg).label;
        for (size_t i = 0; i < templates.size(); ++i) {
            const PointEquivalenceTransform& p = templates[i];
            SamplerConfig cfg;
            cfg.avoid = p.domain;
            PointApplyResult r = apply_point_equivalence(p, e.f, S, cfg);
            if (!r.tilde) {
                ++no_inverse;
                detail << e.name << "/#" << i << ":no-closed-form ";
                continue;
            }
            SamplerConfig tcfg;
            for (const Condition& cond : r.tilde_domain)
                tcfg.avoid.push_back({untilde(cond.expr, S), cond.kind});
            for (const Condition& cond : e.domain) tcfg.avoid.push_back(cond);
            ClassLabel got = classify(untilde(*r.tilde, S), S, tcfg).label;
            ++checked;
            if (got != expected) {
                ++mismatches;
                if (mismatches <= 5)
                    detail << e.name << "/#" << i << ":"
                           << class_label_name(got) << " ";
            }
        }
    }
    double dt = seconds_since(start);
    c.passed = mismatches == 0 && no_inverse == 0 && checked == 800 && dt < 120.0;
    std::ostringstream d;
    d << checked << " transformed classifications, " << mismatches
      << " mismatches, " << no_inverse << " inversion failures, " << dt << "s";
    c.detail = d.str() + (c.passed ? "" : " | " + detail.str());
    return c;
}

// --- criterion 3 ---------------------------------------------------------

Criterion wave_orbit() {
    Criterion c{3, "wave orbit: theta templates reconstruct exactly", true, ""};
    const char* thetas[20] = {
        "u",          "2*u+1",         "u+x^2",        "u+x*y",
        "u+x^2*y",    "3*u+x+y",       "x*u",          "(x+1)*u+y",
        "x^2*u",      "y*u+x",         "(y+3)*u+x*y",  "exp(u)",
        "exp(2*u)",   "x*exp(u)",      "y*exp(u)+x",   "x*y*exp(u)",
        "x*y*exp(2*u)", "(x+1)*exp(u)", "(x+1)*(y+1)*exp(u)", "exp(u)+x"};
    std::ostringstream detail;
    for (const char* tt : thetas) {
        DarbouxDatum th{DarbouxDatum::Kind::Theta, P(tt), {}};
        Expr f = f_from_theta(th, S);
        if (classify(f, S).label != ClassLabel::Hxy) {
            c.passed = false;
            detail << tt << ":not-Hxy ";
            continue;
        }
        ThetaReconstruction rec = reconstruct_theta(f, S);
        if (rec.status != ThetaReconstruction::Status::Ok) {
            c.passed = false;
            detail << tt << ":" << rec.note << " ";
            continue;
        }
        DarbouxDatum back{DarbouxDatum::Kind::Theta, *rec.theta, {}};
        if (!is_normalized_zero(f_from_theta(back, S) - f)) {
            c.passed = false;
            detail << tt << ":roundtrip ";
        }
    }
    // the pinned example: ux*uy recovers exp(u) and the identity is exact
    ThetaReconstruction lw = reconstruct_theta(P("ux*uy"), S);
    bool exact = lw.status == ThetaReconstruction::Status::Ok &&
                 structurally_equal(*lw.theta, P("exp(u)")) &&
                 is_normalized_zero(
                     f_from_theta({DarbouxDatum::Kind::Theta, P("exp(u)"), {}}, S) -
                     P("ux*uy"));
    if (!exact) {
        c.passed = false;
        detail << "log-wave:theta!=exp(u) ";
    }
    c.detail = c.passed ? "20 templates + exact log-wave recovery" : detail.str();
    return c;
}

// --- criterion 4 ---------------------------------------------------------

Criterion worked_example() {
    Criterion c{4, "determining system + oracle on the worked transform", true, ""};
    std::ostringstream detail;
    DarbouxDatum h{DarbouxDatum::Kind::H, P("-1/ux-y"),
                   {{P("ux"), CondKind::NonZero}}};
    HyAdmissibleBuild b =
        build_hy_admissible(h, P("ups+tau/(eta+xi)"), P("-1/(eta+xi)"), S);
    if (!is_normalized_zero(b.transformation.source_f - P("ux^2"))) {
        c.passed = false;
        detail << "source!=ux^2 ";
    }
    if (!is_normalized_zero(b.transformation.target_pullback - P("-2*x*ux^3"))) {
        c.passed = false;
        detail << "pullback!=-2*x*ux^3 ";
    }
    if (!b.determining.passed || !b.determining.symbolically_exact) {
        c.passed = false;
        detail << "determining-system ";
    }
    VerificationReport num =
        check_admissible_numeric(b.transformation, 1000, Box{}, 1e-9, 42, S);
    if (!num.passed || num.samples != 1000) {
        c.passed = false;
        detail << "numeric max=" << num.max_residual << " ";
    }
    // the re-expressed target classifies HyPrime
    SamplerConfig cfg;
    cfg.avoid = {{P("x+y"), CondKind::NonZero}, {P("ux"), CondKind::NonZero}};
    ClassificationReport rep = classify(P("-2*ux/(x+y)"), S, cfg);
    if (rep.label != ClassLabel::HyPrime) {
        c.passed = false;
        detail << "target-label=" << class_label_name(rep.label) << " ";
    }
    std::ostringstream d;
    d << "max residual " << num.max_residual << " over " << num.samples
      << " jets; target classifies HyPrime";
    c.detail = c.passed ? d.str() : detail.str();
    return c;
}

// --- criterion 5 ---------------------------------------------------------

Criterion wave_symmetries() {
    Criterion c{5, "wave contact symmetries and the discrete table", true, ""};
    std::ostringstream detail;
    auto check_symmetry = [&](const ContactTransform& phi, const std::string& name) {
        WaveSymmetryReport rep = verify_wave_symmetry(phi, S);
        if (!rep.passed) {
            c.passed = false;
            detail << name << ":verify ";
            return;
        }
        AdmissibleTransformation t{P("0"), phi, P("0"), P("0")};
        VerificationReport num = check_admissible_numeric(t, 1000, Box{}, 1e-9, 42, S);
        if (!num.passed) {
            c.passed = false;
            detail << name << ":numeric(" << num.max_residual << ") ";
        }
    };

    check_symmetry(identity_contact(), "identity");
    ContactTransform leg{P("ux"), P("y"), P("u-x*ux"), P("-x"), P("uy"),
                         {{P("ux"), CondKind::NonZero}},
                         {}};
    check_symmetry(leg, "partial-legendre");
    WaveSymmetrySpec dbl;
    dbl.c = Rational(2);
    dbl.X = P("ux");
    dbl.Y = P("uy");
    dbl.phi1 = P("0");
    dbl.phi2 = P("0");
    dbl.theta1 = P("eta");
    dbl.theta2 = P("eta");
    check_symmetry(build_wave_symmetry(dbl, S), "double-legendre");

    std::vector<ContactTransform> catalog = wave_discrete_catalog(S);
    std::set<std::string> keys;
    for (const ContactTransform& t : catalog) keys.insert(t.key());
    if (catalog.size() != 16 || keys.size() != 16) {
        c.passed = false;
        detail << "catalog-size=" << catalog.size() << " ";
    }
    for (size_t i = 0; i < catalog.size(); ++i)
        check_symmetry(catalog[i], "discrete#" + std::to_string(i));

    // the stated group table: sixteen distinct tuples, each of order <= 2
    std::string id_key = identity_contact().key();
    int order_gt_2 = 0;
    std::ostringstream offenders;
    for (size_t i = 0; i < catalog.size(); ++i) {
        if (compose(catalog[i], catalog[i], S).key() != id_key) {
            ++order_gt_2;
            offenders << "#" << i << "(" << catalog[i].X.str() << ","
                      << catalog[i].Y.str() << ") ";
        }
    }
    if (order_gt_2 != 0) {
        c.passed = false;
        detail << order_gt_2
               << " elements have order 4, not <= 2 (permutation composed with "
                  "a single sign flip squares to the double flip): "
               << offenders.str();
    }
    c.detail = c.passed
                   ? "19 symmetries verified on 1000 jets each; 16-element table"
                   : detail.str();
    return c;
}

// --- criterion 6 ---------------------------------------------------------

Criterion gauge_invariance() {
    Criterion c{6, "gauge invariance of the h representation", true, ""};
    const char* gauges[10] = {"2*eta",        "eta+x^2",       "exp(eta)",
                              "eta^3+x*eta",  "eta/(4+x^2)",   "-eta",
                              "(1+x^2)*eta",  "eta+exp(x)",    "3*eta-x",
                              "sin(eta)+2*eta"};
    std::vector<DarbouxDatum> data = {
        {DarbouxDatum::Kind::H, P("-1/ux-y"), {{P("ux"), CondKind::NonZero}}},
        {DarbouxDatum::Kind::H, P("ux-u"), {}},
        {DarbouxDatum::Kind::H, P("exp(ux)+u"), {}},
    };
    std::ostringstream detail;
    for (const DarbouxDatum& h : data) {
        Expr f = f_from_h(h, S);
        for (const char* gt : gauges) {
            DarbouxDatum gh = gauge_h(h, P(gt), S);
            Expr fg = f_from_h(gh, S);
            if (!is_normalized_zero(fg - f)) {
                c.passed = false;
                detail << h.expr.str() << "/" << gt << " ";
            }
        }
    }
    c.detail = c.passed ? "10 gauges x 3 data, differences ProvenZero"
                        : detail.str();
    return c;
}

// --- criterion 7 ---------------------------------------------------------

Expr random_smooth(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, 11);
    std::uniform_int_distribution<int> leaf(0, 4);
    std::uniform_int_distribution<long long> coef(-3, 3);
    const char* vars[] = {"x", "y", "u", "ux", "uy"};
    if (depth == 0) {
        if (pick(rng) < 4) {
            long long k = coef(rng);
            return Expr::integer(k == 0 ? 1 : k);
        }
        return Expr::variable(vars[leaf(rng)]);
    }
    switch (pick(rng)) {
        case 0:
        case 1: return random_smooth(rng, depth - 1) + random_smooth(rng, depth - 1);
        case 2: return random_smooth(rng, depth - 1) - random_smooth(rng, depth - 1);
        case 3:
        case 4: return random_smooth(rng, depth - 1) * random_smooth(rng, depth - 1);
        case 5:
            return Expr::div(random_smooth(rng, depth - 1),
                             Expr::integer(2) +
                                 Expr::pow(Expr::variable(vars[leaf(rng)]),
                                           Rational(2)));
        case 6: return Expr::pow(random_smooth(rng, depth - 1), Rational(2));
        case 7: return Expr::call(Builtin::Sin, random_smooth(rng, depth - 1));
        case 8: return Expr::call(Builtin::Cos, random_smooth(rng, depth - 1));
        case 9: {
            Expr g = random_smooth(rng, depth - 1);
            return Expr::call(Builtin::Ln, Expr::one() + g * g);
        }
        case 10: {
            Expr g = random_smooth(rng, depth - 1);
            return Expr::call(Builtin::Sqrt, Expr::one() + g * g);
        }
        default: return Expr::call(Builtin::Exp, random_smooth(rng, 0));
    }
}

Criterion differentiation_engine() {
    Criterion c{7, "finite-difference agreement and normalize invariants", true, ""};
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const char* vars[] = {"x", "y", "u", "ux", "uy"};
    std::uniform_int_distribution<int> pv(0, 4);
    int fd_done = 0, fd_bad = 0, norm_done = 0, norm_bad = 0, idem_bad = 0;
    int tried = 0;
    std::ostringstream detail;
    while (fd_done < 500 && tried < 40000) {
        ++tried;
        Expr e = random_smooth(rng, 4);
        NumericPoint pt;
        for (const char* v : vars) pt.vars[v] = dist(rng);
        std::string var = vars[pv(rng)];
        double h = 1e-5;
        double sym, fp, fm;
        try {
            sym = eval_numeric(differentiate(e, var, S), pt);
            NumericPoint pp = pt, pm = pt;
            pp.vars[var] += h;
            pm.vars[var] -= h;
            fp = eval_numeric(e, pp);
            fm = eval_numeric(e, pm);
        } catch (const PoleError&) {
            continue;
        }
        double fd = (fp - fm) / (2 * h);
        if (std::abs(fd) > 1e8) continue;
        double denom = std::max({1.0, std::abs(sym), std::abs(fd)});
        if (std::abs(fd - sym) / denom >= 1e-6) {
            ++fd_bad;
            if (fd_bad <= 3) detail << "fd:" << e.str() << " ";
        }
        ++fd_done;

        if (norm_done < 500) {
            Expr n = normalize(e);
            if (!structurally_equal(n, normalize(n))) ++idem_bad;
            try {
                double a = eval_numeric(e, pt);
                double b = eval_numeric(n, pt);
                if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
                    ++norm_bad;
                ++norm_done;
            } catch (const PoleError&) {
            }
        }
    }
    c.passed = fd_done == 500 && fd_bad == 0 && norm_bad == 0 && idem_bad == 0 &&
               norm_done >= 400;
    std::ostringstream d;
    d << fd_done << " derivative checks (" << fd_bad << " bad), " << norm_done
      << " normalize checks (" << norm_bad << " eval, " << idem_bad
      << " idempotence)";
    c.detail = d.str() + (c.passed ? "" : " | " + detail.str());
    return c;
}

// --- criterion 8 ---------------------------------------------------------

Criterion negative_controls() {
    Criterion c{8, "negative controls fail as required", true, ""};
    std::ostringstream detail;
    ContactTransform tampered{P("ux"), P("y"), P("u-x*ux"), P("x"), P("uy"),
                              {{P("ux"), CondKind::NonZero}},
                              {}};
    ContactCheckReport rep = check_contact_condition(tampered, S);
    if (rep.passed) {
        c.passed = false;
        detail << "tampered-legendre-passed ";
    }
    bool decisive = false;
    for (const ResidualItem& item : rep.items)
        if (item.status.proven_nonzero()) decisive = true;
    if (!decisive) {
        c.passed = false;
        detail << "tampered-legendre-not-decisive ";
    }

    AdmissibleTransformation bad;
    bad.source_f = P("ux^2");
    bad.phi = ContactTransform{P("ux"), P("y"), P("u-x*ux"), P("-x"), P("uy"),
                               {{P("ux"), CondKind::NonZero}},
                               {}};
    bad.target_pullback = P("0");
    VerificationReport num = check_admissible_numeric(bad, 1000, Box{}, 1e-9, 42, S);
    if (num.passed || num.max_residual <= 0.1) {
        c.passed = false;
        detail << "mismatched-pair max=" << num.max_residual << " ";
    }
    std::ostringstream d;
    d << "tampered contact residual nonzero; mismatched pair max residual "
      << num.max_residual;
    c.detail = c.passed ? d.str() : detail.str();
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(catalog_classification());
    results.push_back(class_invariance());
    results.push_back(wave_orbit());
    results.push_back(worked_example());
    results.push_back(wave_symmetries());
    results.push_back(gauge_invariance());
    results.push_back(differentiation_engine());
    results.push_back(negative_controls());

    int failures = 0;
    for (const Criterion& c : results) {
        if (!c.passed) ++failures;
        std::cout << (c.passed ? "PASS" : "FAIL") << " criterion " << c.id << ": "
                  << c.name << " -- " << c.detail << "\n";
    }
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                                : "ACCEPTANCE: " + std::to_string(failures) +
                                      " criterion(s) failed")
              << "\n";
    return failures;
}
