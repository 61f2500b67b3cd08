#include "hypeq/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "hypeq/integrate.hpp"
#include "hypeq/json_io.hpp"

namespace hypeq {

namespace {

constexpr int kPass = 0, kFail = 1, kIndeterminate = 2, kUsage = 3;

struct CommonOpts {
    std::string f;
    std::vector<std::string> domain;
    std::uint64_t seed = 42;
    double tol = 1e-9;
    int numeric = 1000;
    std::string box = "-2:2";
    int jobs = 1;
    bool json = false;
    std::string config_path;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HYPEQ_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
        }
    }
    return 42;
}

Box parse_box(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--box expects lo:hi");
    Box b;
    b.lo = std::stod(text.substr(0, colon));
    b.hi = std::stod(text.substr(colon + 1));
    if (!(b.lo < b.hi)) throw CLI::ValidationError("--box expects lo < hi");
    return b;
}

std::vector<Condition> parse_domain(const std::vector<std::string>& items,
                                    const VariableSpace& space) {
    std::vector<Condition> out;
    for (const std::string& item : items) {
        size_t start = 0;
        while (start <= item.size()) {
            size_t comma = item.find(',', start);
            std::string piece = item.substr(
                start, comma == std::string::npos ? std::string::npos
                                                  : comma - start);
            if (!piece.empty()) out.push_back(condition_from_string(piece, space));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

void apply_config(CommonOpts& opts, const CLI::App* cmd) {
    if (opts.config_path.empty()) return;
    std::ifstream in(opts.config_path);
    if (!in) throw CLI::ValidationError("cannot open config " + opts.config_path);
    Json cfg = Json::parse(in);
    auto unset = [&](const char* flag) {
        const CLI::Option* o = cmd->get_option_no_throw(flag);
        return o != nullptr && o->count() == 0;
    };
    if (cfg.contains("seed") && unset("--seed")) opts.seed = cfg["seed"];
    if (cfg.contains("tol") && unset("--tol")) opts.tol = cfg["tol"];
    if (cfg.contains("numeric") && unset("--numeric")) opts.numeric = cfg["numeric"];
    if (cfg.contains("box") && unset("--box")) opts.box = cfg["box"];
    if (cfg.contains("jobs") && unset("--jobs")) opts.jobs = cfg["jobs"];
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--domain", opts.domain,
                    "domain conditions, comma separated (expr or expr>0)");
    cmd->add_option("--seed", opts.seed, "sampler seed");
    cmd->add_option("--tol", opts.tol, "numeric tolerance");
    cmd->add_option("--numeric", opts.numeric, "number of oracle jets (0 disables)");
    cmd->add_option("--box", opts.box, "sampling box lo:hi");
    cmd->add_option("--jobs", opts.jobs, "parallel workers for oracle sampling");
    cmd->add_flag("--json", opts.json, "machine-readable output");
    cmd->add_option("--config", opts.config_path, "JSON config file (flags win)");
}

SamplerConfig sampler_for(const CommonOpts& opts, const VariableSpace& space) {
    SamplerConfig cfg;
    cfg.seed = opts.seed;
    Box b = parse_box(opts.box);
    cfg.lo = b.lo;
    cfg.hi = b.hi;
    cfg.avoid = parse_domain(opts.domain, space);
    return cfg;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open bundle " + path);
    return Json::parse(in);
}

void emit(std::ostream& out, bool as_json, const Json& payload,
          const std::vector<std::pair<std::string, std::string>>& table) {
    if (as_json) {
        out << payload.dump(2) << "\n";
        return;
    }
    size_t width = 0;
    for (const auto& [k, v] : table) width = std::max(width, k.size());
    for (const auto& [k, v] : table)
        out << k << std::string(width - k.size() + 2, ' ') << v << "\n";
}

std::string verdict(bool passed, bool decisive) {
    return passed ? "pass" : decisive ? "fail" : "indeterminate";
}

// ---------------------------------------------------------------------------

int run_classify(const CommonOpts& opts, std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    Expr f = parse(opts.f, S);
    ClassificationReport rep = classify(f, S, cfg);
    Json j = classification_to_json(rep);
    j["f"] = f.str();
    emit(out, opts.json, j,
         {{"f", f.str()},
          {"label", class_label_name(rep.label)},
          {"Hx", j["Hx"]["outcome"].get<std::string>()},
          {"Hy", j["Hy"]["outcome"].get<std::string>()},
          {"seed", std::to_string(rep.seed)}});
    return rep.label == ClassLabel::Indeterminate ? kIndeterminate : kPass;
}

int run_transform(const CommonOpts& opts, const std::string& xs,
                  const std::string& ys, const std::string& us, bool swap,
                  std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    PointEquivalenceTransform p{parse(xs, S), parse(ys, S), parse(us, S), swap,
                                cfg.avoid};
    Expr f = parse(opts.f, S);
    PointApplyResult r = apply_point_equivalence(p, f, S, cfg);
    Json j;
    j["f"] = f.str();
    j["transform"] = point_to_json(p);
    j["pullback"] = r.pullback.str();
    if (r.tilde) {
        j["target"] = r.tilde->str();
        Json dom = Json::array();
        for (const Condition& c : r.tilde_domain)
            dom.push_back(condition_to_string(c));
        j["target_domain"] = dom;
    }
    std::vector<std::pair<std::string, std::string>> table = {
        {"f", f.str()}, {"pullback", r.pullback.str()}};
    if (r.tilde) table.push_back({"target", r.tilde->str()});
    emit(out, opts.json, j, table);
    return kPass;
}

int run_prolong(const CommonOpts& opts, const std::string& xs,
                const std::string& ys, const std::string& us, bool swap,
                std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    PointEquivalenceTransform p{parse(xs, S), parse(ys, S), parse(us, S), swap,
                                cfg.avoid};
    ContactTransform phi = prolong_point(p, S, cfg);
    Json j = contact_to_json(phi);
    emit(out, opts.json, j,
         {{"X", phi.X.str()},
          {"Y", phi.Y.str()},
          {"U", phi.U.str()},
          {"Ux", phi.Ux.str()},
          {"Uy", phi.Uy.str()}});
    return kPass;
}

int run_compose(const CommonOpts& opts, const std::vector<std::string>& bundles,
                std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    if (bundles.size() < 2)
        throw CLI::ValidationError("compose expects at least two --bundle files");
    ContactTransform acc =
        bundle_contact(bundle_from_json(load_json(bundles[0]), S), S, cfg);
    for (size_t i = 1; i < bundles.size(); ++i) {
        ContactTransform next =
            bundle_contact(bundle_from_json(load_json(bundles[i]), S), S, cfg);
        acc = compose(next, acc, S);  // bundles listed in application order
    }
    Json j = contact_to_json(acc);
    emit(out, opts.json, j,
         {{"X", acc.X.str()},
          {"Y", acc.Y.str()},
          {"U", acc.U.str()},
          {"Ux", acc.Ux.str()},
          {"Uy", acc.Uy.str()}});
    return kPass;
}

int run_verify(const CommonOpts& opts, const std::string& bundle_path,
               const std::string& target, const std::string& target_pullback,
               std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    TransformBundle bundle = bundle_from_json(load_json(bundle_path), S);
    ContactTransform phi = bundle_contact(bundle, S, cfg);
    for (const Condition& c : cfg.avoid) phi.domain.push_back(c);

    Json j;
    ContactCheckReport contact = check_contact_condition(phi, S, cfg);
    ZeroStatus jac = jacobian_nondegenerate(phi, S, cfg);
    j["contact"] = contact_report_to_json(contact);
    j["jacobian"] = zero_status_to_json(jac);

    bool all_passed = contact.passed && jac.proven_nonzero();
    bool decisive_fail = !contact.passed || jac.proven_zero();

    std::optional<Expr> source = bundle.source_f;
    if (!opts.f.empty()) source = parse(opts.f, S);
    std::optional<AdmissibleTransformation> adm;
    if (source) {
        AdmissibleTransformation t;
        t.source_f = *source;
        t.phi = phi;
        if (!target_pullback.empty()) {
            t.target_pullback = parse(target_pullback, S);
        } else if (bundle.target_pullback) {
            t.target_pullback = *bundle.target_pullback;
        } else if (!target.empty() || bundle.target_tilde) {
            Expr tt = !target.empty() ? parse(target, S) : *bundle.target_tilde;
            t.target_tilde = tt;
            t.target_pullback = substitute(tt,
                                           {{"tx", phi.X},
                                            {"ty", phi.Y},
                                            {"tu", phi.U},
                                            {"tux", phi.Ux},
                                            {"tuy", phi.Uy}},
                                           S);
        } else {
            t.target_pullback = induced_target(phi, *source, S, cfg);
        }
        if (!target.empty()) t.target_tilde = parse(target, S);
        j["source_f"] = t.source_f.str();
        j["target_pullback"] = t.target_pullback.str();
        if (t.target_tilde) j["target"] = t.target_tilde->str();

        DeterminingReport det = verify_determining_system(t, S, cfg);
        j["determining"] = determining_to_json(det);
        all_passed = all_passed && det.passed;
        decisive_fail = decisive_fail || !det.passed;

        if (opts.numeric > 0) {
            VerificationReport num = check_admissible_numeric(
                t, opts.numeric, parse_box(opts.box), opts.tol, opts.seed, S,
                opts.jobs);
            j["numeric"] = verification_to_json(num);
            all_passed = all_passed && num.passed;
            decisive_fail = decisive_fail || !num.passed;
        }
        adm = t;
    }

    std::string v = verdict(all_passed, decisive_fail || all_passed);
    j["verdict"] = v;
    std::vector<std::pair<std::string, std::string>> table = {
        {"contact", contact.passed ? "pass" : "fail"},
        {"jacobian", zero_status_name(jac.kind)},
        {"verdict", v}};
    if (adm && j.contains("numeric"))
        table.insert(table.begin() + 2,
                     {"numeric max residual",
                      std::to_string(j["numeric"]["max_residual"].get<double>())});
    emit(out, opts.json, j, table);
    return all_passed ? kPass : decisive_fail ? kFail : kIndeterminate;
}

int run_reduce_to_wave(const CommonOpts& opts, std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    Expr f = parse(opts.f, S);
    ThetaReconstruction rec = reconstruct_theta(f, S, cfg);
    Json j;
    j["f"] = f.str();
    switch (rec.status) {
        case ThetaReconstruction::Status::Ok: {
            j["theta"] = rec.theta->str();
            j["verified"] = rec.verification && rec.verification->proven_zero();
            j["base_point"] = {rec.base.x0.to_string(), rec.base.y0.to_string(),
                               rec.base.u0.to_string()};
            emit(out, opts.json, j,
                 {{"theta", rec.theta->str()},
                  {"verified", j["verified"].get<bool>() ? "true" : "false"}});
            return kPass;
        }
        case ThetaReconstruction::Status::NotInHxy:
            j["error"] = "NotInHxy";
            j["note"] = rec.note;
            j["Hxy"] = membership_to_json(rec.hxy);
            emit(out, opts.json, j, {{"error", "NotInHxy"}, {"note", rec.note}});
            return kFail;
        case ThetaReconstruction::Status::IntegrationFailure:
            j["error"] = "IntegrationFailure";
            j["note"] = rec.note;
            j["numeric_fallback"] = true;
            emit(out, opts.json, j,
                 {{"error", "IntegrationFailure"}, {"note", rec.note}});
            return kIndeterminate;
    }
    return kUsage;
}

int run_darboux(const CommonOpts& opts, const std::string& from,
                const std::string& expr_text, const std::string& gauge_text,
                std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    DarbouxDatum d;
    d.expr = parse(expr_text, S);
    d.domain = cfg.avoid;
    Expr f;
    if (from == "h") {
        d.kind = DarbouxDatum::Kind::H;
        if (!gauge_text.empty()) d = gauge_h(d, parse(gauge_text, S), S, cfg);
        f = f_from_h(d, S, cfg);
    } else if (from == "g") {
        d.kind = DarbouxDatum::Kind::G;
        f = f_from_g(d, S, cfg);
    } else if (from == "theta") {
        d.kind = DarbouxDatum::Kind::Theta;
        f = f_from_theta(d, S, cfg);
    } else {
        throw CLI::ValidationError("--from must be h, g or theta");
    }
    ClassificationReport rep = classify(f, S, cfg);
    Json j;
    j["datum"] = d.expr.str();
    j["f"] = f.str();
    j["classification"] = classification_to_json(rep);
    emit(out, opts.json, j,
         {{"datum", d.expr.str()},
          {"f", f.str()},
          {"label", class_label_name(rep.label)}});
    return kPass;
}

int run_hy_admissible(const CommonOpts& opts, const std::string& h_text,
                      const std::string& upsilon_text, const std::string& hfun_text,
                      std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    DarbouxDatum h;
    h.kind = DarbouxDatum::Kind::H;
    h.expr = parse(h_text, S);
    h.domain = cfg.avoid;
    HyAdmissibleBuild build =
        build_hy_admissible(h, parse(upsilon_text, S), parse(hfun_text, S), S, cfg);

    Json j;
    j["bundle"] = contact_to_json(build.transformation.phi);
    j["source_f"] = build.transformation.source_f.str();
    j["target_pullback"] = build.transformation.target_pullback.str();
    j["contact"] = contact_report_to_json(build.contact);
    j["jacobian"] = zero_status_to_json(build.jacobian);
    j["determining"] = determining_to_json(build.determining);
    bool ok = build.contact.passed && build.determining.passed &&
              build.jacobian.proven_nonzero();
    if (opts.numeric > 0) {
        VerificationReport num = check_admissible_numeric(
            build.transformation, opts.numeric, parse_box(opts.box), opts.tol,
            opts.seed, S, opts.jobs);
        j["numeric"] = verification_to_json(num);
        ok = ok && num.passed;
    }
    j["verdict"] = ok ? "pass" : "fail";
    emit(out, opts.json, j,
         {{"source_f", build.transformation.source_f.str()},
          {"target_pullback", build.transformation.target_pullback.str()},
          {"verdict", ok ? "pass" : "fail"}});
    return ok ? kPass : kFail;
}

int run_wave_build(const CommonOpts& opts, const std::string& c_text,
                   const std::string& xs, const std::string& ys,
                   const std::string& phi1, const std::string& phi2,
                   const std::string& th1, const std::string& th2,
                   const std::string& t0, std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    WaveSymmetrySpec spec;
    spec.c = Rational::from_string(c_text);
    spec.X = parse(xs, S);
    spec.Y = parse(ys, S);
    spec.phi1 = phi1.empty() ? Expr::zero() : parse(phi1, S);
    spec.phi2 = phi2.empty() ? Expr::zero() : parse(phi2, S);
    if (!th1.empty()) spec.theta1 = parse(th1, S);
    if (!th2.empty()) spec.theta2 = parse(th2, S);
    spec.t0 = Rational::from_string(t0);
    ContactTransform phi = build_wave_symmetry(spec, S, cfg);
    WaveSymmetryReport rep = verify_wave_symmetry(phi, S, cfg);
    Json j;
    j["bundle"] = contact_to_json(phi);
    j["report"] = wave_report_to_json(rep);
    emit(out, opts.json, j,
         {{"X", phi.X.str()},
          {"Y", phi.Y.str()},
          {"U", phi.U.str()},
          {"Ux", phi.Ux.str()},
          {"Uy", phi.Uy.str()},
          {"verified", rep.passed ? "true" : "false"}});
    return rep.passed ? kPass : kFail;
}

int run_wave_verify(const CommonOpts& opts, const std::string& bundle_path,
                    std::ostream& out) {
    const VariableSpace& S = standard_space();
    SamplerConfig cfg = sampler_for(opts, S);
    TransformBundle bundle = bundle_from_json(load_json(bundle_path), S);
    ContactTransform phi = bundle_contact(bundle, S, cfg);
    WaveSymmetryReport rep = verify_wave_symmetry(phi, S, cfg);
    Json j = wave_report_to_json(rep);
    emit(out, opts.json, j,
         {{"passed", rep.passed ? "true" : "false"},
          {"used_swap", rep.used_swap ? "true" : "false"}});
    return rep.passed ? kPass : kFail;
}

int run_wave_catalog(const CommonOpts& opts, std::ostream& out) {
    const VariableSpace& S = standard_space();
    std::vector<ContactTransform> catalog = wave_discrete_catalog(S);
    Json arr = Json::array();
    std::vector<std::pair<std::string, std::string>> table;
    for (size_t i = 0; i < catalog.size(); ++i) {
        arr.push_back(contact_to_json(catalog[i]));
        table.push_back({"#" + std::to_string(i), catalog[i].key()});
    }
    Json j;
    j["count"] = catalog.size();
    j["elements"] = arr;
    emit(out, opts.json, j, table);
    return kPass;
}

int run_catalog(const CommonOpts& opts, const std::string& name,
                std::ostream& out) {
    Json j;
    std::vector<std::pair<std::string, std::string>> table;
    if (name.empty()) {
        Json arr = Json::array();
        for (const CatalogEntry& e : catalog_entries()) {
            arr.push_back(catalog_entry_to_json(e));
            table.push_back({e.name, e.f.str() + "  [" +
                                         class_label_name(e.expected) + "]"});
        }
        j["entries"] = arr;
    } else {
        const CatalogEntry& e = catalog_get(name);
        j = catalog_entry_to_json(e);
        table = {{"name", e.name},
                 {"f", e.f.str()},
                 {"expected", class_label_name(e.expected)},
                 {"note", e.note}};
    }
    emit(out, opts.json, j, table);
    return kPass;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"hypeq: classification and contact equivalence of quasilinear "
                 "hyperbolic equations u_xy = f(x,y,u,ux,uy)"};
    app.require_subcommand(1);

    CommonOpts opts;
    opts.seed = default_seed();

    std::string xs, ys, us, target, target_pullback, bundle_path;
    std::string from = "h", expr_text, gauge_text;
    std::string h_text, upsilon_text, hfun_text;
    std::string c_text = "1", phi1, phi2, th1, th2, t0 = "0";
    std::string catalog_name;
    std::vector<std::string> bundles;
    bool swap = false;

    CLI::App* classify_cmd = app.add_subcommand("classify", "label an equation");
    classify_cmd->add_option("--f", opts.f, "arbitrary element f")->required();
    add_common(classify_cmd, opts);

    CLI::App* transform_cmd =
        app.add_subcommand("transform", "apply a point equivalence to f");
    transform_cmd->add_option("--f", opts.f)->required();
    transform_cmd->add_option("--X", xs)->required();
    transform_cmd->add_option("--Y", ys)->required();
    transform_cmd->add_option("--U", us)->required();
    transform_cmd->add_flag("--swap", swap, "pre-compose the permutation");
    add_common(transform_cmd, opts);

    CLI::App* prolong_cmd =
        app.add_subcommand("prolong", "first-order prolongation of a point map");
    prolong_cmd->add_option("--X", xs)->required();
    prolong_cmd->add_option("--Y", ys)->required();
    prolong_cmd->add_option("--U", us)->required();
    prolong_cmd->add_flag("--swap", swap);
    add_common(prolong_cmd, opts);

    CLI::App* compose_cmd =
        app.add_subcommand("compose", "compose transform bundles (application order)");
    compose_cmd->add_option("--bundle", bundles, "bundle JSON files")->required();
    add_common(compose_cmd, opts);

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "contact condition, determining system and numeric oracle");
    verify_cmd->add_option("--bundle", bundle_path)->required();
    verify_cmd->add_option("--f", opts.f, "source arbitrary element");
    verify_cmd->add_option("--target", target, "target in tilde variables");
    verify_cmd->add_option("--target-pullback", target_pullback,
                           "target pullback in source variables");
    add_common(verify_cmd, opts);

    CLI::App* reduce_cmd =
        app.add_subcommand("reduce-to-wave", "reconstruct theta with D_xD_y theta = 0");
    reduce_cmd->add_option("--f", opts.f)->required();
    add_common(reduce_cmd, opts);

    CLI::App* darboux_cmd =
        app.add_subcommand("darboux", "arbitrary element from a Darboux datum");
    darboux_cmd->add_option("--from", from, "h, g or theta")->required();
    darboux_cmd->add_option("--expr", expr_text, "the datum expression")->required();
    darboux_cmd->add_option("--gauge", gauge_text,
                            "gauge H(x,eta) applied to an h datum");
    add_common(darboux_cmd, opts);

    CLI::App* hy_cmd = app.add_subcommand(
        "hy-admissible", "build the reparameterized contact transformation");
    hy_cmd->set_help_flag("--help", "print help");
    hy_cmd->add_option("--h", h_text)->required();
    hy_cmd->add_option("--upsilon", upsilon_text)->required();
    hy_cmd->add_option("--hfun", hfun_text)->required();
    add_common(hy_cmd, opts);

    CLI::App* wave_cmd = app.add_subcommand("wave-symmetry",
                                            "contact symmetries of u_xy = 0");
    wave_cmd->require_subcommand(1);
    CLI::App* wave_build = wave_cmd->add_subcommand("build");
    wave_build->add_option("--c", c_text, "constant multiplier of u");
    wave_build->add_option("--X", xs)->required();
    wave_build->add_option("--Y", ys)->required();
    wave_build->add_option("--phi1", phi1, "free function of eta (or of x)");
    wave_build->add_option("--phi2", phi2, "free function of eta (or of y)");
    wave_build->add_option("--theta1", th1, "inverse of X wrt ux, in (tau,eta)");
    wave_build->add_option("--theta2", th2, "inverse of Y wrt uy, in (tau,eta)");
    wave_build->add_option("--t0", t0, "quadrature base point");
    add_common(wave_build, opts);
    CLI::App* wave_verify = wave_cmd->add_subcommand("verify");
    wave_verify->add_option("--bundle", bundle_path)->required();
    add_common(wave_verify, opts);
    CLI::App* wave_catalog = wave_cmd->add_subcommand("catalog");
    add_common(wave_catalog, opts);

    CLI::App* catalog_cmd = app.add_subcommand("catalog", "built-in equations");
    catalog_cmd->add_option("name", catalog_name, "entry name");
    add_common(catalog_cmd, opts);

    std::vector<std::string> argv_storage = args;
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>("hypeq"));
    for (std::string& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        for (CLI::App* cmd :
             {classify_cmd, transform_cmd, prolong_cmd, compose_cmd, verify_cmd,
              reduce_cmd, darboux_cmd, hy_cmd, wave_build, wave_verify,
              wave_catalog, catalog_cmd})
            if (cmd->parsed()) apply_config(opts, cmd);

        if (classify_cmd->parsed()) return run_classify(opts, out);
        if (transform_cmd->parsed())
            return run_transform(opts, xs, ys, us, swap, out);
        if (prolong_cmd->parsed()) return run_prolong(opts, xs, ys, us, swap, out);
        if (compose_cmd->parsed()) return run_compose(opts, bundles, out);
        if (verify_cmd->parsed())
            return run_verify(opts, bundle_path, target, target_pullback, out);
        if (reduce_cmd->parsed()) return run_reduce_to_wave(opts, out);
        if (darboux_cmd->parsed())
            return run_darboux(opts, from, expr_text, gauge_text, out);
        if (hy_cmd->parsed())
            return run_hy_admissible(opts, h_text, upsilon_text, hfun_text, out);
        if (wave_cmd->parsed()) {
            if (wave_build->parsed())
                return run_wave_build(opts, c_text, xs, ys, phi1, phi2, th1, th2,
                                      t0, out);
            if (wave_verify->parsed()) return run_wave_verify(opts, bundle_path, out);
            if (wave_catalog->parsed()) return run_wave_catalog(opts, out);
        }
        if (catalog_cmd->parsed()) return run_catalog(opts, catalog_name, out);
        err << app.help();
        return kUsage;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "expression error: " << e.what() << "\n";
        return kUsage;
    } catch (const ContactConditionViolatedError& e) {
        err << e.what() << "\n";
        return kFail;
    } catch (const BranchUndeterminedError& e) {
        err << e.what() << "\n";
        return kIndeterminate;
    } catch (const UnknownNameError& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kUsage;
    } catch (const std::runtime_error& e) {
        err << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace hypeq
