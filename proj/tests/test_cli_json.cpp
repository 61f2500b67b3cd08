#include "doctest.h"
#include "hypeq/cli.hpp"
#include "hypeq/json_io.hpp"

#include <fstream>
#include <cstdlib>
#include <sstream>

using namespace hypeq;

namespace {
const VariableSpace& S = standard_space();
Expr P(const std::string& t) { return parse(t, S); }

struct RunResult {
    int code;
    std::string out, err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const Json& payload) {
    std::string path = "/tmp/hypeq_test_" + name + ".json";
    std::ofstream f(path);
    f << payload.dump(2);
    return path;
}
}  // namespace

TEST_CASE("bundle json round trip") {
    ContactTransform leg{P("ux"), P("y"), P("u-x*ux"), P("-x"), P("uy"),
                         {{P("ux"), CondKind::NonZero}},
                         {}};
    Json j = contact_to_json(leg);
    TransformBundle b = bundle_from_json(j, S);
    CHECK_FALSE(b.is_point);
    CHECK(b.contact.key() == leg.key());
    REQUIRE(b.contact.domain.size() == 1);
    CHECK(b.contact.domain[0].kind == CondKind::NonZero);

    PointEquivalenceTransform pe{P("2*x"), P("y"), P("exp(u)"), true, {}};
    TransformBundle pb = bundle_from_json(point_to_json(pe), S);
    CHECK(pb.is_point);
    CHECK(pb.point.swap);
    CHECK(structurally_equal(pb.point.U, pe.U));

    Condition pos = condition_from_string("u>0", S);
    CHECK(pos.kind == CondKind::Positive);
    CHECK(condition_to_string(pos) == "u>0");
}

TEST_CASE("cli classify verdicts and exit codes") {
    RunResult r = run({"classify", "--f", "ux^2", "--json"});
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["label"] == "HyPrime");

    RunResult human = run({"classify", "--f", "ux^2"});
    CHECK(human.code == 0);
    CHECK(human.out.find("HyPrime") != std::string::npos);

    RunResult bad = run({"classify", "--f", "1/(ux"});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("offset 5") != std::string::npos);
}

TEST_CASE("cli output is byte-stable for a fixed seed") {
    RunResult a = run({"classify", "--f", "sin(u)+ux*uy", "--seed", "7", "--json"});
    RunResult b = run({"classify", "--f", "sin(u)+ux*uy", "--seed", "7", "--json"});
    CHECK(a.out == b.out);
}

TEST_CASE("cli transform and reduce-to-wave") {
    RunResult r = run({"transform", "--f", "0", "--X", "x", "--Y", "y", "--U",
                       "exp(u)", "--json"});
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(is_normalized_zero(parse(j["pullback"], S) - P("exp(u)*ux*uy")));
    CHECK(is_normalized_zero(parse(j["target"], S) - P("tux*tuy/tu")));

    RunResult w = run({"reduce-to-wave", "--f", "ux*uy", "--json"});
    CHECK(w.code == 0);
    Json wj = Json::parse(w.out);
    CHECK(wj["theta"] == "exp(u)");
    CHECK(wj["verified"] == true);

    RunResult no = run({"reduce-to-wave", "--f", "u", "--json"});
    CHECK(no.code == 1);
    CHECK(Json::parse(no.out)["error"] == "NotInHxy");
}

TEST_CASE("cli verify on the worked bundle") {
    Json bundle;
    bundle["kind"] = "contact";
    bundle["components"] = {{"X", "-1/ux-y"},
                            {"Y", "y"},
                            {"U", "u-x*ux"},
                            {"Ux", "-x*ux^2"},
                            {"Uy", "-x*ux^2+uy"}};
    bundle["domain"] = Json::array({"ux"});
    bundle["source_f"] = "ux^2";
    bundle["target_pullback"] = "-2*x*ux^3";
    std::string path = write_temp("worked", bundle);

    RunResult r = run({"verify", "--bundle", path, "--numeric", "200", "--json"});
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["verdict"] == "pass");
    CHECK(j["determining"]["passed"] == true);
    CHECK(j["numeric"]["max_residual"].get<double>() < 1e-9);

    // tampered pair fails
    bundle["target_pullback"] = "0";
    std::string bad_path = write_temp("worked_bad", bundle);
    RunResult bad = run({"verify", "--bundle", bad_path, "--numeric", "100", "--json"});
    CHECK(bad.code == 1);
}

TEST_CASE("cli hy-admissible and wave-symmetry") {
    RunResult r = run({"hy-admissible", "--h", "-1/ux-y", "--upsilon",
                       "ups+tau/(eta+xi)", "--hfun", "-1/(eta+xi)", "--domain",
                       "ux", "--numeric", "100", "--json"});
    CHECK(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(is_normalized_zero(parse(j["target_pullback"], S) - P("-2*x*ux^3")));

    RunResult w = run({"wave-symmetry", "build", "--X", "ux", "--Y", "y",
                       "--theta1", "eta", "--json"});
    CHECK(w.code == 0);
    Json wj = Json::parse(w.out);
    CHECK(wj["report"]["passed"] == true);

    RunResult c = run({"wave-symmetry", "catalog", "--json"});
    CHECK(c.code == 0);
    CHECK(Json::parse(c.out)["count"] == 16);
}

TEST_CASE("cli catalog and compose") {
    RunResult c = run({"catalog", "log-wave", "--json"});
    CHECK(c.code == 0);
    Json j = Json::parse(c.out);
    CHECK(j["expected"] == "Hxy");

    RunResult all = run({"catalog", "--json"});
    CHECK(Json::parse(all.out)["entries"].size() == 8);

    Json left;
    left["kind"] = "contact";
    left["components"] = {{"X", "ux"}, {"Y", "y"}, {"U", "u-x*ux"},
                          {"Ux", "-x"}, {"Uy", "uy"}};
    Json right;
    right["kind"] = "contact";
    right["components"] = {{"X", "-ux"}, {"Y", "y"}, {"U", "u-x*ux"},
                           {"Ux", "x"}, {"Uy", "uy"}};
    std::string lp = write_temp("leg", left);
    std::string rp = write_temp("leg_inv", right);
    RunResult comp = run({"compose", "--bundle", lp, "--bundle", rp, "--json"});
    CHECK(comp.code == 0);
    Json cj = Json::parse(comp.out);
    CHECK(cj["components"]["X"] == "x");
    CHECK(cj["components"]["U"] == "u");
}

TEST_CASE("cli config file with flag precedence") {
    Json cfg;
    cfg["seed"] = 99;
    cfg["numeric"] = 10;
    std::string path = write_temp("config", cfg);
    RunResult r = run({"classify", "--f", "0", "--config", path, "--json"});
    CHECK(Json::parse(r.out)["seed"] == 99);
    RunResult w = run({"classify", "--f", "0", "--config", path, "--seed", "5",
                       "--json"});
    CHECK(Json::parse(w.out)["seed"] == 5);
}

TEST_CASE("darboux datum json round trip") {
    DarbouxDatum d{DarbouxDatum::Kind::H, P("-1/ux-y"),
                   {{P("ux"), CondKind::NonZero}}};
    Json j = darboux_datum_to_json(d);
    CHECK(j["kind"] == "h");
    DarbouxDatum back = darboux_datum_from_json(j, S);
    CHECK(back.kind == DarbouxDatum::Kind::H);
    CHECK(structurally_equal(normalize(back.expr), normalize(d.expr)));
    REQUIRE(back.domain.size() == 1);
    CHECK(structurally_equal(back.domain[0].expr, P("ux")));
    CHECK_THROWS_AS(
        darboux_datum_from_json(Json{{"kind", "zzz"}, {"expr", "ux"}}, S),
        std::invalid_argument);
}

TEST_CASE("HYPEQ_SEED environment variable sets the default seed") {
    setenv("HYPEQ_SEED", "1234", 1);
    RunResult r = run({"classify", "--f", "0", "--json"});
    CHECK(Json::parse(r.out)["seed"] == 1234);
    // explicit flag wins
    RunResult w = run({"classify", "--f", "0", "--seed", "8", "--json"});
    CHECK(Json::parse(w.out)["seed"] == 8);
    unsetenv("HYPEQ_SEED");
    RunResult d = run({"classify", "--f", "0", "--json"});
    CHECK(Json::parse(d.out)["seed"] == 42);
}

TEST_CASE("cli usage errors") {
    CHECK(run({"bogus"}).code == 3);
    CHECK(run({"classify"}).code == 3);
    CHECK(run({"darboux", "--from", "zzz", "--expr", "ux"}).code == 3);
    CHECK(run({}).code == 3);
}
