#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pss/backlund/backlund.hpp"
#include "pss/cli/cli.hpp"
#include "pss/core/json_io.hpp"
#include "pss/error.hpp"
#include "pss/families/families.hpp"

using namespace pss;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Exit status of the real binary; output discarded.
int run_binary(const std::string& args) {
    const std::string cmd = std::string(PSS_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::path(PSS_TEST_TMP) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string golden(const std::string& name) { return (fs::path(PSS_DATA_DIR) / "catalog" / (name + ".json")).string(); }

// Document without its free-text description.
std::string body(core::SystemDocument doc) {
    doc.description.clear();
    doc.system.description.clear();
    return core::dump_document(doc);
}

std::string mutated_file() {
    auto doc = families::catalog_entry("coupled-kdv").doc;
    doc.fij.f22 = -doc.fij.f22;
    const auto dir = scratch("mutant");
    const auto path = (dir / "mutant.json").string();
    core::write_document(doc, path);
    return path;
}

std::string truncated_file() {
    const std::string text = slurp(golden("coupled-kdv"));
    const auto dir = scratch("truncated");
    std::ofstream(dir / "truncated.json") << text.substr(0, text.size() / 2);
    return (dir / "truncated.json").string();
}

}  // namespace

TEST_CASE("binding lists") {
    auto b = cli::parse_bindings("a=1, p=f(z0, y0),c=eta^2");
    REQUIRE(b.size() == 3);
    CHECK(b[1].first == "p");
    CHECK(b[1].second == "f(z0, y0)");
    CHECK(cli::parse_bindings("").empty());
    CHECK_THROWS_AS(cli::parse_bindings("a=1,a=2"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_bindings("a"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_bindings("a=(1"), InvalidArgument);

    cli::Params p("lambda1=1/4,lambda2=-2");
    CHECK(p.get("lambda1", 0) == 0.25);
    CHECK(p.get("lambda2", 0) == -2);
    CHECK(p.get("k1", 7) == 7);
    CHECK_THROWS_AS(cli::Params("eta=z0"), Error);
}

TEST_CASE("defaults file") {
    auto d = cli::Defaults::load(cli::Defaults::default_path());
    CHECK(d["residual_analytic"] == 1e-8);
    CHECK(d["degeneracy"] == 1e-8);
    CHECK(d["mask_threshold"] == 1e-3);
    CHECK(d["order_min"] == 1.8);
    CHECK(d["order_max"] == 2.2);
    d.set("degeneracy", 1e-6);
    CHECK(d["degeneracy"] == 1e-6);
    CHECK_THROWS_AS(d.set("nonsense", 1), InvalidArgument);
    CHECK_THROWS_AS(cli::Defaults::load("/nonexistent/defaults.json"), InvalidArgument);
}

TEST_CASE("golden catalog files") {
    for (const auto& e : families::catalog()) {
        INFO(e.name);
        CHECK(slurp(golden(e.name)) == core::dump_document(e.doc));
        auto r = run({"catalog", "dump", e.name});
        CHECK(r.code == 0);
        CHECK(r.out == core::dump_document(e.doc));
    }
    auto list = run({"catalog", "list"});
    CHECK(list.code == 0);
    CHECK(std::count(list.out.begin(), list.out.end(), '\n') == 6);
    CHECK(run({"catalog", "dump", "nope"}).code == 2);
}

TEST_CASE("verify exit codes") {
    auto ok = run({"verify", golden("coupled-kdv")});
    CHECK(ok.code == 0);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j["verdict"] == "DescribesPSS");
    for (const char* name : {"mkdv-", "3nls+"}) CHECK(nlohmann::json::parse(run({"verify", golden(name)}).out)["verdict"] == "DescribesSS");

    auto bad = run({"verify", mutated_file()});
    CHECK(bad.code == 1);
    auto jb = nlohmann::json::parse(bad.out);
    CHECK(jb["verdict"] == "Fails");
    CHECK(!jb["first_nonzero_term"].get<std::string>().empty());

    CHECK(run({"verify", truncated_file()}).code == 2);
    CHECK(run({"verify", "/nonexistent.json"}).code == 2);
    CHECK(run({"verify"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify writes a report and is deterministic") {
    const auto dir = scratch("verify_out");
    auto a = run({"verify", golden("nlse"), "--seed", "5", "--out", dir.string()});
    auto b = run({"verify", golden("nlse"), "--seed", "5"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(dir / "report.json") == a.out);
}

TEST_CASE("generate reproduces catalog entries") {
    auto kdv = run({"generate", "kdv-f21", "--params", "delta=1,a=-1,a1=1,b1=1,a2=-1,b2=1,c=eta^2,p=eta^2-2*z0*y0",
                    "--description", "coupled KdV-type system"});
    CHECK(kdv.code == 0);
    CHECK(kdv.out == slurp(golden("coupled-kdv")));

    auto nls = run({"generate", "nls", "--params", "k=1,delta=-1"});
    CHECK(nls.code == 0);
    CHECK(body(core::from_json(nlohmann::json::parse(nls.out))) == body(families::catalog_entry("3nls+").doc));
    auto nls_minus = run({"generate", "nls", "--params", "k=1,delta=1"});
    CHECK(body(core::from_json(nlohmann::json::parse(nls_minus.out))) == body(families::catalog_entry("3nls-").doc));
    for (const auto& [delta, name] : {std::pair{"1", "mkdv+"}, std::pair{"-1", "mkdv-"}}) {
        auto m = run({"generate", "mkdv", "--params", std::string("delta=") + delta});
        CHECK(body(core::from_json(nlohmann::json::parse(m.out))) == body(families::catalog_entry(name).doc));
    }
}

TEST_CASE("generated systems verify") {
    const auto dir = scratch("generate_out");
    auto g = run({"generate", "kdv-f31", "--params", "a1=2,b1=1,a2=1,b2=3,c=eta,p=z0*y0+eta", "--out", dir.string()});
    REQUIRE(g.code == 0);
    CHECK(run({"verify", (dir / "kdv-f31.json").string()}).code == 0);
    auto gen = run({"generate", "general-f21", "--declare", "eta", "--params",
                    "ell=eta,g=z0+y0,h=y0-z0,P=-z2-y2+2*(y0*z0^2+z0*y0^2)-eta^2*(z0+y0)+eta*(y1-z1),"
                    "q=-eta^3+2*(y0*z1-z0*y1)+2*eta*z0*y0",
                    "--out", dir.string()});
    REQUIRE(gen.code == 0);
    CHECK(run({"verify", (dir / "general-f21.json").string()}).code == 0);
}

TEST_CASE("generate errors") {
    auto g = run({"generate", "kdv-f21", "--params", "a1=1,b1=1,a2=1,b2=1,c=eta^2,p=eta^2-2*z0*y0"});
    CHECK(g.code == 1);
    CHECK(g.err.find("GenericityViolation") != std::string::npos);
    CHECK(run({"generate", "kdv-f21", "--params", "a1=1"}).code == 2);
    CHECK(run({"generate", "kdv-f21", "--params", "a1=1,b1=1,a2=-1,b2=1,c=1,p=0,zz=3"}).code == 2);
    CHECK(run({"generate", "nls", "--params", "k=-1,delta=1"}).code == 2);
    CHECK(run({"generate", "nope"}).code == 2);
    CHECK(run({"generate", "general-f21", "--params", "ell=eta,g=z0,h=y0,P=z1,q=y0"}).code == 2);  // eta undeclared
    CHECK(run({"generate", "general-f21", "--declare", "eta", "--params", "ell=eta,g=z0,h=y0,P=z1+y1,q=y0"}).code == 1);
}

TEST_CASE("backlund from the vacuum certifies") {
    const auto dir = scratch("bt_vacuum");
    auto r = run({"backlund", "vacuum", "--params", "lambda1=1,lambda2=0.5", "--out", dir.string()});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == true);
    for (const char* check : {"pde_residual", "bt_residual", "pseudopotential_defect", "curvature", "closed_form"}) {
        INFO(check);
        CHECK(j["checks"][check]["pass"] == true);
    }
    CHECK(slurp(dir / "certification.json") == r.out);
    CHECK(fs::exists(dir / "solution.csv"));
    // Byte-identical on a second run.
    CHECK(run({"backlund", "vacuum", "--params", "lambda1=1,lambda2=0.5"}).out == r.out);
}

TEST_CASE("slowly varying backlund curvature certifies on coarsenings") {
    // Refining reaches round-off in the curvature; the coarsened study through the given grid converges.
    auto r = run({"backlund", "vacuum", "--params", "lambda1=1/2,k1=-3/4"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    const auto& c = j["checks"]["curvature"];
    CHECK(c["pass"] == true);
    REQUIRE(c.contains("coarsened"));
    CHECK(c["coarsened"]["pass"] == true);
    CHECK(c["coarsened"]["grids"][2]["grid"] == j["grid"]);
    CHECK(c["coarsened"]["grids"][2]["max"].get<double>() < 5e-3);
}

TEST_CASE("backlund from u = 0, v = 1 reproduces the closed form") {
    const auto dir = scratch("bt_u0v1");
    auto r = run({"backlund", "u0v1", "--grid", "0,0,0.015625,0.015625,65,65", "--out", dir.string()});
    CHECK(r.code != 2);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["checks"]["closed_form"]["pass"] == true);
    CHECK(j["checks"]["pde_residual"]["pass"] == true);
    CHECK(j["checks"]["bt_residual"]["pass"] == true);

    const auto g = numerics::Grid::over(0, 1, 0, 1, 65, 65);
    const auto exact = backlund::bt_u0v1(backlund::BTParams{1, 0, 1, 0, 0}, g);
    std::istringstream csv(slurp(dir / "solution.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x,t,u,v,mask");
    std::size_t k = 0;
    double worst = 0.0;
    while (std::getline(csv, line)) {
        double x, t, u, v;
        int mask;
        char c;
        std::istringstream row(line);
        row >> x >> c >> t >> c >> u >> c >> v >> c >> mask;
        REQUIRE(k < g.size());
        CHECK(x == doctest::Approx(g.x(g.col(k))));
        CHECK(t == doctest::Approx(g.t(g.row(k))));
        if (!mask) worst = std::max({worst, std::abs(u - exact.u()[k]), std::abs(v - exact.v()[k])});
        ++k;
    }
    CHECK(k == g.size());
    CHECK(worst < 1e-6);
}

TEST_CASE("backlund errors") {
    CHECK(run({"backlund", "vacuum", "--params", "lambda1=0"}).code == 2);
    CHECK(run({"backlund", "vacuum", "--params", "lambda1=0.1,lambda2=-3,psi0=1", "--set", "blowup=5"}).code == 2);
    CHECK(run({"backlund", "vacuum", "--params", "phi0=1,psi0=0"}).code == 2);
    CHECK(run({"backlund", "nothing-here"}).code == 2);
    CHECK(run({"backlund", "vacuum", "--grid", "0,0,0.1,0.1,3,3"}).code == 2);
}

TEST_CASE("curvature command") {
    auto kdv = run({"curvature", "coupled-kdv", "--solution", "bt-vacuum", "--params", "lambda1=1,lambda2=0,k1=-1,eta=1.5"});
    CHECK(kdv.code == 0);
    auto j = nlohmann::json::parse(kdv.out);
    CHECK(j["target"] == -1.0);
    CHECK(j["max_abs_error"].get<double>() < 5e-3);
    CHECK(j["order_estimate"].get<double>() >= 1.8);
    CHECK(j["order_estimate"].get<double>() <= 2.2);

    auto sphere = run({"curvature", "--oracle", "sphere", "--grid", "0.5,0,0.015625,0.015625,129,129"});
    CHECK(sphere.code == 0);
    CHECK(nlohmann::json::parse(sphere.out)["max_abs_error"].get<double>() < 5e-3);
    CHECK(run({"curvature", "--oracle", "pseudosphere"}).code == 0);

    // u = v = 0 makes the coupled KdV metric degenerate everywhere.
    auto zero = run({"curvature", "coupled-kdv", "--solution", "zero", "--params", "eta=1.5"});
    CHECK(zero.code == 2);
    CHECK(run({"curvature", golden("coupled-kdv"), "--solution", "u=sin(x);v=cos(t)"}).code == 2);  // eta unbound
    CHECK(run({"curvature", "coupled-kdv"}).code == 2);
}

TEST_CASE("exit codes through the binary") {
    CHECK(run_binary("verify " + golden("coupled-kdv")) == 0);
    CHECK(run_binary("verify " + mutated_file()) == 1);
    CHECK(run_binary("verify " + truncated_file()) == 2);
    CHECK(run_binary("generate kdv-f21 --params a1=1,b1=1,a2=1,b2=1,c=1,p=0") == 1);
    CHECK(run_binary("backlund vacuum --params lambda1=0") == 2);
}
