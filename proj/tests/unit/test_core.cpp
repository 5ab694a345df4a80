#include "doctest.h"
#include "pss/core/json_io.hpp"
#include "pss/core/linear.hpp"
#include "pss/core/verify.hpp"
#include "pss/error.hpp"
#include "pss/families/families.hpp"

using namespace pss;
using namespace pss::core;
using jet::Expr;
using jet::parse_expr;
using jet::ZeroStatus;

namespace {

const SystemDocument& doc(const char* name) { return families::catalog_entry(name).doc; }

Expr P(const SystemDocument& d, const char* text) { return parse_expr(text, d.params); }

}  // namespace

TEST_CASE("order conditions") {
    CHECK(check_order_conditions(doc("coupled-kdv").fij));
    CHECK(check_order_conditions(doc("nlse").fij));
    AssociatedFunctions f = doc("coupled-kdv").fij;
    f.f11 = jet::z(1);
    CHECK_FALSE(check_order_conditions(f));
    f = doc("coupled-kdv").fij;
    f.f32 = jet::y(3);
    CHECK_FALSE(check_order_conditions(f));
}

TEST_CASE("genericity expression") {
    // Only the (f11, f31) Jacobian survives for coupled KdV: det((1,1),(-1,1)) = 2.
    CHECK(genericity_expr(doc("coupled-kdv").fij) == Expr(4));
    // NLSE: det of d(2 z0, -2 y0)/d(z0, y0) = -4.
    CHECK(genericity_expr(doc("nlse").fij) == Expr(16));
    AssociatedFunctions flat;
    Expr eta = P(doc("nlse"), "eta");
    flat.f11 = flat.f21 = flat.f31 = eta;
    CHECK(is_zero(genericity_expr(flat)) == ZeroStatus::Zero);
    CHECK_FALSE(check_generic(genericity_expr(flat)).holds);
}

TEST_CASE("structure residuals") {
    const auto& kdv = doc("coupled-kdv");
    for (const auto& r : structure_residuals(kdv.system, kdv.fij)) CHECK(r.is_zero());
    AssociatedFunctions mutated = kdv.fij;
    mutated.f22 = -mutated.f22;
    auto res = structure_residuals(kdv.system, mutated);
    CHECK(is_zero(res[1]) == ZeroStatus::NonZero);
    const auto& mk = doc("mkdv-");
    for (const auto& r : structure_residuals(mk.system, mk.fij)) CHECK(r.is_zero());
    AssociatedFunctions bad = kdv.fij;
    bad.f12 = jet::z(3);
    CHECK_THROWS_AS(structure_residuals(kdv.system, bad), OrderOverflow);
}

TEST_CASE("verification verdicts over the catalog") {
    for (const auto& e : families::catalog()) {
        INFO(e.name);
        auto r = verify_describes(e.doc.system, e.doc.fij);
        CHECK(r.order_ok);
        CHECK(r.genericity.holds);
        CHECK(r.nondegeneracy.holds);
        CHECK(r.verdict == (e.doc.fij.delta == 1 ? Verdict::DescribesPSS : Verdict::DescribesSS));
    }
    const auto& kdv = doc("coupled-kdv");
    auto wrong = verify_describes(make_system(jet::z(3), kdv.system.G), kdv.fij);
    CHECK(wrong.verdict == Verdict::Fails);
    CHECK(wrong.reason.find("residual") != std::string::npos);
    CHECK_FALSE(wrong.first_nonzero_term.empty());

    AssociatedFunctions constant;
    constant.f11 = Expr(1);
    constant.f21 = Expr(2);
    constant.f31 = Expr(3);
    auto flat = verify_describes(make_system(Expr(), Expr()), constant);
    CHECK(flat.verdict == Verdict::Fails);

    auto j = report_to_json(verify_describes(kdv.system, kdv.fij));
    CHECK(j["verdict"] == "DescribesPSS");
    CHECK(j["residuals"].size() == 3);
}

TEST_CASE("nondegeneracy of the NLSE forms is -2 (z0^2 + y0^2)_x") {
    const auto& n = doc("nlse");
    CHECK(nondegeneracy_expr(n.fij) == P(n, "-4*(z0*z1 + y0*y1)"));
}

TEST_CASE("linearity in the third-order jets") {
    CHECK(linearity_check(doc("coupled-kdv").system));
    CHECK(linearity_check(doc("3nls+").system));
    CHECK_FALSE(linearity_check(make_system(jet::z(3).pow(2), Expr())));
    CHECK_FALSE(linearity_check(make_system(Expr(), jet::z(3) * jet::y(3))));
    CHECK_THROWS_AS(make_system(jet::total_x_extended(jet::z(3)), Expr()), OrderOverflow);
}

TEST_CASE("linear problems") {
    const auto& kdv = doc("coupled-kdv");
    auto lp = build_linear_problem(kdv.fij);
    CHECK(lp.algebra == Algebra::sl2R);
    CHECK(lp.A[0][0].re == P(kdv, "eta/2"));
    CHECK(lp.A[0][1].re == jet::z(0));
    CHECK(lp.A[1][0].re == jet::y(0));
    CHECK(lp.A[1][1].re == P(kdv, "-eta/2"));
    // The B matrix displayed for the coupled KdV linear problem.
    CHECK(lp.B[0][0].re == P(kdv, "-eta^3/2 + (eta*y0 - y1)*z0 + y0*z1"));
    CHECK(lp.B[0][1].re == P(kdv, "-eta^2*z0 - eta*z1 - z2 + 2*y0*z0^2"));
    CHECK(lp.B[1][0].re == P(kdv, "-eta^2*y0 + eta*y1 - y2 + 2*z0*y0^2"));

    auto zero = build_linear_problem(AssociatedFunctions{});
    CHECK(is_zero_matrix(zero.A));
    CHECK(is_zero_matrix(zero.B));

    auto su = build_linear_problem(doc("mkdv-").fij);
    CHECK(su.algebra == Algebra::su2);
    for (const auto* M : {&su.A, &su.B}) {
        const auto& m = *M;
        CHECK(m[0][0].re.is_zero());
        CHECK(m[1][1].re.is_zero());
        CHECK((m[0][1].re + m[1][0].re).is_zero());
        CHECK((m[0][1].im - m[1][0].im).is_zero());
    }
    for (const auto& e : families::catalog()) {
        auto l = build_linear_problem(e.doc.fij);
        for (const auto* M : {&l.A, &l.B}) {
            CHECK(((*M)[0][0].re + (*M)[1][1].re).is_zero());
            CHECK(((*M)[0][0].im + (*M)[1][1].im).is_zero());
        }
    }
}

TEST_CASE("zero curvature on and off shell") {
    for (const auto& e : families::catalog()) {
        INFO(e.name);
        auto lp = build_linear_problem(e.doc.fij);
        CHECK(is_zero_matrix(zero_curvature_residual(lp, e.doc.system)));
    }
    const auto& kdv = doc("coupled-kdv");
    auto off = make_system(kdv.system.F + 1, kdv.system.G);
    CHECK_FALSE(is_zero_matrix(zero_curvature_residual(build_linear_problem(kdv.fij), off)));
}

TEST_CASE("zero curvature agrees with the structure residuals") {
    for (const auto& e : families::catalog()) {
        for (int k = 0; k < 6; ++k) {
            AssociatedFunctions f = e.doc.fij;
            Expr& slot = f.f(k / 2 + 1, k % 2 + 1);
            slot = slot + (k % 2 == 0 ? jet::z(0) : jet::y(1));
            bool residual_zero = true;
            for (const auto& r : structure_residuals(e.doc.system, f)) residual_zero = residual_zero && r.is_zero();
            bool zc = is_zero_matrix(zero_curvature_residual(build_linear_problem(f), e.doc.system));
            CHECK(residual_zero == zc);
        }
    }
}

TEST_CASE("Riccati system") {
    const auto& kdv = doc("coupled-kdv");
    auto r = build_riccati(kdv.fij);
    Expr G = Expr::param(r.re);
    CHECK(r.gamma_x.re == -jet::z(0) * G * G - P(kdv, "eta") * G + jet::y(0));
    CHECK(r.gamma_x.im.is_zero());
    auto zero = build_riccati(AssociatedFunctions{});
    CHECK(zero.gamma_x.re.is_zero());
    CHECK(zero.gamma_t.re.is_zero());
    for (const auto& e : families::catalog()) {
        INFO(e.name);
        auto ric = build_riccati(e.doc.fij);
        jet::ParamRef g{ric.re, 0};
        Expr third = jet::diff(jet::diff(jet::diff(ric.gamma_x.re, g), g), g);
        CHECK(third.is_zero());
        auto cross = riccati_cross_residual(ric, e.doc.system);
        CHECK(is_zero(cross.re) == ZeroStatus::Zero);
        CHECK(is_zero(cross.im) == ZeroStatus::Zero);
    }
    auto off = riccati_cross_residual(r, make_system(kdv.system.F + jet::z(1), kdv.system.G));
    CHECK(is_zero(off.re) == ZeroStatus::NonZero);
}

TEST_CASE("metric coefficients") {
    const auto& n = doc("nlse");
    auto m = metric_coefficients(n.fij);
    CHECK(m.E == P(n, "4*(z0^2 + y0^2)"));
    // The displayed cross coefficient is the full dx dt factor, i.e. 2F.
    CHECK(Expr(2) * m.F == P(n, "-16*eta*(z0^2 + y0^2) - 8*(z0*y1 - y0*z1)"));
    CHECK(m.G == P(n, "16*eta^2*(z0^2 + y0^2) + 4*(z1^2 + y1^2) + 16*eta*(z0*y1 - y0*z1)"));
    auto zero = metric_coefficients(AssociatedFunctions{});
    CHECK(zero.E.is_zero());
    CHECK(zero.F.is_zero());
    CHECK(zero.G.is_zero());
}

TEST_CASE("system documents round-trip through JSON") {
    for (const auto& e : families::catalog()) {
        std::string text = dump_document(e.doc);
        auto back = from_json(nlohmann::json::parse(text));
        CHECK(dump_document(back) == text);
        CHECK(back.system.F == e.doc.system.F);
    }
    auto j = nlohmann::json::parse(dump_document(doc("mkdv+")));
    CHECK(j["parameters"].size() == 3);
    auto bad = j;
    bad["delta"] = 2;
    CHECK_THROWS_AS(from_json(bad), InvalidArgument);
    bad = j;
    bad["fij"].erase("f22");
    CHECK_THROWS_AS(from_json(bad), InvalidArgument);
    bad = j;
    bad["F"] = "z0 +";
    CHECK_THROWS_AS(from_json(bad), SyntaxError);
    bad = j;
    bad["F"] = "mu*z0";
    CHECK_THROWS_AS(from_json(bad), UnknownSymbol);
}
