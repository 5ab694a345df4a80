#include <cmath>

#include "doctest.h"
#include "pss/error.hpp"
#include "pss/jet/compiled.hpp"
#include "pss/jet/ops.hpp"
#include "pss/jet/parser.hpp"
#include "../support/random_expr.hpp"

using namespace pss;
using namespace pss::jet;

namespace {

ParamTable table() {
    ParamTable t;
    t.declare("eta");
    t.declare("alpha", true);
    t.declare("beta", true);
    t.declare("sqrt6", false, Reduction{2, 6});
    return t;
}

Point point_of(std::initializer_list<std::pair<JetVar, double>> jets,
               std::initializer_list<std::pair<const std::string, double>> params = {}) {
    Point p;
    for (const auto& [v, x] : jets) p.jets[v] = x;
    p.params = params;
    return p;
}

}  // namespace

TEST_CASE("parsing builds normalized sums") {
    auto t = table();
    CHECK(parse_expr("z1", t) == z(1));
    Expr kdv = parse_expr("-z3 + 6*z0*y0*z1", t);
    CHECK(kdv.size() == 2);
    CHECK(kdv == z(0) * y(0) * z(1) * 6 - z(3));
    CHECK(parse_expr("2*(z0^2+y0^2) - 2*z0^2 - 2*y0^2", t).is_zero());
    CHECK(parse_expr("eta^2 - eta*eta", t).is_zero());
    CHECK(parse_expr("0.25*z0", t) == Expr(rational(1, 4)) * z(0));
    CHECK(parse_expr("1.5e-1", t) == Expr(rational(3, 20)));
    CHECK(parse_expr("-z0^2", t) == -(z(0) * z(0)));
    CHECK(parse_expr("z0^-2*z0^2", t) == Expr(1));
    CHECK(parse_expr("alpha_t + alpha_tt", t).depends_on_param("alpha"));
}

TEST_CASE("parse errors carry positions and symbols") {
    auto t = table();
    try {
        parse_expr("z0 + * y0", t);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 5);
    }
    CHECK_THROWS_AS(parse_expr("(z0 + y0", t), SyntaxError);
    CHECK_THROWS_AS(parse_expr("z0 y0", t), SyntaxError);
    CHECK_THROWS_AS(parse_expr("z0^", t), SyntaxError);
    CHECK_THROWS_AS(parse_expr("1/0", t), SyntaxError);
    CHECK_THROWS_AS(parse_expr("z4", t), UnknownSymbol);
    CHECK_THROWS_AS(parse_expr("mu*z0", t), UnknownSymbol);
    CHECK_THROWS_AS(parse_expr("eta_t", t), UnknownSymbol);
    CHECK_THROWS_AS(t.declare("z0"), InvalidArgument);
}

TEST_CASE("surd reductions collapse") {
    auto t = table();
    CHECK(parse_expr("sqrt6*sqrt6", t) == Expr(6));
    CHECK(parse_expr("sqrt6^3", t) == parse_expr("6*sqrt6", t));
    CHECK(parse_expr("1/sqrt6", t) == parse_expr("sqrt6/6", t));
    CHECK(parse_expr("(sqrt6/3*z0)^2", t) == parse_expr("2/3*z0^2", t));
}

TEST_CASE("partial derivatives") {
    auto t = table();
    CHECK(diff(parse_expr("z0^2*y1", t), JetVar::z(0)) == parse_expr("2*z0*y1", t));
    CHECK(diff(parse_expr("z0 + y0", t), JetVar::z(1)).is_zero());
    CHECK(diff(parse_expr("sec(z0)", t), JetVar::z(0)) == parse_expr("sec(z0)*tan(z0)", t));
    CHECK(diff(parse_expr("eta*z0", t), ParamRef{t.find("eta"), 0}) == z(0));

    SUBCASE("sec derivative agrees with a central difference") {
        Expr d = diff(sec(z(0)), JetVar::z(0));
        double h = 1e-5, x0 = 0.3;
        double fd = (1 / std::cos(x0 + h) - 1 / std::cos(x0 - h)) / (2 * h);
        CHECK(std::fabs(eval(d, point_of({{JetVar::z(0), x0}})) - fd) < 1e-8);
    }
    SUBCASE("time-dependent parameters") {
        Expr a = parse_expr("alpha*z0", t);
        CHECK(diff(a, JetVar::t()) == parse_expr("alpha_t*z0", t));
        CHECK(diff(diff(a, JetVar::t()), JetVar::t()) == parse_expr("alpha_tt*z0", t));
        CHECK_THROWS_AS(diff(parse_expr("alpha_tt", t), JetVar::t()), DepthExceeded);
        CHECK(diff(parse_expr("eta*t^2", t), JetVar::t()) == parse_expr("2*eta*t", t));
    }
    SUBCASE("chain rule through every function") {
        for (const char* f : {"sin", "cos", "tan", "sec", "exp", "sqrt"}) {
            Expr e = parse_expr(std::string(f) + "(z0^2 + 1) + (z0 + y0^2)^-2", t);
            Expr d = diff(e, JetVar::z(0));
            double h = 1e-6, x0 = 0.4, y0 = 0.7;
            auto at = [&](double zv) { return eval(e, point_of({{JetVar::z(0), zv}, {JetVar::y(0), y0}})); };
            double fd = (at(x0 + h) - at(x0 - h)) / (2 * h);
            CHECK(std::fabs(eval(d, point_of({{JetVar::z(0), x0}, {JetVar::y(0), y0}})) - fd) < 1e-6);
        }
    }
}

TEST_CASE("total x-derivative") {
    auto t = table();
    CHECK(total_x(z(0)) == z(1));
    CHECK(total_x(Expr(7)).is_zero());
    CHECK(total_x(parse_expr("eta", t)).is_zero());
    CHECK(total_x(xvar()) == Expr(1));
    Expr f22 = parse_expr("-eta^3 + 2*(y0*z1 - z0*y1) + 2*eta*z0*y0", t);
    Expr expected = parse_expr("2*(y0*z2 - z0*y2) + 2*eta*(z1*y0 + z0*y1)", t);
    CHECK(total_x(f22) == expected);
    CHECK_THROWS_AS(total_x(z(3)), OrderOverflow);
    CHECK_THROWS_AS(total_x(parse_expr("sin(y3)", t)), OrderOverflow);
    Expr four = total_x_extended(z(3) * y(1));
    CHECK(four == Expr::var(JetVar::z(4)) * y(1) + z(3) * y(2));
    CHECK_THROWS_AS(total_x_extended(four), OrderOverflow);
}

TEST_CASE("zero testing") {
    auto t = table();
    CHECK(is_zero(Expr()) == ZeroStatus::Zero);
    CHECK(is_zero(parse_expr("eta^2 - eta*eta", t)) == ZeroStatus::Zero);
    CHECK(is_zero(z(1)) == ZeroStatus::NonZero);
    Expr pyth = parse_expr("sin(z0)^2 + cos(z0)^2 - 1", t);
    CHECK(is_zero(pyth) == ZeroStatus::Unknown);
    CHECK(probe_zero(pyth, 20, 7).status == ProbeStatus::LikelyZero);
    CHECK(probe_zero(Expr(), 1, 1).status == ProbeStatus::LikelyZero);
    auto nz = probe_zero(z(1), 5, 1);
    CHECK(nz.status == ProbeStatus::NonZero);
    REQUIRE(nz.witness);
    CHECK(std::fabs(eval(z(1), *nz.witness) - nz.value) < 1e-15);
    CHECK_THROWS_AS(probe_zero(z(1), 0, 1), InvalidArgument);
    CHECK_THROWS_AS(probe_zero(parse_expr("sqrt(-1 - z0^2)", t), 10, 1), DomainError);
    CHECK(probe_zero(Expr(rational(1, 1000000000)), 3, 1).status == ProbeStatus::Inconclusive);

    SUBCASE("reciprocals are cleared before deciding") {
        Expr r = parse_expr("(z0 + y0)^-1", t);
        CHECK(r.size() == 1);
        CHECK(is_zero(r * parse_expr("z0 + y0", t) - 1) == ZeroStatus::Zero);
        CHECK(is_zero(diff(r, JetVar::z(0)) + r * r) == ZeroStatus::Zero);
        CHECK(is_zero(r - parse_expr("(2*z0 + 2*y0)^-1", t)) == ZeroStatus::NonZero);
    }
}

TEST_CASE("division") {
    auto t = table();
    Expr a = parse_expr("z0^2 - y0^2", t);
    Expr b = parse_expr("z0 + y0", t);
    auto q = try_divide(a, b);
    REQUIRE(q);
    CHECK(*q == parse_expr("z0 - y0", t));
    CHECK_FALSE(try_divide(parse_expr("z0^2 + y0^2", t), b));
    CHECK(try_divide(a, parse_expr("2*z0", t)) == parse_expr("1/2*z0 - 1/2*y0^2*z0^-1", t));
    Expr r = divide(z(1), b);
    CHECK(is_zero(r * b - z(1)) == ZeroStatus::Zero);
    CHECK_THROWS_AS(divide(z(1), Expr()), DivisionError);
    Expr g = parse_expr("(eta + 1)*z0 + (eta + 1)*y1", t);
    auto q2 = try_divide(g, parse_expr("eta + 1", t));
    REQUIRE(q2);
    CHECK(*q2 == parse_expr("z0 + y1", t));
}

TEST_CASE("evaluation") {
    auto t = table();
    CHECK(eval(parse_expr("z0 + y0", t), point_of({{JetVar::z(0), 1}, {JetVar::y(0), 2}})) == 3.0);
    Expr f32 = parse_expr("z2 - y2 + 2*(z0*y0^2 - y0*z0^2) + eta^2*(z0 - y0) + eta*(z1 + y1)", t);
    Point p = point_of({{JetVar::z(0), 1}, {JetVar::z(1), 0}, {JetVar::z(2), 0},
                        {JetVar::y(0), 2}, {JetVar::y(1), 0}, {JetVar::y(2), 0}},
                       {{"eta", 1.0}});
    CHECK(eval(f32, p) == doctest::Approx(3.0));
    CHECK_THROWS_AS(eval(parse_expr("sqrt(z0)", t), point_of({{JetVar::z(0), -1}})), NumericalDomain);
    CHECK_THROWS_AS(eval(z(0), Point{}), UnboundSymbol);
    CHECK_THROWS_AS(eval(parse_expr("eta", t), Point{}), UnboundSymbol);
    CHECK(eval(parse_expr("sqrt6", t), Point{}) == doctest::Approx(std::sqrt(6.0)));
    CHECK_THROWS_AS(eval(parse_expr("sec(z0)", t), point_of({{JetVar::z(0), std::acos(0.0)}})), NumericalDomain);
}

TEST_CASE("substitution") {
    auto t = table();
    Bindings b;
    b[ParamRef{t.find("eta"), 0}] = Expr(2);
    CHECK(substitute(parse_expr("z0 + eta", t), b) == parse_expr("z0 + 2", t));

    ParamTable withp = table();
    withp.declare("p");
    Bindings bp;
    bp[ParamRef{withp.find("p"), 0}] = parse_expr("eta^2 - 2*z0*y0", t);
    Expr tmpl = parse_expr("z0*p + y0", withp);
    CHECK(substitute(tmpl, bp) == parse_expr("eta^2*z0 - 2*z0^2*y0 + y0", t));

    Bindings swap;
    swap[JetVar::z(0)] = y(0);
    swap[JetVar::y(0)] = z(0);
    CHECK(substitute(parse_expr("z0^2*y0 + sin(z0)", t), swap) == parse_expr("y0^2*z0 + sin(y0)", t));

    Bindings up;
    up[JetVar::z(2)] = total_x(z(1));
    CHECK(substitute(z(2), up) == z(2));
    Bindings over;
    over[JetVar::z(3)] = total_x_extended(z(3));
    CHECK_THROWS_AS(substitute(z(3) + y(0), over), OrderOverflow);
}

TEST_CASE("printing") {
    auto t = table();
    CHECK(parse_expr("-z3 + 6*z0*y0*z1", t).str() == "6*z0*z1*y0 - z3");
    CHECK(Expr().str() == "0");
    CHECK(parse_expr("-1/2*eta", t).str() == "-1/2*eta");
    CHECK(parse_expr("2/(z0+y0)", t).str() == "2*(z0 + y0)^-1");
    CHECK(parse_expr("3/(2*z0+y0)", t).str() == "3/2*(z0 + 1/2*y0)^-1");
    CHECK(parse_expr("sin(z0)^-1", t).str() == "sin(z0)^-1");
}

TEST_CASE("compiled evaluator matches the interpreter") {
    testing::ExprGen gen(11);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::map<std::string, double> params{{"eta", 0.7}, {"alpha", -1.2}};
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
        Expr e = gen.any(4);
        CompiledExpr c(e, params);
        CompiledExpr::Input in{};
        Point p;
        p.params = params;
        for (int k = 0; k <= 2; ++k) {
            in[static_cast<std::size_t>(CompiledExpr::slot(JetVar::z(k)))] = p.jets[JetVar::z(k)] = u(rng);
            in[static_cast<std::size_t>(CompiledExpr::slot(JetVar::y(k)))] = p.jets[JetVar::y(k)] = u(rng);
        }
        in[10] = p.jets[JetVar::x()] = u(rng);
        in[11] = p.jets[JetVar::t()] = u(rng);
        double expected = 0;
        try {
            expected = eval(e, p);
        } catch (const NumericalDomain&) {
            continue;
        }
        double got = c.eval(in);
        CHECK(got == doctest::Approx(expected).epsilon(1e-9));
        ++compared;
    }
    CHECK(compared > 150);
    CHECK_THROWS_AS(CompiledExpr(parse_expr("beta*z0", table()), params), UnboundSymbol);
}

TEST_CASE("property: normalization is idempotent") {
    testing::ExprGen gen(2024);
    for (int i = 0; i < 1000; ++i) {
        Expr e = gen.any(4);
        Expr again = Expr::from_terms(e.terms());
        REQUIRE(again == e);
        REQUIRE(again.str() == e.str());
    }
}

TEST_CASE("property: parse(print(e)) == e") {
    testing::ExprGen gen(99);
    for (int i = 0; i < 1000; ++i) {
        Expr e = gen.any(4);
        Expr back = parse_expr(e.str(), gen.params);
        INFO(e.str());
        REQUIRE(back == e);
    }
}

TEST_CASE("property: mixed partials commute") {
    testing::ExprGen gen(7);
    for (int i = 0; i < 1000; ++i) {
        Expr e = gen.any(3);
        REQUIRE(diff(diff(e, JetVar::z(0)), JetVar::y(0)) == diff(diff(e, JetVar::y(0)), JetVar::z(0)));
    }
}

TEST_CASE("property: Leibniz rule for total_x") {
    testing::ExprGen gen(31);
    for (int i = 0; i < 1000; ++i) {
        Expr a = gen.polynomial(3);
        Expr b = gen.polynomial(3);
        REQUIRE(total_x(a * b) == total_x(a) * b + a * total_x(b));
    }
}

TEST_CASE("property: symbolic derivative matches central differences at second order") {
    testing::ExprGen gen(57);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        JetVar v = gen.pick(2) ? JetVar::z(gen.pick(3)) : JetVar::y(gen.pick(3));
        Expr e = gen.polynomial(3) * Expr::var(v).pow(3) + gen.polynomial(3);
        Expr d = diff(e, v);
        Point p;
        p.params = {{"eta", u(rng)}, {"alpha", u(rng)}};
        for (int k = 0; k <= 2; ++k) {
            p.jets[JetVar::z(k)] = u(rng);
            p.jets[JetVar::y(k)] = u(rng);
        }
        p.jets[JetVar::x()] = u(rng);
        p.jets[JetVar::t()] = u(rng);
        double exact = eval(d, p);
        double errs[3];
        const double hs[3] = {1e-2, 5e-3, 2.5e-3};
        for (int k = 0; k < 3; ++k) {
            Point a = p, b = p;
            a.jets[v] += hs[k];
            b.jets[v] -= hs[k];
            errs[k] = std::fabs((eval(e, a) - eval(e, b)) / (2 * hs[k]) - exact);
        }
        // Skip cases where rounding in the difference quotient rivals the truncation error.
        double rounding = 1e-15 * (std::fabs(eval(e, p)) + 1) / hs[2];
        if (errs[2] < 100 * rounding) continue;
        double order = std::log2(errs[1] / errs[2]);
        INFO(e.str());
        REQUIRE(order >= 1.8);
        REQUIRE(order <= 2.2);
        ++checked;
    }
    CHECK(checked > 500);
}
