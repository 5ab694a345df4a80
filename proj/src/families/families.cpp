#include "pss/families/families.hpp"

#include <algorithm>

#include "pss/core/verify.hpp"
#include "pss/error.hpp"
#include "pss/jet/ops.hpp"

namespace pss::families {

using jet::JetVar;

namespace {

bool only_depends_on(const Expr& e, std::initializer_list<JetVar> allowed) {
    for (int i = 0; i <= jet::kExtendedOrder; ++i) {
        for (JetVar v : {JetVar::z(i), JetVar::y(i)}) {
            if (!e.depends_on(v)) continue;
            if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) return false;
        }
    }
    for (JetVar v : {JetVar::x(), JetVar::t()}) {
        if (e.depends_on(v) && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) return false;
    }
    return true;
}

void require_generic(const Expr& e, const std::string& what) {
    if (!core::check_generic(e).holds) throw GenericityViolation(what + " vanishes identically");
}

void require_irreducible(const Expr& F, const Expr& G) {
    auto dz = [](const Expr& e) { return jet::diff(e, JetVar::z(3)); };
    auto dy = [](const Expr& e) { return jet::diff(e, JetVar::y(3)); };
    Expr irr = (dz(F).pow(2) + dz(G).pow(2)) * (dy(F).pow(2) + dy(G).pow(2));
    if (!core::check_generic(irr).holds) {
        throw IrreducibilityViolation("generated system does not involve both z3 and y3");
    }
}

core::SystemDocument assemble(const jet::ParamTable& params, std::string description, Expr F, Expr G,
                              std::array<Expr, 6> fij, int delta) {
    core::SystemDocument doc;
    doc.description = std::move(description);
    doc.params = params;
    doc.system = core::make_system(std::move(F), std::move(G), doc.description);
    doc.fij = {fij[0], fij[1], fij[2], fij[3], fij[4], fij[5], delta};
    return doc;
}

Expr half() { return Expr(jet::rational(1, 2)); }

Expr S() { return jet::z(0).pow(2) + jet::y(0).pow(2); }

}  // namespace

const char* placement_name(Placement p) {
    switch (p) {
        case Placement::F21: return "f21";
        case Placement::F11: return "f11";
        case Placement::F31: return "f31";
    }
    return "?";
}

Placement parse_placement(const std::string& s) {
    if (s == "f21") return Placement::F21;
    if (s == "f11") return Placement::F11;
    if (s == "f31") return Placement::F31;
    throw InvalidArgument("placement must be f21, f11 or f31");
}

core::SystemDocument generate_general(const GeneralFamilyInput& in) {
    if (in.delta != 1 && in.delta != -1) throw InvalidArgument("delta must be +1 or -1");
    const JetVar X = JetVar::x(), T = JetVar::t(), z0 = JetVar::z(0), y0 = JetVar::y(0);
    if (!only_depends_on(in.ell, {X, T})) throw InvalidArgument("ell must depend on (x, t) only");
    if (!only_depends_on(in.g, {X, T, z0, y0}) || !only_depends_on(in.h, {X, T, z0, y0})) {
        throw InvalidArgument("g and h must depend on (x, t, z0, y0) only");
    }
    if (in.P.max_dependent_order() > 2) throw InvalidArgument("P must have jet order at most 2");
    if (in.q.max_dependent_order() > 1) throw InvalidArgument("q must have jet order at most 1");

    const Expr& g = in.g;
    const Expr& h = in.h;
    const Expr& ell = in.ell;
    const Expr& P = in.P;
    const Expr& q = in.q;
    const Expr d(in.delta);

    Expr W = jet::diff(g, z0) * jet::diff(h, y0) - jet::diff(g, y0) * jet::diff(h, z0);
    require_generic(W, "W = g_z0 h_y0 - g_y0 h_z0");

    Expr numerator;
    if (in.placement == Placement::F31) {
        require_generic(jet::total_x(q) - jet::diff(ell, T), "D_x q - ell_t");
        numerator = P * h + d * (jet::total_x(q) - jet::diff(ell, T));
    } else {
        require_generic(ell * P - g * q, "ell P - g q");
        numerator = P * h + jet::total_x(q) - jet::diff(ell, T);
    }

    Expr H;
    if (in.H) {
        if (jet::is_zero(g * *in.H - numerator) != jet::ZeroStatus::Zero) {
            throw InvalidArgument("supplied H does not satisfy g H = numerator");
        }
        H = *in.H;
    } else if (auto quotient = jet::try_divide(numerator, g)) {
        H = *quotient;
    } else {
        throw DivisionError("g does not divide the numerator of H exactly; supply H explicitly");
    }

    Expr c1, c2;
    if (in.placement == Placement::F31) {
        c1 = jet::total_x(P) + h * q - ell * H - jet::diff(g, T);
        c2 = jet::total_x(H) - q * g + ell * P - jet::diff(h, T);
    } else {
        c1 = jet::total_x(P) - h * q + ell * H - jet::diff(g, T);
        c2 = jet::total_x(H) - d * q * g + d * ell * P - jet::diff(h, T);
    }
    Expr F = jet::divide(jet::diff(h, y0) * c1 - jet::diff(g, y0) * c2, W);
    Expr G = jet::divide(-jet::diff(h, z0) * c1 + jet::diff(g, z0) * c2, W);
    require_irreducible(F, G);

    std::array<Expr, 6> fij;
    switch (in.placement) {
        case Placement::F21: fij = {g, P, ell, q, h, H}; break;
        case Placement::F11: fij = {ell, q, g, P, -h, -H}; break;
        case Placement::F31: fij = {g, P, h, H, ell, q}; break;
    }
    return assemble(in.params, in.description, F, G, fij, in.delta);
}

core::SystemDocument generate_kdv_family(const KdVFamilyInput& in) {
    if (in.delta != 1 && in.delta != -1) throw InvalidArgument("delta must be +1 or -1");
    if (!in.eta) throw InvalidArgument("eta parameter is required");
    for (const Expr* e : {&in.a, &in.a1, &in.b1, &in.a2, &in.b2, &in.c}) {
        if (e->max_dependent_order() >= 0 || e->depends_on(JetVar::x()) || e->depends_on(JetVar::t())) {
            throw InvalidArgument("family constants must not depend on jet variables");
        }
    }
    if (!only_depends_on(in.p, {JetVar::z(0), JetVar::y(0)})) throw InvalidArgument("p must depend on (z0, y0) only");
    if (jet::is_zero(in.a) == jet::ZeroStatus::Zero) throw GenericityViolation("a must be nonzero");
    const Expr gamma = in.a1 * in.b2 - in.a2 * in.b1;
    if (jet::is_zero(gamma) == jet::ZeroStatus::Zero) throw GenericityViolation("gamma = a1 b2 - a2 b1 vanishes");

    using jet::y;
    using jet::z;
    const Expr& a = in.a;
    const Expr& p = in.p;
    const Expr eta = Expr::param(in.eta);
    const Expr d(in.delta);
    const Expr q1 = in.a1 * z(0) + in.b1 * y(0);
    const Expr q2 = in.a2 * z(0) + in.b2 * y(0);
    const Expr p_z = jet::diff(p, JetVar::z(0));
    const Expr p_y = jet::diff(p, JetVar::y(0));
    const Expr a_eta_over_gamma = jet::divide(a * eta, gamma);
    const Expr wronskian = z(0) * y(1) - y(0) * z(1);

    Expr F, G;
    std::array<Expr, 6> fij;
    if (in.placement == Placement::F31) {
        Expr q = half() * (q2.pow(2) + q1.pow(2)) + in.c;
        Expr q_z = jet::diff(q, JetVar::z(0));
        Expr q_y = jet::diff(q, JetVar::y(0));
        F = a * z(3) + a * (p + z(0) * p_z - d * y(0) * q_y + eta.pow(2)) * z(1) + z(0) * a * (p_y + d * q_y) * y(1) -
            a_eta_over_gamma * (p + d * q) * q_y;
        G = a * y(3) + y(0) * a * (p_z + d * q_z) * z(1) + a * (p + y(0) * p_y - d * z(0) * q_z + eta.pow(2)) * y(1) +
            a_eta_over_gamma * (p + d * q) * q_z;
        fij = {q1,
               a * in.a1 * z(2) + a * in.b1 * y(2) + a * eta * (in.a2 * z(1) + in.b2 * y(1)) + a * q1 * p,
               q2,
               a * in.a2 * z(2) + a * in.b2 * y(2) - a * eta * (in.a1 * z(1) + in.b1 * y(1)) + a * q2 * p,
               eta,
               d * a * gamma * wronskian - d * a * eta * q};
    } else {
        Expr q = half() * (q2.pow(2) - d * q1.pow(2)) + in.c;
        Expr q_z = jet::diff(q, JetVar::z(0));
        Expr q_y = jet::diff(q, JetVar::y(0));
        F = a * z(3) + a * (y(0) * q_y - d * eta.pow(2) + z(0) * p_z + p) * z(1) + z(0) * a * (p_y - q_y) * y(1) +
            a_eta_over_gamma * (p - q) * q_y;
        G = a * y(3) + y(0) * a * (p_z - q_z) * z(1) + a * (z(0) * q_z - d * eta.pow(2) + y(0) * p_y + p) * y(1) -
            a_eta_over_gamma * (p - q) * q_z;
        Expr P = a * in.a1 * z(2) + a * in.b1 * y(2) - a * eta * (in.a2 * z(1) + in.b2 * y(1)) + a * q1 * p;
        Expr Q = a * gamma * wronskian + a * eta * q;
        Expr R = a * in.a2 * z(2) + a * in.b2 * y(2) - a * d * eta * (in.a1 * z(1) + in.b1 * y(1)) + a * q2 * p;
        if (in.placement == Placement::F21) {
            fij = {q1, P, eta, Q, q2, R};
        } else {
            fij = {eta, Q, q1, P, -q2, -R};
        }
    }
    return assemble(in.params, in.description, F, G, fij, in.delta);
}

core::SystemDocument translate(const core::SystemDocument& doc, const Expr& c1, const Expr& c2) {
    if (!c1.is_constant() && c1.max_dependent_order() >= 0) throw InvalidArgument("translation must be constant");
    if (!c2.is_constant() && c2.max_dependent_order() >= 0) throw InvalidArgument("translation must be constant");
    jet::Bindings b;
    b[JetVar::z(0)] = jet::z(0) + c1;
    b[JetVar::y(0)] = jet::y(0) + c2;
    core::SystemDocument out = doc;
    out.system.F = jet::substitute(doc.system.F, b);
    out.system.G = jet::substitute(doc.system.G, b);
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 2; ++j) out.fij.f(i, j) = jet::substitute(doc.fij.f(i, j), b);
    }
    return out;
}

KdVFamilyInput coupled_kdv_input() {
    KdVFamilyInput in;
    in.eta = in.params.declare("eta");
    Expr eta = Expr::param(in.eta);
    in.delta = 1;
    in.a = Expr(-1);
    in.a1 = Expr(1);
    in.b1 = Expr(1);
    in.a2 = Expr(-1);
    in.b2 = Expr(1);
    in.c = eta.pow(2);
    in.p = eta.pow(2) - Expr(2) * jet::z(0) * jet::y(0);
    in.placement = Placement::F21;
    in.description = "coupled KdV-type system";
    return in;
}

core::SystemDocument nls_family(const jet::Rational& k, int delta) {
    if (sgn(k) <= 0) throw InvalidArgument("k must be positive");
    if (delta != 1 && delta != -1) throw InvalidArgument("delta must be +1 or -1");
    GeneralFamilyInput in;
    auto alpha = Expr::param(in.params.declare("alpha", true));
    auto beta = Expr::param(in.params.declare("beta", true));
    auto eta = Expr::param(in.params.declare("eta"));
    Expr root;
    mpz_class num_root, den_root;
    mpz_sqrt(num_root.get_mpz_t(), k.get_num_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), k.get_den_mpz_t());
    if (num_root * num_root == k.get_num() && den_root * den_root == k.get_den()) {
        root = Expr(jet::Rational(num_root, den_root));
    } else {
        root = Expr::param(in.params.declare("sqrtk", false, jet::Reduction{2, k}));
    }
    using jet::y;
    using jet::z;
    const Expr d(delta);
    const Expr kk(k);
    Expr f11 = root * (z(0) + y(0));
    Expr f21 = root * (y(0) - z(0));
    Expr common = eta * alpha + eta.pow(2) * beta + d * beta * kk * S();
    in.ell = eta;
    in.g = f11;
    in.h = f21;
    in.P = -beta * root * (y(2) + z(2)) - root * (beta * eta + alpha) * (y(1) - z(1)) + f11 * common;
    in.q = Expr(2) * d * kk * beta * (y(0) * z(1) - z(0) * y(1)) + (eta * beta + alpha) * (d * kk * S() + eta.pow(2));
    in.delta = delta;
    in.placement = Placement::F31;
    in.description = "nonlinear Schrodinger-type system, k = " + k.get_str() + ", delta = " + std::to_string(delta);
    return generate_general(in);
}

core::SystemDocument mkdv_family(int delta) {
    KdVFamilyInput in;
    auto alpha = Expr::param(in.params.declare("alpha"));
    in.eta = in.params.declare("eta");
    auto sqrt6 = Expr::param(in.params.declare("sqrt6", false, jet::Reduction{2, 6}));
    Expr eta = Expr::param(in.eta);
    const Expr d(delta);
    in.delta = delta;
    in.a = Expr(-1);
    in.a1 = sqrt6 * alpha * Expr(jet::rational(1, 3));
    in.b2 = in.a1;
    in.b1 = Expr();
    in.a2 = Expr();
    in.c = d * eta.pow(2);
    in.p = -d * alpha.pow(2) * S() * Expr(jet::rational(1, 3)) - eta.pow(2);
    in.placement = Placement::F31;
    in.description = std::string("mKdV-type system, delta = ") + std::to_string(delta);
    return generate_kdv_family(in);
}

namespace {

struct Spec {
    const char* name;
    const char* description;
    int delta;
    const char* F;
    const char* G;
    const char* f[6];
};

// S stands for (z0^2 + y0^2) and is expanded before parsing.
const Spec kSpecs[] = {
    {"nlse", "nonlinear Schrodinger equation", 1,
     "-y2 + 2*S*y0", "z2 - 2*S*z0",
     {"2*z0", "-4*eta*z0 - 2*y1", "-2*y0", "4*eta*y0 - 2*z1", "2*eta", "-4*eta^2 - 2*S"}},
    {"3nls+", "third-order nonlinear Schrodinger system (focusing sign)", -1,
     "-alpha*y2 - alpha*S*y0 - beta*z3 - 3*beta*S*z1",
     "alpha*z2 + alpha*S*z0 - beta*y3 - 3*beta*S*y1",
     {"z0 + y0",
      "-beta*(y2 + z2) - (beta*eta + alpha)*(y1 - z1) + (z0 + y0)*(beta*(eta^2 - S) + eta*alpha)",
      "y0 - z0",
      "-beta*(y2 - z2) + (beta*eta + alpha)*(z1 + y1) + (y0 - z0)*(beta*(eta^2 - S) + eta*alpha)",
      "eta",
      "-2*beta*(y0*z1 - z0*y1) + (beta*eta + alpha)*(eta^2 - S)"}},
    {"3nls-", "third-order nonlinear Schrodinger system (defocusing sign)", 1,
     "-alpha*y2 + alpha*S*y0 - beta*z3 + 3*beta*S*z1",
     "alpha*z2 - alpha*S*z0 - beta*y3 + 3*beta*S*y1",
     {"z0 + y0",
      "-beta*(y2 + z2) - (beta*eta + alpha)*(y1 - z1) + (z0 + y0)*(beta*(eta^2 + S) + eta*alpha)",
      "y0 - z0",
      "-beta*(y2 - z2) + (beta*eta + alpha)*(z1 + y1) + (y0 - z0)*(beta*(eta^2 + S) + eta*alpha)",
      "eta",
      "2*beta*(y0*z1 - z0*y1) + (beta*eta + alpha)*(eta^2 + S)"}},
    {"mkdv+", "mKdV-type system, delta = 1", 1,
     "-z3 + alpha^2*S*z1", "-y3 + alpha^2*S*y1",
     {"sqrt6/3*alpha*z0",
      "-sqrt6/3*alpha*(z2 + eta*y1) + sqrt6/9*alpha*z0*(alpha^2*S + 3*eta^2)",
      "sqrt6/3*alpha*y0",
      "-sqrt6/3*alpha*(y2 - eta*z1) + sqrt6/9*alpha*y0*(alpha^2*S + 3*eta^2)",
      "eta",
      "2/3*alpha^2*(y0*z1 - z0*y1) + eta/3*(alpha^2*S + 3*eta^2)"}},
    {"mkdv-", "mKdV-type system, delta = -1", -1,
     "-z3 - alpha^2*S*z1", "-y3 - alpha^2*S*y1",
     {"sqrt6/3*alpha*z0",
      "-sqrt6/3*alpha*(z2 + eta*y1) - sqrt6/9*alpha*z0*(alpha^2*S - 3*eta^2)",
      "sqrt6/3*alpha*y0",
      "-sqrt6/3*alpha*(y2 - eta*z1) - sqrt6/9*alpha*y0*(alpha^2*S - 3*eta^2)",
      "eta",
      "2/3*alpha^2*(z0*y1 - y0*z1) - eta/3*(alpha^2*S - 3*eta^2)"}},
    {"coupled-kdv", "coupled KdV-type system", 1,
     "-z3 + 6*z0*y0*z1", "-y3 + 6*z0*y0*y1",
     {"z0 + y0",
      "-z2 - y2 + 2*(y0*z0^2 + z0*y0^2) - eta^2*(z0 + y0) + eta*(y1 - z1)",
      "eta",
      "-eta^3 + 2*(y0*z1 - z0*y1) + 2*eta*z0*y0",
      "y0 - z0",
      "z2 - y2 + 2*(z0*y0^2 - y0*z0^2) + eta^2*(z0 - y0) + eta*(z1 + y1)"}},
};

std::string expand_S(std::string s) {
    std::string out;
    for (char c : s) {
        if (c == 'S') {
            out += "(z0^2 + y0^2)";
        } else {
            out += c;
        }
    }
    return out;
}

jet::ParamTable params_for(const std::string& name) {
    jet::ParamTable t;
    t.declare("eta");
    if (name == "3nls+" || name == "3nls-") {
        t.declare("alpha", true);
        t.declare("beta", true);
    } else if (name == "mkdv+" || name == "mkdv-") {
        t.declare("alpha");
        t.declare("sqrt6", false, jet::Reduction{2, 6});
    }
    return t;
}

std::vector<CatalogEntry> build_catalog() {
    std::vector<CatalogEntry> out;
    for (const auto& s : kSpecs) {
        CatalogEntry e;
        e.name = s.name;
        e.doc.description = s.description;
        e.doc.params = params_for(s.name);
        e.doc.system = core::make_system(jet::parse_expr(expand_S(s.F), e.doc.params),
                                         jet::parse_expr(expand_S(s.G), e.doc.params), s.description);
        for (int k = 0; k < 6; ++k) {
            e.doc.fij.f(k / 2 + 1, k % 2 + 1) = jet::parse_expr(expand_S(s.f[k]), e.doc.params);
        }
        e.doc.fij.delta = s.delta;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build_catalog();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog()) {
        if (e.name == name) return e;
    }
    throw InvalidArgument("no catalog entry named '" + name + "'");
}

}  // namespace pss::families
