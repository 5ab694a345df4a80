#pragma once

#include <random>

#include "pss/families/families.hpp"
#include "pss/jet/ops.hpp"

namespace pss::testing {

// Random family inputs: rational coefficients n/d with |n/d| <= 3, fixed seeds in the callers.
struct FamilyGen {
    std::mt19937_64 rng;

    explicit FamilyGen(std::uint64_t seed) : rng(seed) {}

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    jet::Expr rat() {
        int d = pick(1, 3);
        return jet::Expr(jet::rational(pick(-3 * d, 3 * d), d));
    }

    jet::Expr nonzero_rat() {
        for (;;) {
            jet::Expr r = rat();
            if (!r.is_zero()) return r;
        }
    }

    // Random polynomial of total degree <= 2 in (z0, y0).
    jet::Expr quadratic_z0y0() {
        using jet::y;
        using jet::z;
        return rat() * z(0).pow(2) + rat() * z(0) * y(0) + rat() * y(0).pow(2) + rat() * z(0) + rat() * y(0) + rat();
    }

    families::KdVFamilyInput kdv(families::Placement placement) {
        families::KdVFamilyInput in;
        in.eta = in.params.declare("eta");
        in.placement = placement;
        in.delta = pick(0, 1) ? 1 : -1;
        in.a = nonzero_rat();
        do {
            in.a1 = rat();
            in.b1 = rat();
            in.a2 = rat();
            in.b2 = rat();
        } while ((in.a1 * in.b2 - in.a2 * in.b1).is_zero());
        in.c = pick(0, 1) ? rat() : rat() * jet::Expr::param(in.eta).pow(2);
        in.p = quadratic_z0y0();
        in.description = "random KdV-type family instance";
        return in;
    }

    families::GeneralFamilyInput general(families::Placement placement) {
        using jet::xvar;
        using jet::tvar;
        using jet::y;
        using jet::z;
        families::GeneralFamilyInput in;
        in.params.declare("eta");
        in.placement = placement;
        in.delta = pick(0, 1) ? 1 : -1;
        // g = c z0 divides every term of the numerator once m_x = ell_t.
        in.g = nonzero_rat() * z(0);
        in.h = rat() * z(0) + nonzero_rat() * y(0) + rat() * xvar();
        jet::Expr l0 = rat(), l1 = rat(), l2 = nonzero_rat();
        in.ell = l0 + l1 * tvar() + l2 * xvar() * tvar() + jet::Expr::param(in.params.find("eta"));
        jet::Expr m = l1 * xvar() + l2 * jet::Expr(jet::rational(1, 2)) * xvar().pow(2);
        jet::Expr P1 = nonzero_rat() * z(2) + nonzero_rat() * y(2) + rat() * z(1) * y(0) + rat() * y(1) + rat();
        in.P = z(0) * P1;
        jet::Expr Q1 = nonzero_rat() * z(1) + rat() * y(1) + rat() * y(0) + rat();
        in.q = z(0).pow(2) * Q1 + m;
        in.description = "random general family instance";
        return in;
    }
};

}  // namespace pss::testing
