#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pss/core/system.hpp"

namespace pss::families {

using jet::Expr;

/// Which associated function equals the (x,t)-only function ell.
enum class Placement { F21, F11, F31 };
const char* placement_name(Placement p);
Placement parse_placement(const std::string& s);

struct GeneralFamilyInput {
    Expr ell;  // (x, t)
    Expr g;    // (x, t, z0, y0)
    Expr h;    // (x, t, z0, y0)
    Expr P;    // jet order <= 2
    Expr q;    // jet order <= 1
    int delta = 1;
    Placement placement = Placement::F21;
    /// Caller-supplied quotient for H when g does not divide the numerator exactly.
    std::optional<Expr> H;
    jet::ParamTable params;
    std::string description;
};

/// Builds the system and f_ij determined by (ell, g, h, P, q).
/// Throws GenericityViolation, IrreducibilityViolation, DivisionError or InvalidArgument.
core::SystemDocument generate_general(const GeneralFamilyInput& in);

/// Coupled KdV-type family with q_i = a_i z0 + b_i y0 and an arbitrary p(z0, y0).
struct KdVFamilyInput {
    Expr a = Expr(-1);
    Expr a1, b1, a2, b2, c;
    Expr p;
    jet::ParamPtr eta;
    int delta = 1;
    Placement placement = Placement::F21;
    jet::ParamTable params;
    std::string description;
};

core::SystemDocument generate_kdv_family(const KdVFamilyInput& in);

/// (z0, y0) -> (z0 + c1, y0 + c2) applied to F, G and every f_ij.
core::SystemDocument translate(const core::SystemDocument& doc, const Expr& c1, const Expr& c2);

/// Parameters that reproduce the coupled KdV example from the f21/f11 family.
KdVFamilyInput coupled_kdv_input();
/// Nonlinear Schrodinger-type family with coupling k > 0 (f31 = eta placement).
core::SystemDocument nls_family(const jet::Rational& k, int delta);
/// mKdV-type family z0_t = -z3 + delta alpha^2 (z0^2 + y0^2) z1 (f31 = eta placement).
core::SystemDocument mkdv_family(int delta);

struct CatalogEntry {
    std::string name;
    core::SystemDocument doc;
};

/// nlse, 3nls+, 3nls-, mkdv+, mkdv-, coupled-kdv.
const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);

}  // namespace pss::families
