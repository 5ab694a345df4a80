#pragma once

#include <array>
#include <string>

#include "pss/jet/expr.hpp"
#include "pss/jet/parser.hpp"

namespace pss::core {

using jet::Expr;

/// z0_t = F, y0_t = G.
struct EvolutionSystem {
    Expr F;
    Expr G;
    std::string description;
};

/// Throws OrderOverflow if F or G leave the third-order jet.
EvolutionSystem make_system(Expr F, Expr G, std::string description = {});

/// Coefficients of the forms w_i = f_i1 dx + f_i2 dt, with delta the sign of dw3 = delta w1^w2.
struct AssociatedFunctions {
    Expr f11, f12, f21, f22, f31, f32;
    int delta = 1;

    /// f(i, j) with i in 1..3, j in 1..2.
    const Expr& f(int i, int j) const;
    Expr& f(int i, int j);
};

/// Everything needed to reproduce a system: parameter declarations, F, G and the f_ij.
struct SystemDocument {
    std::string description;
    jet::ParamTable params;
    EvolutionSystem system;
    AssociatedFunctions fij;
};

/// Metric coefficients E = f11^2 + f21^2, F = f11 f12 + f21 f22, G = f12^2 + f22^2.
struct Metric {
    Expr E, F, G;
};
Metric metric_coefficients(const AssociatedFunctions& f);

struct ComplexExpr {
    Expr re;
    Expr im;
};

}  // namespace pss::core
