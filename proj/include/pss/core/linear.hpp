#pragma once

#include <array>

#include "pss/core/system.hpp"

namespace pss::core {

enum class Algebra { sl2R, su2 };
const char* algebra_name(Algebra a);

using Matrix2 = std::array<std::array<ComplexExpr, 2>, 2>;

/// Psi_x = A Psi, Psi_t = B Psi; entries are (real, imaginary) pairs, imaginary parts vanish for sl2R.
struct LinearProblem {
    Matrix2 A;
    Matrix2 B;
    Algebra algebra = Algebra::sl2R;
};

LinearProblem build_linear_problem(const AssociatedFunctions& f);

/// A_t - B_x + AB - BA with A_t taken along solutions of the system.
Matrix2 zero_curvature_residual(const LinearProblem& lp, const EvolutionSystem& sys);
bool is_zero_matrix(const Matrix2& m);

/// Gamma = Psi2/Psi1. For sl2R Gamma is real (symbol "Gamma"); for su2 it is complex with
/// real part "Gamma" and imaginary part "GammaI". Each right-hand side is quadratic in Gamma.
struct RiccatiSystem {
    ComplexExpr gamma_x;
    ComplexExpr gamma_t;
    Algebra algebra = Algebra::sl2R;
    jet::ParamPtr re;
    jet::ParamPtr im;
};

RiccatiSystem build_riccati(const AssociatedFunctions& f);

/// D_t(Gamma_x) - D_x(Gamma_t) after substituting both equations and the system; zero when compatible.
ComplexExpr riccati_cross_residual(const RiccatiSystem& r, const EvolutionSystem& sys);

}  // namespace pss::core
