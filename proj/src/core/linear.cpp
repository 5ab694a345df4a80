#include "pss/core/linear.hpp"

#include "pss/core/verify.hpp"
#include "pss/jet/ops.hpp"

namespace pss::core {

namespace {

ComplexExpr operator+(const ComplexExpr& a, const ComplexExpr& b) { return {a.re + b.re, a.im + b.im}; }
ComplexExpr operator-(const ComplexExpr& a, const ComplexExpr& b) { return {a.re - b.re, a.im - b.im}; }
ComplexExpr operator*(const ComplexExpr& a, const ComplexExpr& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
ComplexExpr half(const Expr& re, const Expr& im) {
    Expr h(jet::rational(1, 2));
    return {h * re, h * im};
}

Matrix2 sl2(const Expr& a, const Expr& b, const Expr& c) {
    // (1/2)(a, b - c; b + c, -a)
    return {{{half(a, 0), half(b - c, 0)}, {half(b + c, 0), half(-a, 0)}}};
}

Matrix2 su2(const Expr& a, const Expr& b, const Expr& c) {
    // (1/2)(i a, b + i c; -b + i c, -i a)
    return {{{half(0, a), half(b, c)}, {half(-b, c), half(0, -a)}}};
}

Matrix2 mul(const Matrix2& a, const Matrix2& b) {
    Matrix2 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    }
    return out;
}

ComplexExpr map(const ComplexExpr& z, Expr (*op)(const Expr&)) { return {op(z.re), op(z.im)}; }

Expr dx_ext(const Expr& e) { return jet::total_x_extended(e, jet::kExtendedOrder); }

}  // namespace

const char* algebra_name(Algebra a) { return a == Algebra::sl2R ? "sl2R" : "su2"; }

LinearProblem build_linear_problem(const AssociatedFunctions& f) {
    LinearProblem lp;
    if (f.delta == 1) {
        lp.algebra = Algebra::sl2R;
        lp.A = sl2(f.f21, f.f11, f.f31);
        lp.B = sl2(f.f22, f.f12, f.f32);
    } else {
        lp.algebra = Algebra::su2;
        lp.A = su2(f.f21, f.f11, f.f31);
        lp.B = su2(f.f22, f.f12, f.f32);
    }
    return lp;
}

Matrix2 zero_curvature_residual(const LinearProblem& lp, const EvolutionSystem& sys) {
    Matrix2 ab = mul(lp.A, lp.B);
    Matrix2 ba = mul(lp.B, lp.A);
    Matrix2 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            ComplexExpr at{total_t_on_shell(lp.A[i][j].re, sys), total_t_on_shell(lp.A[i][j].im, sys)};
            out[i][j] = at - map(lp.B[i][j], dx_ext) + ab[i][j] - ba[i][j];
        }
    }
    return out;
}

bool is_zero_matrix(const Matrix2& m) {
    for (const auto& row : m) {
        for (const auto& z : row) {
            if (jet::is_zero(z.re) != ZeroStatus::Zero || jet::is_zero(z.im) != ZeroStatus::Zero) return false;
        }
    }
    return true;
}

RiccatiSystem build_riccati(const AssociatedFunctions& f) {
    RiccatiSystem r;
    r.re = std::make_shared<const jet::ParamSymbol>(jet::ParamSymbol{"Gamma", false, std::nullopt});
    Expr half_(jet::rational(1, 2));
    if (f.delta == 1) {
        r.algebra = Algebra::sl2R;
        Expr g = Expr::param(r.re);
        auto rhs = [&](const Expr& a, const Expr& b, const Expr& c) {
            return half_ * (a + c) - b * g + half_ * (c - a) * g * g;
        };
        r.gamma_x = {rhs(f.f11, f.f21, f.f31), Expr()};
        r.gamma_t = {rhs(f.f12, f.f22, f.f32), Expr()};
    } else {
        // From Psi_x = A Psi with the su2 matrix: Gamma_x = A21 + (A22 - A11) Gamma - A12 Gamma^2.
        r.algebra = Algebra::su2;
        r.im = std::make_shared<const jet::ParamSymbol>(jet::ParamSymbol{"GammaI", false, std::nullopt});
        ComplexExpr g{Expr::param(r.re), Expr::param(r.im)};
        auto rhs = [&](const Expr& a, const Expr& b, const Expr& c) {
            return half(-b, c) + ComplexExpr{0, -a} * g - half(b, c) * g * g;
        };
        r.gamma_x = rhs(f.f21, f.f11, f.f31);
        r.gamma_t = rhs(f.f22, f.f12, f.f32);
    }
    return r;
}

ComplexExpr riccati_cross_residual(const RiccatiSystem& r, const EvolutionSystem& sys) {
    jet::ParamRef gr{r.re, 0};
    auto along = [&](const Expr& e, const ComplexExpr& flow) {
        Expr out = jet::diff(e, gr) * flow.re;
        if (r.im) out += jet::diff(e, jet::ParamRef{r.im, 0}) * flow.im;
        return out;
    };
    auto dx = [&](const Expr& e) { return dx_ext(e) + along(e, r.gamma_x); };
    auto dt = [&](const Expr& e) { return total_t_on_shell(e, sys) + along(e, r.gamma_t); };
    return {dt(r.gamma_x.re) - dx(r.gamma_t.re), dt(r.gamma_x.im) - dx(r.gamma_t.im)};
}

}  // namespace pss::core
