#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>

#include "pss/jet/compiled.hpp"
#include "pss/jet/expr.hpp"
#include "pss/numerics/grid.hpp"

namespace pss::numerics {

enum class Provenance { ClosedForm, Array };

/// u, v and their derivatives at one point: u[k] = d^k u / dx^k.
struct JetSample {
    std::array<double, 4> u{}, v{};
    double u_t = 0.0, v_t = 0.0;
    double x = 0.0, t = 0.0;
    bool valid = true;

    /// Layout expected by jet::CompiledExpr.
    jet::CompiledExpr::Input input() const;
};

/// A pair (u, v) sampled on a grid. Closed-form samples keep the expressions and
/// differentiate them symbolically; array samples use second-order finite differences.
class SampledSolution {
public:
    SampledSolution() = default;

    /// u, v must depend on x, t only. Points where evaluation fails are masked.
    static SampledSolution closed_form(const Grid& g, const jet::Expr& u, const jet::Expr& v,
                                       const std::map<std::string, double>& params = {});
    /// Mask may be empty (nothing masked).
    static SampledSolution from_arrays(const Grid& g, std::vector<double> u, std::vector<double> v, Mask mask = {});

    const Grid& grid() const { return grid_; }
    Provenance provenance() const { return closed_ ? Provenance::ClosedForm : Provenance::Array; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& v() const { return v_; }
    const Mask& mask() const { return mask_; }
    bool masked(std::size_t k) const { return mask_[k] != 0; }
    double mask_fraction() const;

    /// Masks points where |e(x, t)| < threshold (or e fails to evaluate), then dilates by one cell.
    void mask_small(const jet::Expr& e, double threshold, const std::map<std::string, double>& params = {});
    void mask_points(const Mask& extra);

    JetSample jet(int i, int j) const;
    /// Anywhere in the grid rectangle: exact for closed forms, bilinear in the FD jets otherwise.
    JetSample jet_at(double x, double t) const;

    /// Closed-form expressions (null Expr for arrays).
    const jet::Expr& u_expr() const;
    const jet::Expr& v_expr() const;

private:
    struct Closed {
        jet::Expr u, v;
        std::array<jet::CompiledExpr, 4> du, dv;
        jet::CompiledExpr ut, vt;
        std::size_t scratch = 0;
        JetSample eval(double x, double t) const;
    };
    struct Derivs {
        std::array<std::vector<double>, 4> du, dv;
        std::vector<double> ut, vt;
        Mask bad;
    };
    void build_derivs();

    Grid grid_;
    std::vector<double> u_, v_;
    Mask mask_;
    std::shared_ptr<const Closed> closed_;
    std::shared_ptr<const Derivs> derivs_;
};

}  // namespace pss::numerics
