#pragma once

#include <map>
#include <string>

#include "pss/core/linear.hpp"
#include "pss/core/system.hpp"
#include "pss/numerics/exec.hpp"
#include "pss/numerics/solution.hpp"

namespace pss::numerics {

using ParamValues = std::map<std::string, double>;

/// Pointwise max(|u_t - F|, |v_t - G|).
struct Residual {
    Field field;
    Stats stats;
};
Residual pde_residual(const core::EvolutionSystem& sys, const SampledSolution& sol, const ParamValues& params = {},
                      Exec exec = Exec::Parallel);

/// First fundamental form ω1² + ω2² pulled back along the solution.
struct MetricField {
    Field E, F, G;
};
/// Array solutions: points whose x-derivatives need one-sided stencils are masked.
MetricField metric_field(const core::AssociatedFunctions& f, const SampledSolution& sol,
                         const ParamValues& params = {}, Exec exec = Exec::Parallel);

inline constexpr double kDegeneracyThreshold = 1e-8;

/// Brioschi formula with centered differences. The boundary ring and points with
/// EG - F² <= degeneracy are masked (never fatal).
struct Curvature {
    Field K;
    Mask degenerate;  // points masked because EG - F² <= threshold
};
Curvature gaussian_curvature(const MetricField& m, double degeneracy = kDegeneracyThreshold,
                             Exec exec = Exec::Parallel);

/// Per plaquette: ||T_t(x1) T_x(t0) - T_x(t1) T_t(x0)|| / (dx dt), each edge one RK4 step,
/// norms are spectral norms of the real 4x4 representation.
struct Holonomy {
    Field defect;  // (nx - 1) x (nt - 1) plaquettes, indexed by their centers
    Stats stats;
};
Holonomy holonomy_defect(const core::LinearProblem& lp, const SampledSolution& sol, const ParamValues& params = {},
                         Exec exec = Exec::Parallel);

}  // namespace pss::numerics
