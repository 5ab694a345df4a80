#pragma once

#include <optional>
#include <vector>

#include "pss/jet/expr.hpp"
#include "pss/numerics/exec.hpp"
#include "pss/numerics/grid.hpp"
#include "pss/numerics/solution.hpp"

// Bäcklund transformation for u_t = -u_xxx + 6uvu_x, v_t = -v_xxx + 6uvv_x.
namespace pss::backlund {

using numerics::Exec;
using numerics::Grid;
using numerics::Mask;
using numerics::SampledSolution;

struct BTParams {
    double lambda1 = 1.0;
    double lambda2 = 0.0;
    int sigma = 1;
    double k1 = 0.0, k2 = 0.0;

    /// Throws InvalidArgument when lambda1 == 0, sigma is not ±1, or a value is not finite.
    void validate() const;
};

inline constexpr double kMaskThreshold = 1e-3;
inline constexpr double kBlowUp = 1e6;
inline constexpr double kRadicandTolerance = 1e-10;

/// xi1 = λ1 x + (λ1³ - 3λ1λ2²) t + k1,  xi2 = -λ2 x + (λ2³ - 3λ2λ1²) t + k2.
jet::Expr xi1(const BTParams& p);
jet::Expr xi2(const BTParams& p);

/// Closed forms obtained from the vacuum u = v = 0.
jet::Expr vacuum_u(const BTParams& p);
jet::Expr vacuum_v(const BTParams& p);
/// Closed forms obtained from u = 0, v = 1 (sigma unused).
jet::Expr u0v1_u(const BTParams& p);
jet::Expr u0v1_v(const BTParams& p);
/// Constants k1, k2 (and sigma = 1 for the vacuum) whose closed-form pseudopotential takes the
/// value (phi, psi) at (x, t); nullopt when no such constants exist.
std::optional<BTParams> fit_vacuum(const BTParams& p, double x, double t, double phi, double psi);
std::optional<BTParams> fit_u0v1(const BTParams& p, double x, double t, double phi, double psi);
/// Pseudopotentials for u = 0, v = 1.
jet::Expr u0v1_phi(const BTParams& p);
jet::Expr u0v1_psi(const BTParams& p);

/// Samples the vacuum family; masks |cos xi1| < threshold (dilated by one cell).
/// Throws EmptyMask when nothing survives.
SampledSolution bt_vacuum(const BTParams& p, const Grid& g, double threshold = kMaskThreshold);
/// Samples the u = 0, v = 1 family; masks |λ1 + e^xi2 sin xi1| < threshold.
SampledSolution bt_u0v1(const BTParams& p, const Grid& g, double threshold = kMaskThreshold);

/// Right-hand sides of the real Riccati system for (phi, psi) given the seed jet.
struct PhiPsiRate {
    double phi = 0.0, psi = 0.0;
};
PhiPsiRate phipsi_x(const numerics::JetSample& s, double phi, double psi, double l1, double l2);
PhiPsiRate phipsi_t(const numerics::JetSample& s, double phi, double psi, double l1, double l2);

struct PseudopotentialField {
    Grid grid;
    std::vector<double> phi, psi;
    Mask mask;
    /// max(|phi_t - rhs|, |psi_t - rhs|) with phi_t from a 5-point centered difference
    /// of the integrated field (masked where the stencil does not fit).
    numerics::Field defect;
    numerics::Stats defect_stats;
};

struct IntegrationOptions {
    double blowup = kBlowUp;
    Exec exec = Exec::Parallel;
};

/// RK4 along t at x = x0, then along x on every row. (phi0, psi0) sits at the grid origin.
/// Throws InvalidArgument, BlowUp (|phi| or |psi| above the limit) or MaskCollision (psi hits 0).
PseudopotentialField integrate_pseudopotential(const SampledSolution& seed, const BTParams& p, double phi0,
                                               double psi0, const IntegrationOptions& opt = {});

/// u' = u + λ1/psi, v' = v + λ1(phi² + psi²)/psi. λ1 == 0 returns the seed values with a warning.
SampledSolution bt_transform(const SampledSolution& seed, const PseudopotentialField& pp, double lambda1);

/// Per-point sign choice for the square root in the first-order system (0 where undetermined).
using Branch = std::vector<int>;
/// sign(phi (u' - u)).
Branch branch_from_pseudopotential(const PseudopotentialField& pp, double lambda1);
/// sign(λ1 tan xi1) for the vacuum family.
Branch vacuum_branch(const BTParams& p, const Grid& g);
/// sign(phi (u' - u)) with the closed-form phi for the u = 0, v = 1 family.
Branch u0v1_branch(const BTParams& p, const Grid& g);

struct BTResidual {
    numerics::Field field;  // max over the four equations
    numerics::Stats stats;
};

/// Residual of the four first-order equations relating (u, v) and (u', v').
/// Throws BranchViolation where (u'-u)(v'-v) - λ1² < -kRadicandTolerance.
BTResidual bt_first_order_residual(const SampledSolution& seed, const SampledSolution& transformed,
                                   const BTParams& p, const Branch& branch, Exec exec = Exec::Parallel);
/// The same system specialised to a vanishing seed.
BTResidual bt_trivial_residual(const SampledSolution& transformed, const BTParams& p, const Branch& branch,
                               Exec exec = Exec::Parallel);

}  // namespace pss::backlund
