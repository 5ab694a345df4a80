#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "json.hpp"
#include "pss/core/system.hpp"
#include "pss/jet/ops.hpp"

namespace pss::core {

using jet::ZeroStatus;

bool check_order_conditions(const AssociatedFunctions& f);

/// Sum of the squared Jacobian determinants of (f11,f21), (f21,f31), (f11,f31) in (z0, y0).
Expr genericity_expr(const AssociatedFunctions& f);
/// f11 f22 - f12 f21.
Expr nondegeneracy_expr(const AssociatedFunctions& f);

/// Residuals of the three structure equations written in jet coordinates, with z0_t = F, y0_t = G.
std::array<Expr, 3> structure_residuals(const EvolutionSystem& sys, const AssociatedFunctions& f);

/// Generic nonvanishing test: NonZero symbolically, or Unknown followed by a numerical witness.
struct GenericityCheck {
    Expr expr;
    ZeroStatus status = ZeroStatus::Zero;
    bool holds = false;
};
GenericityCheck check_generic(const Expr& e, int trials = 50, std::uint64_t seed = 1);

enum class Verdict { DescribesPSS, DescribesSS, Fails };
const char* verdict_name(Verdict v);

struct VerificationReport {
    bool order_ok = false;
    GenericityCheck genericity;
    std::array<Expr, 3> residuals;
    std::array<ZeroStatus, 3> residual_status{};
    GenericityCheck nondegeneracy;
    Verdict verdict = Verdict::Fails;
    std::string reason;
    /// First surviving term of the first nonzero residual, for diagnostics.
    std::string first_nonzero_term;
};

/// `seed` drives the random probes behind the genericity and nondegeneracy checks.
VerificationReport verify_describes(const EvolutionSystem& sys, const AssociatedFunctions& f, std::uint64_t seed = 1);
nlohmann::ordered_json report_to_json(const VerificationReport& r);

/// F and G are linear in (z3, y3) jointly.
bool linearity_check(const EvolutionSystem& sys);

/// Total t-derivative along solutions: z_i,t -> D_x^i F, y_i,t -> D_x^i G, using the order-4 extension.
Expr total_t_on_shell(const Expr& e, const EvolutionSystem& sys);

}  // namespace pss::core
