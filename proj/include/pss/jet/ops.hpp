#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "pss/jet/expr.hpp"

namespace pss::jet {

/// Partial derivative. For v = t, time-dependent parameters differentiate to their derivative symbol.
Expr diff(const Expr& e, JetVar v);
/// Partial derivative with respect to one parameter occurrence (other occurrences independent).
Expr diff(const Expr& e, const ParamRef& p);

/// D_x = d/dx + sum z_{i+1} d/dz_i + y_{i+1} d/dy_i. Throws OrderOverflow on third-order input.
Expr total_x(const Expr& e);
/// Same, but allows the result to reach `max_order` (used only for on-shell prolongation).
Expr total_x_extended(const Expr& e, int max_order = kExtendedOrder);

using Bindings = std::map<Atom, Expr, AtomLess>;

/// Simultaneous substitution followed by normalization; result order is capped at `max_order`.
Expr substitute(const Expr& e, const Bindings& b, int max_order = kMaxOrder);

/// Multiplies out every reciprocal atom, returning a numerator N with e = N / D, D a product of
/// nonvanishing denominators. N is zero exactly when e is.
Expr numerator(const Expr& e);

/// Exact quotient when one exists (monomial divisors always divide in the Laurent sense).
std::optional<Expr> try_divide(const Expr& a, const Expr& b);
/// Exact quotient if possible, otherwise a * recip(b).
Expr divide(const Expr& a, const Expr& b);

enum class ZeroStatus { Zero, NonZero, Unknown };
ZeroStatus is_zero(const Expr& e);

/// Numeric values for jet variables and parameters (parameters keyed by ParamRef::name()).
struct Point {
    std::map<JetVar, double> jets;
    std::map<std::string, double> params;
};

/// Parameters with a reduction rule and no binding evaluate to their positive root.
double eval(const Expr& e, const Point& p);

enum class ProbeStatus { LikelyZero, NonZero, Inconclusive };

struct ProbeResult {
    ProbeStatus status = ProbeStatus::LikelyZero;
    std::optional<Point> witness;
    double value = 0.0;       // value at the witness, or largest magnitude seen
    int evaluated = 0;        // trials that avoided a domain violation
};

inline constexpr double kProbeZeroTol = 1e-10;
inline constexpr double kProbeNonZeroTol = 1e-8;

/// Random-point zero test; values in `fixed` are held, everything else is uniform in [-2, 2].
ProbeResult probe_zero(const Expr& e, int trials, std::uint64_t seed, const Point& fixed = {});

/// Every parameter occurrence (including derivative symbols), keyed by name.
std::map<std::string, ParamRef> collect_params(const Expr& e);

}  // namespace pss::jet
