#include "pss/core/verify.hpp"

#include "pss/error.hpp"

namespace pss::core {

using jet::JetVar;

namespace {

const char* status_name(ZeroStatus s) {
    switch (s) {
        case ZeroStatus::Zero: return "zero";
        case ZeroStatus::NonZero: return "nonzero";
        case ZeroStatus::Unknown: return "unknown";
    }
    return "?";
}

Expr jacobian(const Expr& a, const Expr& b) {
    return jet::diff(a, JetVar::z(0)) * jet::diff(b, JetVar::y(0)) -
           jet::diff(a, JetVar::y(0)) * jet::diff(b, JetVar::z(0));
}

// -f_z0 F - f_y0 G - f_t: minus the time derivative of a first-order coefficient along solutions.
Expr minus_dt(const Expr& f, const EvolutionSystem& sys) {
    return -(jet::diff(f, JetVar::z(0)) * sys.F) - jet::diff(f, JetVar::y(0)) * sys.G - jet::diff(f, JetVar::t());
}

}  // namespace

bool check_order_conditions(const AssociatedFunctions& f) {
    for (int i = 1; i <= 3; ++i) {
        for (int k = 1; k <= 3; ++k) {
            if (f.f(i, 1).depends_on(JetVar::z(k)) || f.f(i, 1).depends_on(JetVar::y(k))) return false;
        }
        if (f.f(i, 2).depends_on(JetVar::z(3)) || f.f(i, 2).depends_on(JetVar::y(3))) return false;
    }
    return true;
}

Expr genericity_expr(const AssociatedFunctions& f) {
    return jacobian(f.f11, f.f21).pow(2) + jacobian(f.f21, f.f31).pow(2) + jacobian(f.f11, f.f31).pow(2);
}

Expr nondegeneracy_expr(const AssociatedFunctions& f) { return f.f11 * f.f22 - f.f12 * f.f21; }

std::array<Expr, 3> structure_residuals(const EvolutionSystem& sys, const AssociatedFunctions& f) {
    Expr r1 = minus_dt(f.f11, sys) + jet::total_x(f.f12) - f.f31 * f.f22 + f.f32 * f.f21;
    Expr r2 = minus_dt(f.f21, sys) + jet::total_x(f.f22) - f.f11 * f.f32 + f.f12 * f.f31;
    Expr r3 = minus_dt(f.f31, sys) + jet::total_x(f.f32) - Expr(f.delta) * nondegeneracy_expr(f);
    return {r1, r2, r3};
}

GenericityCheck check_generic(const Expr& e, int trials, std::uint64_t seed) {
    GenericityCheck c;
    c.expr = e;
    c.status = jet::is_zero(e);
    if (c.status == ZeroStatus::NonZero) {
        c.holds = true;
    } else if (c.status == ZeroStatus::Unknown) {
        try {
            c.holds = jet::probe_zero(e, trials, seed).status == jet::ProbeStatus::NonZero;
        } catch (const DomainError&) {
            c.holds = false;
        }
    }
    return c;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::DescribesPSS: return "DescribesPSS";
        case Verdict::DescribesSS: return "DescribesSS";
        case Verdict::Fails: return "Fails";
    }
    return "?";
}

VerificationReport verify_describes(const EvolutionSystem& sys, const AssociatedFunctions& f, std::uint64_t seed) {
    VerificationReport r;
    r.order_ok = check_order_conditions(f);
    r.genericity = check_generic(genericity_expr(f), 50, seed);
    r.nondegeneracy = check_generic(nondegeneracy_expr(f), 50, seed);
    bool residuals_zero = false;
    try {
        r.residuals = structure_residuals(sys, f);
        residuals_zero = true;
        for (int k = 0; k < 3; ++k) {
            r.residual_status[k] = jet::is_zero(r.residuals[k]);
            if (r.residual_status[k] != ZeroStatus::Zero) {
                if (residuals_zero) {
                    r.first_nonzero_term = Expr::from_terms({r.residuals[k].terms().front()}).str();
                }
                residuals_zero = false;
            }
        }
    } catch (const OrderOverflow& e) {
        r.reason = std::string("residuals: ") + e.what();
    }
    if (!r.order_ok) {
        r.reason = "order conditions violated";
    } else if (!r.reason.empty()) {
        // keep the residual error
    } else if (!residuals_zero) {
        for (int k = 0; k < 3; ++k) {
            if (r.residual_status[k] != ZeroStatus::Zero) {
                r.reason = "structure residual " + std::to_string(k + 1) + " is " + status_name(r.residual_status[k]);
                break;
            }
        }
    } else if (!r.genericity.holds) {
        r.reason = "genericity condition W vanishes";
    } else if (!r.nondegeneracy.holds) {
        r.reason = "degenerate: f11 f22 - f12 f21 vanishes";
    }
    if (r.reason.empty()) r.verdict = f.delta == 1 ? Verdict::DescribesPSS : Verdict::DescribesSS;
    return r;
}

nlohmann::ordered_json report_to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(r.verdict);
    j["reason"] = r.reason;
    j["order_conditions"] = r.order_ok;
    j["genericity"] = {{"expr", r.genericity.expr.str()},
                       {"status", status_name(r.genericity.status)},
                       {"holds", r.genericity.holds}};
    nlohmann::ordered_json res = nlohmann::ordered_json::array();
    for (int k = 0; k < 3; ++k) {
        res.push_back({{"expr", r.residuals[k].str()}, {"status", status_name(r.residual_status[k])}});
    }
    j["residuals"] = res;
    j["nondegeneracy"] = {{"expr", r.nondegeneracy.expr.str()},
                          {"status", status_name(r.nondegeneracy.status)},
                          {"holds", r.nondegeneracy.holds}};
    if (!r.first_nonzero_term.empty()) j["first_nonzero_term"] = r.first_nonzero_term;
    return j;
}

bool linearity_check(const EvolutionSystem& sys) {
    for (const Expr* e : {&sys.F, &sys.G}) {
        Expr dz = jet::diff(*e, JetVar::z(3));
        Expr dy = jet::diff(*e, JetVar::y(3));
        for (const Expr& second : {jet::diff(dz, JetVar::z(3)), jet::diff(dy, JetVar::y(3)), jet::diff(dz, JetVar::y(3))}) {
            if (jet::is_zero(second) != ZeroStatus::Zero) return false;
        }
    }
    return true;
}

Expr total_t_on_shell(const Expr& e, const EvolutionSystem& sys) {
    Expr result = jet::diff(e, JetVar::t());
    for (auto kind : {jet::JetKind::Z, jet::JetKind::Y}) {
        int order = e.max_order(kind);
        Expr flow = kind == jet::JetKind::Z ? sys.F : sys.G;
        for (int i = 0; i <= order; ++i) {
            if (i > 0) flow = jet::total_x_extended(flow, jet::kExtendedOrder);
            JetVar v{kind, i};
            if (!e.depends_on(v)) continue;
            result += jet::diff(e, v) * flow;
        }
    }
    return result;
}

}  // namespace pss::core
