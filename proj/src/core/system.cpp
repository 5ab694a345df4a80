#include "pss/core/system.hpp"

#include "pss/error.hpp"

namespace pss::core {

EvolutionSystem make_system(Expr F, Expr G, std::string description) {
    for (const Expr* e : {&F, &G}) {
        if (e->max_dependent_order() > jet::kMaxOrder) {
            throw OrderOverflow("evolution system must stay within third-order jets");
        }
    }
    return {std::move(F), std::move(G), std::move(description)};
}

const Expr& AssociatedFunctions::f(int i, int j) const {
    return const_cast<AssociatedFunctions*>(this)->f(i, j);
}

Expr& AssociatedFunctions::f(int i, int j) {
    if (j == 1) {
        if (i == 1) return f11;
        if (i == 2) return f21;
        if (i == 3) return f31;
    } else if (j == 2) {
        if (i == 1) return f12;
        if (i == 2) return f22;
        if (i == 3) return f32;
    }
    throw InvalidArgument("associated function index out of range");
}

Metric metric_coefficients(const AssociatedFunctions& f) {
    return {f.f11 * f.f11 + f.f21 * f.f21, f.f11 * f.f12 + f.f21 * f.f22, f.f12 * f.f12 + f.f22 * f.f22};
}

}  // namespace pss::core
