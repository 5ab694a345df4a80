#include "pss/jet/ops.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "pss/error.hpp"

namespace pss::jet {

namespace {

using LeafDerivative = std::function<Expr(const Atom&)>;

Expr atom_expr(const Atom& a) {
    if (const auto* v = std::get_if<JetVar>(&a)) return Expr::var(*v);
    if (const auto* p = std::get_if<ParamRef>(&a)) return Expr::param(*p);
    const auto& f = std::get<FuncApp>(a);
    return Expr::func(f.kind, f.arg);
}

Expr differentiate(const Expr& e, const LeafDerivative& leaf);

// Derivative of a single atom; function applications go through the chain rule.
Expr atom_derivative(const Atom& a, const LeafDerivative& leaf) {
    const auto* f = std::get_if<FuncApp>(&a);
    if (f == nullptr) return leaf(a);
    Expr inner = differentiate(f->arg, leaf);
    if (inner.is_zero()) return Expr();
    const Expr& u = f->arg;
    switch (f->kind) {
        case Func::Sin: return cos(u) * inner;
        case Func::Cos: return -sin(u) * inner;
        case Func::Tan: return sec(u).pow(2) * inner;
        case Func::Sec: return sec(u) * tan(u) * inner;
        case Func::Exp: return exp(u) * inner;
        case Func::Sqrt: return Expr(rational(1, 2)) * sqrt(u).pow(-1) * inner;
        case Func::Recip: return -(atom_expr(a).pow(2)) * inner;
    }
    return Expr();
}

Expr differentiate(const Expr& e, const LeafDerivative& leaf) {
    std::vector<Term> out;
    for (const auto& t : e.terms()) {
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            Expr d = atom_derivative(t.factors[i].atom, leaf);
            if (d.is_zero()) continue;
            Term rest = t;
            rest.coef *= t.factors[i].exp;
            rest.factors[i].exp -= 1;
            Expr piece = Expr::from_terms({std::move(rest)}) * d;
            out.insert(out.end(), piece.terms().begin(), piece.terms().end());
        }
    }
    return Expr::from_terms(std::move(out));
}

Expr total_x_impl(const Expr& e, int limit) {
    if (e.max_dependent_order() >= limit) {
        throw OrderOverflow("total x-derivative of an order-" + std::to_string(e.max_dependent_order()) +
                            " expression exceeds jet order " + std::to_string(limit));
    }
    return differentiate(e, [limit](const Atom& a) -> Expr {
        const auto* v = std::get_if<JetVar>(&a);
        if (v == nullptr) return Expr();
        switch (v->kind) {
            case JetKind::X: return Expr(1);
            case JetKind::T: return Expr();
            case JetKind::Z:
            case JetKind::Y:
                if (v->order + 1 > limit) throw OrderOverflow("jet order exceeds " + std::to_string(limit));
                return Expr::var({v->kind, v->order + 1});
        }
        return Expr();
    });
}

void collect_jets(const Expr& e, std::set<JetVar>& out) {
    for (const auto& t : e.terms()) {
        for (const auto& f : t.factors) {
            if (const auto* v = std::get_if<JetVar>(&f.atom)) {
                out.insert(*v);
            } else if (const auto* fa = std::get_if<FuncApp>(&f.atom)) {
                collect_jets(fa->arg, out);
            }
        }
    }
}

void collect_params_into(const Expr& e, std::map<std::string, ParamRef>& out) {
    for (const auto& t : e.terms()) {
        for (const auto& f : t.factors) {
            if (const auto* p = std::get_if<ParamRef>(&f.atom)) {
                out.emplace(p->name(), *p);
            } else if (const auto* fa = std::get_if<FuncApp>(&f.atom)) {
                collect_params_into(fa->arg, out);
            }
        }
    }
}

double ipow(double base, int n) {
    if (n < 0) {
        if (base == 0.0) throw NumericalDomain("division by zero during evaluation");
        base = 1.0 / base;
        n = -n;
    }
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

double eval_atom(const Atom& a, const Point& p) {
    if (const auto* v = std::get_if<JetVar>(&a)) {
        auto it = p.jets.find(*v);
        if (it == p.jets.end()) throw UnboundSymbol(v->name());
        return it->second;
    }
    if (const auto* r = std::get_if<ParamRef>(&a)) {
        auto it = p.params.find(r->name());
        if (it != p.params.end()) return it->second;
        if (r->deriv == 0 && r->symbol->reduction) {
            const auto& red = *r->symbol->reduction;
            double value = red.value.get_d();
            if (value < 0 && red.power % 2 == 0) throw NumericalDomain("even root of a negative reduction value");
            double root = std::pow(std::fabs(value), 1.0 / red.power);
            return value < 0 ? -root : root;
        }
        throw UnboundSymbol(r->name());
    }
    const auto& f = std::get<FuncApp>(a);
    double u = eval(f.arg, p);
    switch (f.kind) {
        case Func::Sin: return std::sin(u);
        case Func::Cos: return std::cos(u);
        case Func::Exp: return std::exp(u);
        case Func::Tan:
        case Func::Sec: {
            double c = std::cos(u);
            if (std::fabs(c) < 1e-14) throw NumericalDomain(std::string(func_name(f.kind)) + " at a pole");
            return f.kind == Func::Tan ? std::sin(u) / c : 1.0 / c;
        }
        case Func::Sqrt:
            if (u < 0) throw NumericalDomain("sqrt of a negative value");
            return std::sqrt(u);
        case Func::Recip:
            if (u == 0.0) throw NumericalDomain("reciprocal of zero");
            return 1.0 / u;
    }
    return 0.0;
}

// Quotient of two canonical terms, or nullopt if it would introduce a new denominator.
std::optional<Expr> term_quotient(const Term& num, const Term& den) {
    std::vector<Factor> fs = num.factors;
    for (const auto& f : den.factors) fs.push_back({f.atom, -f.exp});
    Expr q = Expr::from_terms({Term{num.coef / den.coef, std::move(fs)}});
    if (!q.is_monomial()) return std::nullopt;
    for (const auto& f : q.terms().front().factors) {
        if (f.exp >= 0) continue;
        bool already = false;
        for (const auto& g : num.factors) {
            if (compare(g.atom, f.atom) == 0 && g.exp < 0) already = true;
        }
        if (!already) return std::nullopt;
    }
    return q;
}

}  // namespace

Expr diff(const Expr& e, JetVar v) {
    return differentiate(e, [v](const Atom& a) -> Expr {
        if (const auto* jv = std::get_if<JetVar>(&a)) return *jv == v ? Expr(1) : Expr();
        const auto& p = std::get<ParamRef>(a);
        if (v.kind != JetKind::T || !p.symbol->time_dependent) return Expr();
        if (p.deriv >= 2) throw DepthExceeded("time derivative of " + p.name() + " beyond stored depth 2");
        return Expr::param(p.symbol, p.deriv + 1);
    });
}

Expr diff(const Expr& e, const ParamRef& p) {
    std::string target = p.name();
    return differentiate(e, [&target](const Atom& a) -> Expr {
        const auto* r = std::get_if<ParamRef>(&a);
        return r != nullptr && r->name() == target ? Expr(1) : Expr();
    });
}

Expr total_x(const Expr& e) { return total_x_impl(e, kMaxOrder); }

Expr total_x_extended(const Expr& e, int max_order) { return total_x_impl(e, max_order); }

Expr substitute(const Expr& e, const Bindings& b, int max_order) {
    Expr result;
    for (const auto& t : e.terms()) {
        Expr product(t.coef);
        for (const auto& f : t.factors) {
            auto it = b.find(f.atom);
            Expr base;
            if (it != b.end()) {
                base = it->second;
            } else if (const auto* fa = std::get_if<FuncApp>(&f.atom)) {
                base = Expr::func(fa->kind, substitute(fa->arg, b, max_order));
            } else {
                base = atom_expr(f.atom);
            }
            product *= base.pow(f.exp);
        }
        result += product;
    }
    if (result.max_dependent_order() > max_order) {
        throw OrderOverflow("substitution raises jet order to " + std::to_string(result.max_dependent_order()));
    }
    return result;
}

Expr numerator(const Expr& e) {
    Expr current = e;
    for (;;) {
        std::optional<FuncApp> target;
        int k = 0;
        for (const auto& t : current.terms()) {
            for (const auto& f : t.factors) {
                const auto* fa = std::get_if<FuncApp>(&f.atom);
                if (fa == nullptr || fa->kind != Func::Recip) continue;
                if (!target) {
                    target = *fa;
                    k = f.exp;
                } else if (compare(Atom(*target), f.atom) == 0) {
                    k = std::max(k, f.exp);
                }
            }
        }
        if (!target) return current;
        std::vector<Expr> powers{Expr(1)};
        for (int m = 1; m <= k; ++m) powers.push_back(powers.back() * target->arg);
        Expr next;
        for (const auto& t : current.terms()) {
            Term rest{t.coef, {}};
            int j = 0;
            for (const auto& f : t.factors) {
                if (compare(Atom(*target), f.atom) == 0) {
                    j = f.exp;
                } else {
                    rest.factors.push_back(f);
                }
            }
            next += Expr::from_terms({std::move(rest)}) * powers[static_cast<std::size_t>(k - j)];
        }
        current = next;
    }
}

std::optional<Expr> try_divide(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw DivisionError("division by the zero expression");
    if (a.is_zero()) return Expr();
    if (b.is_monomial()) return a * b.pow(-1);
    Expr r = a;
    Expr q;
    const Term& lead = b.terms().front();
    std::size_t cap = 4 * (a.size() + 1) * (b.size() + 1) + 64;
    for (std::size_t iter = 0; !r.is_zero(); ++iter) {
        if (iter > cap) return std::nullopt;
        auto m = term_quotient(r.terms().front(), lead);
        if (!m) return std::nullopt;
        q += *m;
        r -= *m * b;
    }
    return q;
}

Expr divide(const Expr& a, const Expr& b) {
    if (auto q = try_divide(a, b)) return *q;
    return a * Expr::func(Func::Recip, b);
}

ZeroStatus is_zero(const Expr& e) {
    if (e.is_zero()) return ZeroStatus::Zero;
    Expr n = numerator(e);
    if (n.is_zero()) return ZeroStatus::Zero;
    return n.is_polynomial() ? ZeroStatus::NonZero : ZeroStatus::Unknown;
}

double eval(const Expr& e, const Point& p) {
    double sum = 0.0;
    for (const auto& t : e.terms()) {
        double v = t.coef.get_d();
        for (const auto& f : t.factors) v *= ipow(eval_atom(f.atom, p), f.exp);
        sum += v;
    }
    if (!std::isfinite(sum)) throw NumericalDomain("non-finite value during evaluation");
    return sum;
}

std::map<std::string, ParamRef> collect_params(const Expr& e) {
    std::map<std::string, ParamRef> out;
    collect_params_into(e, out);
    return out;
}

ProbeResult probe_zero(const Expr& e, int trials, std::uint64_t seed, const Point& fixed) {
    if (trials < 1) throw InvalidArgument("probe_zero needs at least one trial");
    std::set<JetVar> jets;
    collect_jets(e, jets);
    auto params = collect_params(e);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    ProbeResult result;
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        Point p = fixed;
        for (const auto& v : jets) {
            if (!p.jets.count(v)) p.jets[v] = dist(rng);
        }
        for (const auto& [name, ref] : params) {
            if (p.params.count(name)) continue;
            if (ref.deriv == 0 && ref.symbol->reduction) continue;
            p.params[name] = dist(rng);
        }
        double v = 0.0;
        try {
            v = eval(e, p);
        } catch (const NumericalDomain&) {
            continue;
        }
        ++result.evaluated;
        if (std::fabs(v) > kProbeNonZeroTol) {
            result.status = ProbeStatus::NonZero;
            result.witness = std::move(p);
            result.value = v;
            return result;
        }
        worst = std::max(worst, std::fabs(v));
    }
    if (result.evaluated == 0) throw DomainError("every probe point hit a function singularity");
    result.value = worst;
    result.status = worst <= kProbeZeroTol ? ProbeStatus::LikelyZero : ProbeStatus::Inconclusive;
    return result;
}

}  // namespace pss::jet
