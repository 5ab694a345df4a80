#include "pss/jet/compiled.hpp"

#include <cmath>
#include <limits>

#include "pss/error.hpp"

namespace pss::jet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double reduction_root(const ParamSymbol& s) {
    const auto& red = *s.reduction;
    double value = red.value.get_d();
    if (value < 0 && red.power % 2 == 0) throw NumericalDomain("even root of a negative reduction value");
    double root = std::pow(std::fabs(value), 1.0 / red.power);
    return value < 0 ? -root : root;
}

}  // namespace

int CompiledExpr::slot(JetVar v) {
    switch (v.kind) {
        case JetKind::Z: return v.order;
        case JetKind::Y: return 5 + v.order;
        case JetKind::X: return 10;
        case JetKind::T: return 11;
    }
    return 0;
}

CompiledExpr::CompiledExpr(const Expr& e, const std::map<std::string, double>& params) {
    std::map<Atom, int, AtomLess> index;
    term_begin_.push_back(0);
    for (const auto& t : e.terms()) {
        coef_.push_back(t.coef.get_d());
        for (const auto& f : t.factors) {
            auto [it, fresh] = index.emplace(f.atom, static_cast<int>(atoms_.size()));
            if (fresh) {
                AtomCode code{Kind::Const};
                if (const auto* v = std::get_if<JetVar>(&f.atom)) {
                    if (v->order > kExtendedOrder) throw OrderOverflow("jet order beyond evaluator slots");
                    code.kind = Kind::Slot;
                    code.slot = slot(*v);
                } else if (const auto* p = std::get_if<ParamRef>(&f.atom)) {
                    auto pv = params.find(p->name());
                    if (pv != params.end()) {
                        code.value = pv->second;
                    } else if (p->deriv == 0 && p->symbol->reduction) {
                        code.value = reduction_root(*p->symbol);
                    } else {
                        throw UnboundSymbol(p->name());
                    }
                } else {
                    const auto& fa = std::get<FuncApp>(f.atom);
                    code.kind = Kind::Func;
                    code.func = fa.kind;
                    code.child = static_cast<int>(children_.size());
                    children_.emplace_back(fa.arg, params);
                }
                atoms_.push_back(code);
            }
            powers_.push_back({it->second, f.exp});
        }
        term_begin_.push_back(powers_.size());
    }
    scratch_ = atoms_.size();
    for (const auto& c : children_) {
        child_offset_.push_back(scratch_);
        scratch_ += c.scratch_size();
    }
}

double CompiledExpr::operator()(const double* in, double* scratch) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto& a = atoms_[i];
        switch (a.kind) {
            case Kind::Slot: scratch[i] = in[a.slot]; break;
            case Kind::Const: scratch[i] = a.value; break;
            case Kind::Func: {
                auto c = static_cast<std::size_t>(a.child);
                double u = children_[c](in, scratch + child_offset_[c]);
                double v = kNaN;
                switch (a.func) {
                    case Func::Sin: v = std::sin(u); break;
                    case Func::Cos: v = std::cos(u); break;
                    case Func::Exp: v = std::exp(u); break;
                    case Func::Tan: {
                        double cu = std::cos(u);
                        v = std::fabs(cu) < 1e-14 ? kNaN : std::sin(u) / cu;
                        break;
                    }
                    case Func::Sec: {
                        double cu = std::cos(u);
                        v = std::fabs(cu) < 1e-14 ? kNaN : 1.0 / cu;
                        break;
                    }
                    case Func::Sqrt: v = u < 0 ? kNaN : std::sqrt(u); break;
                    case Func::Recip: v = u == 0.0 ? kNaN : 1.0 / u; break;
                }
                scratch[i] = v;
                break;
            }
        }
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < coef_.size(); ++t) {
        double v = coef_[t];
        for (std::size_t k = term_begin_[t]; k < term_begin_[t + 1]; ++k) {
            double b = scratch[powers_[k].atom];
            int n = powers_[k].exp;
            if (n < 0) {
                if (b == 0.0) return kNaN;
                b = 1.0 / b;
                n = -n;
            }
            double r = 1.0;
            while (n > 0) {
                if (n & 1) r *= b;
                b *= b;
                n >>= 1;
            }
            v *= r;
        }
        sum += v;
    }
    return sum;
}

double CompiledExpr::eval(const Input& in) const {
    std::vector<double> scratch(scratch_ + 1);
    double v = (*this)(in.data(), scratch.data());
    if (!std::isfinite(v)) throw NumericalDomain("non-finite value during evaluation");
    return v;
}

}  // namespace pss::jet
