#include "pss/jet/expr.hpp"

#include <algorithm>
#include <sstream>

#include "pss/error.hpp"

namespace pss::jet {

namespace {

const std::shared_ptr<const std::vector<Term>>& empty_terms() {
    static const auto empty = std::make_shared<const std::vector<Term>>();
    return empty;
}

Rational rational_pow(const Rational& base, int n) {
    Rational result = 1;
    Rational b = n < 0 ? Rational(1 / base) : base;
    int k = n < 0 ? -n : n;
    while (k > 0) {
        if (k & 1) result *= b;
        b *= b;
        k >>= 1;
    }
    return result;
}

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int jet_degree(const std::vector<Factor>& fs) {
    int d = 0;
    for (const auto& f : fs) {
        if (std::holds_alternative<JetVar>(f.atom)) d += f.exp;
    }
    return d;
}

bool is_recip(const Atom& a) {
    const auto* fa = std::get_if<FuncApp>(&a);
    return fa != nullptr && fa->kind == Func::Recip;
}

// Reduces exponents of surd-like parameters into [0, power).
void apply_reductions(Term& t) {
    for (auto& f : t.factors) {
        const auto* p = std::get_if<ParamRef>(&f.atom);
        if (p == nullptr || p->deriv != 0 || !p->symbol->reduction) continue;
        const auto& red = *p->symbol->reduction;
        int q = floor_div(f.exp, red.power);
        if (q != 0) {
            t.coef *= rational_pow(red.value, q);
            f.exp -= q * red.power;
        }
    }
    std::erase_if(t.factors, [](const Factor& f) { return f.exp == 0; });
}

// Sorts and merges the factor list of a raw term.
void canonicalize_factors(Term& t) {
    std::sort(t.factors.begin(), t.factors.end(),
              [](const Factor& a, const Factor& b) { return compare(a.atom, b.atom) < 0; });
    std::vector<Factor> merged;
    merged.reserve(t.factors.size());
    for (auto& f : t.factors) {
        if (!merged.empty() && compare(merged.back().atom, f.atom) == 0) {
            merged.back().exp += f.exp;
        } else {
            merged.push_back(std::move(f));
        }
    }
    std::erase_if(merged, [](const Factor& f) { return f.exp == 0; });
    t.factors = std::move(merged);
    apply_reductions(t);
}

// Product of two canonical terms.
Term multiply_terms(const Term& a, const Term& b) {
    Term out;
    out.coef = a.coef * b.coef;
    out.factors.reserve(a.factors.size() + b.factors.size());
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size()) {
            out.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size()) {
            out.factors.push_back(b.factors[j++]);
        } else {
            int c = compare(a.factors[i].atom, b.factors[j].atom);
            if (c < 0) {
                out.factors.push_back(a.factors[i++]);
            } else if (c > 0) {
                out.factors.push_back(b.factors[j++]);
            } else {
                int e = a.factors[i].exp + b.factors[j].exp;
                if (e != 0) out.factors.push_back({a.factors[i].atom, e});
                ++i;
                ++j;
            }
        }
    }
    apply_reductions(out);
    return out;
}

// Sorts descending in monomial order and merges like terms.
std::vector<Term> collect(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare_monomials(a.factors, b.factors) > 0; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && compare_monomials(out.back().factors, t.factors) == 0) {
            out.back().coef += t.coef;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [](const Term& t) { return sgn(t.coef) == 0; });
    return out;
}

Expr term_expr(Term t);

// Exact inverse of a canonical term; Recip factors turn back into expanded powers.
Expr invert_term(const Term& t) {
    Term inv;
    inv.coef = 1 / t.coef;
    Expr expanded = 1;
    for (const auto& f : t.factors) {
        if (is_recip(f.atom) && f.exp > 0) {
            expanded *= std::get<FuncApp>(f.atom).arg.pow(f.exp);
        } else {
            inv.factors.push_back({f.atom, -f.exp});
        }
    }
    return term_expr(std::move(inv)) * expanded;
}

Expr term_expr(Term t) {
    std::vector<Term> v;
    v.push_back(std::move(t));
    return Expr::from_terms(std::move(v));
}

int compare_func(const FuncApp& a, const FuncApp& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    return compare(a.arg, b.arg);
}

std::string factor_str(const Factor& f) {
    if (is_recip(f.atom)) {
        return "(" + std::get<FuncApp>(f.atom).arg.str() + ")^-" + std::to_string(f.exp);
    }
    std::string s = atom_str(f.atom);
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
    return s;
}

}  // namespace

Rational rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::string JetVar::name() const {
    switch (kind) {
        case JetKind::Z: return "z" + std::to_string(order);
        case JetKind::Y: return "y" + std::to_string(order);
        case JetKind::X: return "x";
        case JetKind::T: return "t";
    }
    return "?";
}

std::string ParamRef::name() const {
    static const char* suffix[] = {"", "_t", "_tt"};
    return symbol->name + (deriv >= 0 && deriv <= 2 ? suffix[deriv] : "_t?");
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Sec: return "sec";
        case Func::Exp: return "exp";
        case Func::Sqrt: return "sqrt";
        case Func::Recip: return "recip";
    }
    return "?";
}

int compare(const Atom& a, const Atom& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    switch (a.index()) {
        case 0: {
            auto c = std::get<JetVar>(a) <=> std::get<JetVar>(b);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case 1: {
            const auto& pa = std::get<ParamRef>(a);
            const auto& pb = std::get<ParamRef>(b);
            if (pa.symbol != pb.symbol) {
                int c = pa.symbol->name.compare(pb.symbol->name);
                if (c != 0) return c < 0 ? -1 : 1;
            }
            return pa.deriv == pb.deriv ? 0 : (pa.deriv < pb.deriv ? -1 : 1);
        }
        default: return compare_func(std::get<FuncApp>(a), std::get<FuncApp>(b));
    }
}

int compare_monomials(const std::vector<Factor>& a, const std::vector<Factor>& b) {
    int da = jet_degree(a), db = jet_degree(b);
    if (da != db) return da > db ? 1 : -1;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) return a[i].exp > 0 ? 1 : -1;
        if (i == a.size()) return b[j].exp > 0 ? -1 : 1;
        int c = compare(a[i].atom, b[j].atom);
        if (c == 0) {
            if (a[i].exp != b[j].exp) return a[i].exp > b[j].exp ? 1 : -1;
            ++i;
            ++j;
        } else if (c < 0) {
            return a[i].exp > 0 ? 1 : -1;
        } else {
            return b[j].exp > 0 ? -1 : 1;
        }
    }
    return 0;
}

int compare(const Expr& a, const Expr& b) {
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_monomials(ta[i].factors, tb[i].factors);
        if (c != 0) return c;
        int cc = cmp(ta[i].coef, tb[i].coef);
        if (cc != 0) return cc < 0 ? -1 : 1;
    }
    if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
    return 0;
}

std::string atom_str(const Atom& a) {
    if (const auto* v = std::get_if<JetVar>(&a)) return v->name();
    if (const auto* p = std::get_if<ParamRef>(&a)) return p->name();
    const auto& f = std::get<FuncApp>(a);
    if (f.kind == Func::Recip) return "(" + f.arg.str() + ")^-1";
    return std::string(func_name(f.kind)) + "(" + f.arg.str() + ")";
}

Expr::Expr() : terms_(empty_terms()) {}

Expr::Expr(long value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) : Expr() {
    if (sgn(value) != 0) {
        auto v = std::make_shared<std::vector<Term>>();
        v->push_back(Term{value, {}});
        terms_ = std::move(v);
    }
}

Expr Expr::var(JetVar v) {
    auto t = std::make_shared<std::vector<Term>>();
    t->push_back(Term{1, {Factor{v, 1}}});
    return Expr(std::move(t));
}

Expr Expr::param(const ParamRef& p) {
    return from_terms({Term{1, {Factor{p, 1}}}});
}

Expr Expr::func(Func f, const Expr& arg) {
    if (arg.is_zero()) {
        switch (f) {
            case Func::Sin:
            case Func::Tan:
            case Func::Sqrt: return Expr();
            case Func::Cos:
            case Func::Sec:
            case Func::Exp: return Expr(1);
            case Func::Recip: throw DivisionError("reciprocal of the zero expression");
        }
    }
    if (f == Func::Recip) {
        if (arg.is_monomial()) return invert_term(arg.terms().front());
        Rational lead = arg.terms().front().coef;
        Expr unit = arg * Expr(Rational(1 / lead));
        auto t = std::make_shared<std::vector<Term>>();
        t->push_back(Term{Rational(1 / lead), {Factor{FuncApp{Func::Recip, unit}, 1}}});
        return Expr(std::move(t));
    }
    auto t = std::make_shared<std::vector<Term>>();
    t->push_back(Term{1, {Factor{FuncApp{f, arg}, 1}}});
    return Expr(std::move(t));
}

Expr Expr::from_terms(std::vector<Term> terms) {
    std::vector<Term> ready;
    ready.reserve(terms.size());
    Expr extra;
    for (auto& t : terms) {
        if (sgn(t.coef) == 0) continue;
        canonicalize_factors(t);
        bool negative_recip = std::any_of(t.factors.begin(), t.factors.end(),
                                          [](const Factor& f) { return is_recip(f.atom) && f.exp < 0; });
        if (!negative_recip) {
            ready.push_back(std::move(t));
            continue;
        }
        Term rest{t.coef, {}};
        Expr expanded = 1;
        for (auto& f : t.factors) {
            if (is_recip(f.atom) && f.exp < 0) {
                expanded *= std::get<FuncApp>(f.atom).arg.pow(-f.exp);
            } else {
                rest.factors.push_back(std::move(f));
            }
        }
        extra += term_expr(std::move(rest)) * expanded;
    }
    auto out = collect(std::move(ready));
    Expr e = out.empty() ? Expr() : Expr(std::make_shared<const std::vector<Term>>(std::move(out)));
    return extra.is_zero() ? e : e + extra;
}

std::size_t Expr::size() const { return terms_->size(); }

bool Expr::is_zero() const { return terms_->empty(); }

bool Expr::is_constant() const {
    return terms_->empty() || (terms_->size() == 1 && terms_->front().factors.empty());
}

std::optional<Rational> Expr::constant_value() const {
    if (terms_->empty()) return Rational(0);
    if (is_constant()) return terms_->front().coef;
    return std::nullopt;
}

bool Expr::is_polynomial() const {
    for (const auto& t : *terms_) {
        for (const auto& f : t.factors) {
            if (std::holds_alternative<FuncApp>(f.atom)) return false;
        }
    }
    return true;
}

int Expr::max_order(JetKind kind) const {
    int m = -1;
    for (const auto& t : *terms_) {
        for (const auto& f : t.factors) {
            if (const auto* v = std::get_if<JetVar>(&f.atom)) {
                if (v->kind == kind) m = std::max(m, v->order);
            } else if (const auto* fa = std::get_if<FuncApp>(&f.atom)) {
                m = std::max(m, fa->arg.max_order(kind));
            }
        }
    }
    return m;
}

int Expr::max_dependent_order() const { return std::max(max_order(JetKind::Z), max_order(JetKind::Y)); }

bool Expr::depends_on(JetVar v) const {
    for (const auto& t : *terms_) {
        for (const auto& f : t.factors) {
            if (const auto* jv = std::get_if<JetVar>(&f.atom)) {
                if (*jv == v) return true;
            } else if (const auto* fa = std::get_if<FuncApp>(&f.atom)) {
                if (fa->arg.depends_on(v)) return true;
            }
        }
    }
    return false;
}

bool Expr::depends_on_param(const std::string& name) const {
    for (const auto& t : *terms_) {
        for (const auto& f : t.factors) {
            if (const auto* p = std::get_if<ParamRef>(&f.atom)) {
                if (p->symbol->name == name) return true;
            } else if (const auto* fa = std::get_if<FuncApp>(&f.atom)) {
                if (fa->arg.depends_on_param(name)) return true;
            }
        }
    }
    return false;
}

Expr Expr::pow(int n) const {
    if (n == 0) return Expr(1);
    if (n < 0) {
        if (is_zero()) throw DivisionError("negative power of the zero expression");
        Expr inv = is_monomial() ? invert_term(terms_->front()) : Expr::func(Func::Recip, *this);
        return inv.pow(-n);
    }
    Expr result = 1;
    Expr base = *this;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

std::string Expr::str() const {
    if (terms_->empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : *terms_) {
        bool neg = sgn(t.coef) < 0;
        Rational mag = abs(t.coef);
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        bool unit = (mag == 1) && !t.factors.empty();
        if (!unit) {
            os << mag.get_str();
            if (!t.factors.empty()) os << "*";
        }
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            if (i > 0) os << "*";
            os << factor_str(t.factors[i]);
        }
    }
    return os.str();
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::vector<Term> out;
    out.reserve(ta.size() + tb.size());
    std::size_t i = 0, j = 0;
    while (i < ta.size() || j < tb.size()) {
        if (j == tb.size()) {
            out.push_back(ta[i++]);
        } else if (i == ta.size()) {
            out.push_back(tb[j++]);
        } else {
            int c = compare_monomials(ta[i].factors, tb[j].factors);
            if (c > 0) {
                out.push_back(ta[i++]);
            } else if (c < 0) {
                out.push_back(tb[j++]);
            } else {
                Rational s = ta[i].coef + tb[j].coef;
                if (sgn(s) != 0) out.push_back(Term{s, ta[i].factors});
                ++i;
                ++j;
            }
        }
    }
    if (out.empty()) return Expr();
    return Expr(std::make_shared<const std::vector<Term>>(std::move(out)));
}

Expr operator-(const Expr& a) {
    if (a.is_zero()) return a;
    std::vector<Term> out = a.terms();
    for (auto& t : out) t.coef = -t.coef;
    return Expr(std::make_shared<const std::vector<Term>>(std::move(out)));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) out.push_back(multiply_terms(ta, tb));
    }
    auto merged = collect(std::move(out));
    if (merged.empty()) return Expr();
    return Expr(std::make_shared<const std::vector<Term>>(std::move(merged)));
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

}  // namespace pss::jet
