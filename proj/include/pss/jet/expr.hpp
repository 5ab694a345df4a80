#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pss::jet {

using Rational = mpq_class;

/// Highest jet order visible in public types (third-order systems).
inline constexpr int kMaxOrder = 3;
/// Order reachable transiently while prolonging on-shell (A_t needs D_x F).
inline constexpr int kExtendedOrder = 4;

enum class JetKind : std::uint8_t { Z = 0, Y = 1, X = 2, T = 3 };

/// A jet coordinate: x, t, or z_i = d^i u / dx^i, y_i = d^i v / dx^i.
struct JetVar {
    JetKind kind = JetKind::X;
    int order = 0;

    static constexpr JetVar z(int i) { return {JetKind::Z, i}; }
    static constexpr JetVar y(int i) { return {JetKind::Y, i}; }
    static constexpr JetVar x() { return {JetKind::X, 0}; }
    static constexpr JetVar t() { return {JetKind::T, 0}; }

    bool is_dependent() const { return kind == JetKind::Z || kind == JetKind::Y; }
    std::string name() const;

    friend constexpr auto operator<=>(const JetVar&, const JetVar&) = default;
};

/// symbol^power rewrites to value (used for literal surds such as sqrt(6)).
struct Reduction {
    int power = 2;
    Rational value;
};

struct ParamSymbol {
    std::string name;
    bool time_dependent = false;
    std::optional<Reduction> reduction;
};

using ParamPtr = std::shared_ptr<const ParamSymbol>;

/// Occurrence of a parameter, or of its time derivative (deriv = 1, 2) when time dependent.
struct ParamRef {
    ParamPtr symbol;
    int deriv = 0;

    std::string name() const;
};

enum class Func : std::uint8_t { Sin, Cos, Tan, Sec, Exp, Sqrt, Recip };

const char* func_name(Func f);

struct Term;

/// Exact expression in canonical form: a sorted sum of terms with nonzero rational
/// coefficients. Values are immutable and cheap to copy.
class Expr {
public:
    Expr();
    Expr(long value);  // NOLINT(google-explicit-constructor)
    Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

    static Expr var(JetVar v);
    static Expr param(const ParamRef& p);
    static Expr param(const ParamPtr& p, int deriv = 0) { return param(ParamRef{p, deriv}); }
    /// Builds f(arg); folds f(0) to a constant. Recip(b) of a single term is an exact inverse.
    static Expr func(Func f, const Expr& arg);
    /// Normalizes an arbitrary (unsorted, unmerged, unreduced) term list.
    static Expr from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return *terms_; }
    std::size_t size() const;
    bool is_zero() const;
    bool is_constant() const;
    std::optional<Rational> constant_value() const;
    bool is_monomial() const { return size() == 1; }

    /// True when no function application survives (Laurent polynomial in atoms).
    bool is_polynomial() const;
    /// Highest order among z_i (kind Z) or y_i (kind Y), recursing into function arguments; -1 if absent.
    int max_order(JetKind kind) const;
    int max_dependent_order() const;
    bool depends_on(JetVar v) const;
    bool depends_on_param(const std::string& name) const;

    Expr pow(int n) const;

    std::string str() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const std::vector<Term>> terms) : terms_(std::move(terms)) {}
    std::shared_ptr<const std::vector<Term>> terms_;
};

struct FuncApp {
    Func kind;
    Expr arg;
};

using Atom = std::variant<JetVar, ParamRef, FuncApp>;

struct Factor {
    Atom atom;
    int exp = 1;
};

struct Term {
    Rational coef;
    std::vector<Factor> factors;  // sorted by atom, exponents nonzero
};

int compare(const Expr& a, const Expr& b);
int compare(const Atom& a, const Atom& b);
/// Monomial order: graded on jet-variable degree, then lexicographic over atoms.
int compare_monomials(const std::vector<Factor>& a, const std::vector<Factor>& b);

struct AtomLess {
    bool operator()(const Atom& a, const Atom& b) const { return compare(a, b) < 0; }
};

std::string atom_str(const Atom& a);

inline Expr z(int i) { return Expr::var(JetVar::z(i)); }
inline Expr y(int i) { return Expr::var(JetVar::y(i)); }
inline Expr xvar() { return Expr::var(JetVar::x()); }
inline Expr tvar() { return Expr::var(JetVar::t()); }
inline Expr sin(const Expr& e) { return Expr::func(Func::Sin, e); }
inline Expr cos(const Expr& e) { return Expr::func(Func::Cos, e); }
inline Expr tan(const Expr& e) { return Expr::func(Func::Tan, e); }
inline Expr sec(const Expr& e) { return Expr::func(Func::Sec, e); }
inline Expr exp(const Expr& e) { return Expr::func(Func::Exp, e); }
inline Expr sqrt(const Expr& e) { return Expr::func(Func::Sqrt, e); }

Rational rational(long num, long den = 1);

}  // namespace pss::jet
