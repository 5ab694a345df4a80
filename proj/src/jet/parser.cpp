#include "pss/jet/parser.hpp"

#include <cctype>

#include "pss/error.hpp"
#include "pss/jet/ops.hpp"

namespace pss::jet {

ParamPtr ParamTable::declare(const std::string& name, bool time_dependent, std::optional<Reduction> reduction) {
    if (is_reserved_identifier(name)) throw InvalidArgument("'" + name + "' is a reserved identifier");
    if (reduction && reduction->power < 2) throw InvalidArgument("reduction power must be at least 2");
    auto p = std::make_shared<const ParamSymbol>(ParamSymbol{name, time_dependent, std::move(reduction)});
    symbols_[name] = p;
    return p;
}

void ParamTable::add(const ParamPtr& p) { symbols_[p->name] = p; }

ParamPtr ParamTable::find(const std::string& name) const {
    auto it = symbols_.find(name);
    return it == symbols_.end() ? nullptr : it->second;
}

std::vector<ParamPtr> ParamTable::all() const {
    std::vector<ParamPtr> out;
    for (const auto& [_, p] : symbols_) out.push_back(p);
    return out;
}

bool is_reserved_identifier(const std::string& name) {
    if (name == "x" || name == "t") return true;
    if (name.size() == 2 && (name[0] == 'z' || name[0] == 'y') && name[1] >= '0' && name[1] <= '3') return true;
    static const char* funcs[] = {"sin", "cos", "tan", "sec", "exp", "sqrt"};
    for (const char* f : funcs) {
        if (name == f) return true;
    }
    return false;
}

namespace {

class Parser {
public:
    Parser(const std::string& text, const ParamTable& params) : s_(text), params_(params) {}

    Expr run() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+')) {
                e += term();
            } else if (accept('-')) {
                e -= term();
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e *= unary();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero()) throw SyntaxError("division by zero", at);
                e = divide(e, d);
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr b = base();
        if (!accept('^')) return b;
        skip_ws();
        bool paren = accept('(');
        skip_ws();
        int sign = 1;
        if (accept('-')) {
            sign = -1;
        } else {
            accept('+');
        }
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        if (pos_ - start > 6) fail("exponent too large");
        int n = sign * std::stoi(s_.substr(start, pos_ - start));
        if (paren) expect(')');
        if (n < 0 && b.is_zero()) throw SyntaxError("negative power of zero", start);
        return b.pow(n);
    }

    Expr number() {
        std::size_t start = pos_;
        std::string digits;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
        long frac = 0;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                digits += s_[pos_++];
                ++frac;
            }
        }
        if (digits.empty()) fail("malformed number");
        long exp10 = -frac;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            int sign = 1;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) sign = s_[pos_++] == '-' ? -1 : 1;
            std::size_t es = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (es == pos_) {
                pos_ = save;  // not an exponent; leave 'e' for the caller to reject
            } else {
                exp10 += sign * std::stol(s_.substr(es, pos_ - es));
            }
        }
        if (exp10 > 1000 || exp10 < -1000) throw SyntaxError("number out of range", start);
        Rational value{mpz_class(digits, 10)};
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        if (exp10 < 0) {
            value /= scale;
        } else {
            value *= scale;
        }
        value.canonicalize();
        return Expr(value);
    }

    Expr identifier(const std::string& name, std::size_t start) {
        if (name == "x") return xvar();
        if (name == "t") return tvar();
        if (name.size() == 2 && (name[0] == 'z' || name[0] == 'y') && name[1] >= '0' && name[1] <= '3') {
            int order = name[1] - '0';
            return name[0] == 'z' ? z(order) : y(order);
        }
        if (auto p = params_.find(name)) return Expr::param(p, 0);
        for (int d = 2; d >= 1; --d) {
            std::string suffix = d == 2 ? "_tt" : "_t";
            if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
                auto p = params_.find(name.substr(0, name.size() - suffix.size()));
                if (p && p->time_dependent) return Expr::param(p, d);
            }
        }
        (void)start;
        throw UnknownSymbol(name);
    }

    Expr base() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            static const std::pair<const char*, Func> funcs[] = {{"sin", Func::Sin}, {"cos", Func::Cos},
                                                                 {"tan", Func::Tan}, {"sec", Func::Sec},
                                                                 {"exp", Func::Exp}, {"sqrt", Func::Sqrt}};
            for (const auto& [fname, kind] : funcs) {
                if (name == fname) {
                    expect('(');
                    Expr arg = expr();
                    expect(')');
                    return Expr::func(kind, arg);
                }
            }
            return identifier(name, start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const ParamTable& params_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const ParamTable& params) { return Parser(text, params).run(); }

}  // namespace pss::jet
