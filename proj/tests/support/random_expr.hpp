#pragma once

#include <random>

#include "pss/jet/expr.hpp"
#include "pss/jet/parser.hpp"

namespace pss::testing {

// Random expression trees for property tests.
struct ExprGen {
    std::mt19937_64 rng;
    jet::ParamTable params;
    int max_order = 2;
    bool functions = true;

    explicit ExprGen(std::uint64_t seed) : rng(seed) {
        params.declare("eta");
        params.declare("alpha", true);
        params.declare("sqrt6", false, jet::Reduction{2, 6});
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

    jet::Expr leaf() {
        switch (pick(6)) {
            case 0: return jet::z(pick(max_order + 1));
            case 1: return jet::y(pick(max_order + 1));
            case 2: return pick(2) ? jet::xvar() : jet::tvar();
            case 3: {
                static const char* names[] = {"eta", "alpha", "sqrt6"};
                return jet::Expr::param(params.find(names[pick(3)]));
            }
            default: return jet::Expr(jet::rational(pick(9) - 4, pick(3) + 1));
        }
    }

    jet::Expr polynomial(int depth) {
        if (depth == 0 || pick(4) == 0) return leaf();
        switch (pick(4)) {
            case 0: return polynomial(depth - 1) + polynomial(depth - 1);
            case 1: return polynomial(depth - 1) - polynomial(depth - 1);
            case 2: return polynomial(depth - 1) * polynomial(depth - 1);
            default: return polynomial(depth - 1).pow(pick(3) + 1);
        }
    }

    jet::Expr any(int depth) {
        if (depth == 0 || pick(4) == 0) return leaf();
        int choices = functions ? 7 : 4;
        switch (pick(choices)) {
            case 0: return any(depth - 1) + any(depth - 1);
            case 1: return any(depth - 1) - any(depth - 1);
            case 2: return any(depth - 1) * any(depth - 1);
            case 3: return any(depth - 1).pow(pick(3) + 1);
            case 4: {
                static const jet::Func fs[] = {jet::Func::Sin, jet::Func::Cos, jet::Func::Tan, jet::Func::Sec,
                                               jet::Func::Exp, jet::Func::Sqrt};
                return jet::Expr::func(fs[pick(6)], any(depth - 1));
            }
            case 5: {
                jet::Expr d = any(depth - 1);
                if (d.is_zero()) return any(depth - 1);
                return any(depth - 1) * d.pow(-(pick(2) + 1));
            }
            default: return any(depth - 1) * leaf();
        }
    }
};

}  // namespace pss::testing
