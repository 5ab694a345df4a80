#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "pss/jet/expr.hpp"

namespace pss::jet {

/// Flattened double-precision evaluator for a fixed expression with parameters bound once.
/// Evaluation is reentrant: all mutable state lives in the caller's scratch buffer.
class CompiledExpr {
public:
    /// Input slots: z0..z4 -> 0..4, y0..y4 -> 5..9, x -> 10, t -> 11.
    static constexpr int kSlots = 12;
    using Input = std::array<double, kSlots>;
    static int slot(JetVar v);

    CompiledExpr() = default;
    /// Throws UnboundSymbol if a parameter (other than a reduction surd) has no value.
    CompiledExpr(const Expr& e, const std::map<std::string, double>& params);

    std::size_t scratch_size() const { return scratch_; }
    /// Returns NaN instead of throwing on a domain violation (pole, negative sqrt, 0^-k).
    double operator()(const double* in, double* scratch) const;
    /// Convenience wrapper; throws NumericalDomain when the value is not finite.
    double eval(const Input& in) const;

private:
    enum class Kind : unsigned char { Slot, Const, Func };
    struct AtomCode {
        Kind kind;
        int slot = 0;
        double value = 0.0;
        Func func = Func::Sin;
        int child = -1;
    };
    struct Power {
        int atom;
        int exp;
    };
    std::vector<AtomCode> atoms_;
    std::vector<CompiledExpr> children_;
    std::vector<std::size_t> child_offset_;
    std::vector<double> coef_;
    std::vector<std::size_t> term_begin_;  // size = terms + 1, into powers_
    std::vector<Power> powers_;
    std::size_t scratch_ = 0;
};

}  // namespace pss::jet
