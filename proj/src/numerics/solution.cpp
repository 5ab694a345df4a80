#include "pss/numerics/solution.hpp"

#include <algorithm>
#include <cmath>

#include "pss/error.hpp"
#include "pss/jet/ops.hpp"
#include "pss/numerics/fd.hpp"

namespace pss::numerics {

using jet::CompiledExpr;
using jet::Expr;
using jet::JetVar;

jet::CompiledExpr::Input JetSample::input() const {
    CompiledExpr::Input in{};
    for (int k = 0; k < 4; ++k) {
        in[k] = u[k];
        in[5 + k] = v[k];
    }
    in[10] = x;
    in[11] = t;
    return in;
}

namespace {

void require_xt_only(const Expr& e, const char* what) {
    if (e.max_dependent_order() >= 0) throw InvalidArgument(std::string(what) + " must depend on x and t only");
}

const Expr& null_expr() {
    static const Expr e;
    return e;
}

}  // namespace

JetSample SampledSolution::Closed::eval(double x, double t) const {
    thread_local std::vector<double> scratch_buf;
    if (scratch_buf.size() < scratch) scratch_buf.resize(scratch);
    CompiledExpr::Input in{};
    in[10] = x;
    in[11] = t;
    JetSample s;
    s.x = x;
    s.t = t;
    for (int k = 0; k < 4; ++k) {
        s.u[k] = du[k](in.data(), scratch_buf.data());
        s.v[k] = dv[k](in.data(), scratch_buf.data());
    }
    s.u_t = ut(in.data(), scratch_buf.data());
    s.v_t = vt(in.data(), scratch_buf.data());
    s.valid = std::isfinite(s.u_t) && std::isfinite(s.v_t);
    for (int k = 0; k < 4; ++k) s.valid = s.valid && std::isfinite(s.u[k]) && std::isfinite(s.v[k]);
    return s;
}

SampledSolution SampledSolution::closed_form(const Grid& g, const Expr& u, const Expr& v,
                                             const std::map<std::string, double>& params) {
    g.validate();
    require_xt_only(u, "u");
    require_xt_only(v, "v");
    auto c = std::make_shared<Closed>();
    c->u = u;
    c->v = v;
    Expr du = u, dv = v;
    for (int k = 0; k < 4; ++k) {
        c->du[k] = CompiledExpr(du, params);
        c->dv[k] = CompiledExpr(dv, params);
        c->scratch = std::max({c->scratch, c->du[k].scratch_size(), c->dv[k].scratch_size()});
        du = jet::diff(du, JetVar::x());
        dv = jet::diff(dv, JetVar::x());
    }
    c->ut = CompiledExpr(jet::diff(u, JetVar::t()), params);
    c->vt = CompiledExpr(jet::diff(v, JetVar::t()), params);
    c->scratch = std::max({c->scratch, c->ut.scratch_size(), c->vt.scratch_size()});

    SampledSolution s;
    s.grid_ = g;
    s.u_.assign(g.size(), 0.0);
    s.v_.assign(g.size(), 0.0);
    s.mask_.assign(g.size(), 0);
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            JetSample p = c->eval(g.x(i), g.t(j));
            std::size_t k = g.index(i, j);
            s.u_[k] = p.u[0];
            s.v_[k] = p.v[0];
            if (!p.valid) s.mask_[k] = 1;
        }
    }
    s.closed_ = std::move(c);
    return s;
}

SampledSolution SampledSolution::from_arrays(const Grid& g, std::vector<double> u, std::vector<double> v, Mask mask) {
    g.validate();
    if (u.size() != g.size() || v.size() != g.size()) throw InvalidArgument("sample arrays do not match the grid");
    if (mask.empty()) mask.assign(g.size(), 0);
    if (mask.size() != g.size()) throw InvalidArgument("mask does not match the grid");
    SampledSolution s;
    s.grid_ = g;
    s.u_ = std::move(u);
    s.v_ = std::move(v);
    s.mask_ = std::move(mask);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(s.u_[k]) || !std::isfinite(s.v_[k])) s.mask_[k] = 1;
    }
    s.build_derivs();
    return s;
}

void SampledSolution::build_derivs() {
    const Grid& g = grid_;
    auto d = std::make_shared<Derivs>();
    for (int k = 0; k < 4; ++k) {
        d->du[k].assign(g.size(), 0.0);
        d->dv[k].assign(g.size(), 0.0);
    }
    d->ut.assign(g.size(), 0.0);
    d->vt.assign(g.size(), 0.0);
    d->bad = mask_;
    auto touches_mask = [&](const Stencil& st, std::size_t base, std::ptrdiff_t stride) {
        for (std::size_t q = 0; q < st.w.size(); ++q) {
            if (mask_[base + (st.first + static_cast<std::ptrdiff_t>(q)) * stride]) return true;
        }
        return false;
    };
    for (int j = 0; j < g.nt; ++j) {
        const std::size_t row = g.index(0, j);
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            for (int m = 0; m < 4; ++m) {
                Stencil st = fd_stencil(i, g.nx, m, g.dx);
                d->du[m][k] = apply_stencil(st, u_.data() + row, 1);
                d->dv[m][k] = apply_stencil(st, v_.data() + row, 1);
                if (touches_mask(st, row, 1)) d->bad[k] = 1;
            }
        }
    }
    for (int i = 0; i < g.nx; ++i) {
        const std::size_t col = g.index(i, 0);
        for (int j = 0; j < g.nt; ++j) {
            const std::size_t k = g.index(i, j);
            Stencil st = fd_stencil(j, g.nt, 1, g.dt);
            d->ut[k] = apply_stencil(st, u_.data() + col, g.nx);
            d->vt[k] = apply_stencil(st, v_.data() + col, g.nx);
            if (touches_mask(st, col, g.nx)) d->bad[k] = 1;
        }
    }
    derivs_ = std::move(d);
}

double SampledSolution::mask_fraction() const {
    return mask_.empty() ? 0.0 : static_cast<double>(masked_count(mask_)) / static_cast<double>(mask_.size());
}

void SampledSolution::mask_small(const Expr& e, double threshold, const std::map<std::string, double>& params) {
    require_xt_only(e, "mask expression");
    CompiledExpr c(e, params);
    std::vector<double> scratch(c.scratch_size());
    Mask extra(grid_.size(), 0);
    for (int j = 0; j < grid_.nt; ++j) {
        for (int i = 0; i < grid_.nx; ++i) {
            CompiledExpr::Input in{};
            in[10] = grid_.x(i);
            in[11] = grid_.t(j);
            double val = c(in.data(), scratch.data());
            if (!std::isfinite(val) || std::abs(val) < threshold) extra[grid_.index(i, j)] = 1;
        }
    }
    mask_points(dilate(extra, grid_));
}

void SampledSolution::mask_points(const Mask& extra) {
    if (extra.size() != mask_.size()) throw InvalidArgument("mask does not match the grid");
    for (std::size_t k = 0; k < mask_.size(); ++k) mask_[k] = mask_[k] || extra[k];
    if (!closed_) build_derivs();
}

JetSample SampledSolution::jet(int i, int j) const {
    const std::size_t k = grid_.index(i, j);
    JetSample s;
    if (closed_) {
        s = closed_->eval(grid_.x(i), grid_.t(j));
    } else {
        s.x = grid_.x(i);
        s.t = grid_.t(j);
        for (int m = 0; m < 4; ++m) {
            s.u[m] = derivs_->du[m][k];
            s.v[m] = derivs_->dv[m][k];
        }
        s.u_t = derivs_->ut[k];
        s.v_t = derivs_->vt[k];
        s.valid = !derivs_->bad[k];
    }
    if (mask_[k]) s.valid = false;
    return s;
}

JetSample SampledSolution::jet_at(double x, double t) const {
    if (closed_) return closed_->eval(x, t);
    const Grid& g = grid_;
    double fx = (x - g.x0) / g.dx, ft = (t - g.t0) / g.dt;
    int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
    int j = std::clamp(static_cast<int>(std::floor(ft)), 0, g.nt - 2);
    double a = fx - i, b = ft - j;
    JetSample s;
    s.x = x;
    s.t = t;
    s.valid = true;
    const double w[4] = {(1 - a) * (1 - b), a * (1 - b), (1 - a) * b, a * b};
    const std::size_t ks[4] = {g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)};
    for (int q = 0; q < 4; ++q) {
        const std::size_t k = ks[q];
        if (derivs_->bad[k]) s.valid = false;
        for (int m = 0; m < 4; ++m) {
            s.u[m] += w[q] * derivs_->du[m][k];
            s.v[m] += w[q] * derivs_->dv[m][k];
        }
        s.u_t += w[q] * derivs_->ut[k];
        s.v_t += w[q] * derivs_->vt[k];
    }
    return s;
}

const Expr& SampledSolution::u_expr() const { return closed_ ? closed_->u : null_expr(); }
const Expr& SampledSolution::v_expr() const { return closed_ ? closed_->v : null_expr(); }

}  // namespace pss::numerics
