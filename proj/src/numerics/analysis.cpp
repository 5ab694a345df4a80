#include "pss/numerics/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "pss/error.hpp"

namespace pss::numerics {

using jet::CompiledExpr;

namespace {

double run(const CompiledExpr& c, const CompiledExpr::Input& in) {
    thread_local std::vector<double> buf;
    if (buf.size() < c.scratch_size()) buf.resize(c.scratch_size());
    return c(in.data(), buf.data());
}

Field blank(const Grid& g) { return Field{g, std::vector<double>(g.size(), 0.0), Mask(g.size(), 0)}; }

using Mat4 = Eigen::Matrix4d;

// Real 4x4 form of a complex 2x2 matrix: [[Re, -Im], [Im, Re]].
struct CompiledMatrix {
    std::array<CompiledExpr, 4> re, im;
    bool complex = false;

    CompiledMatrix(const core::Matrix2& m, const ParamValues& params) {
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                re[2 * r + c] = CompiledExpr(m[r][c].re, params);
                im[2 * r + c] = CompiledExpr(m[r][c].im, params);
                complex = complex || !m[r][c].im.is_zero();
            }
        }
    }

    bool eval(const JetSample& s, Mat4& out) const {
        if (!s.valid) return false;
        const auto in = s.input();
        out.setZero();
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const double a = run(re[2 * r + c], in);
                const double b = complex ? run(im[2 * r + c], in) : 0.0;
                if (!std::isfinite(a) || !std::isfinite(b)) return false;
                out(r, c) = a;
                out(r + 2, c + 2) = a;
                out(r, c + 2) = -b;
                out(r + 2, c) = b;
            }
        }
        return true;
    }
};

// One classical RK4 step of Phi' = M(s) Phi from Phi = I; `at(s)` samples the solution.
template <class At>
bool rk4_transport(const CompiledMatrix& M, At&& at, double h, Mat4& T) {
    Mat4 m0, m1, m2;
    if (!M.eval(at(0.0), m0) || !M.eval(at(0.5 * h), m1) || !M.eval(at(h), m2)) return false;
    const Mat4 I = Mat4::Identity();
    const Mat4 k1 = m0;
    const Mat4 k2 = m1 * (I + 0.5 * h * k1);
    const Mat4 k3 = m1 * (I + 0.5 * h * k2);
    const Mat4 k4 = m2 * (I + h * k3);
    T = I + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return true;
}

}  // namespace

Residual pde_residual(const core::EvolutionSystem& sys, const SampledSolution& sol, const ParamValues& params,
                      Exec exec) {
    const Grid& g = sol.grid();
    const CompiledExpr F(sys.F, params), G(sys.G, params);
    Residual r{blank(g), {}};
    for_each_index(g.size(), exec, [&](std::size_t k) {
        const JetSample s = sol.jet(g.col(k), g.row(k));
        double value = std::nan("");
        if (s.valid) {
            const auto in = s.input();
            value = std::max(std::abs(s.u_t - run(F, in)), std::abs(s.v_t - run(G, in)));
        }
        r.field.values[k] = value;
        r.field.mask[k] = !std::isfinite(value);
    });
    r.stats = abs_stats(r.field);
    return r;
}

MetricField metric_field(const core::AssociatedFunctions& f, const SampledSolution& sol, const ParamValues& params,
                         Exec exec) {
    const Grid& g = sol.grid();
    const core::Metric m = core::metric_coefficients(f);
    const CompiledExpr E(m.E, params), F(m.F, params), G(m.G, params);
    // Array derivatives switch to one-sided stencils near the x-edges; their truncation error is not
    // smooth, and second differences of the metric would amplify it to O(1). Keep centered points only.
    int ring = 0;
    if (sol.provenance() == Provenance::Array) {
        const int order = std::max({m.E.max_dependent_order(), m.F.max_dependent_order(), m.G.max_dependent_order()});
        ring = (order + 1) / 2;
    }
    MetricField out{blank(g), blank(g), blank(g)};
    for_each_index(g.size(), exec, [&](std::size_t k) {
        const int i = g.col(k);
        const JetSample s = sol.jet(i, g.row(k));
        double e = std::nan(""), fv = e, gv = e;
        if (s.valid && i >= ring && i < g.nx - ring) {
            const auto in = s.input();
            e = run(E, in);
            fv = run(F, in);
            gv = run(G, in);
        }
        const bool bad = !(std::isfinite(e) && std::isfinite(fv) && std::isfinite(gv));
        out.E.values[k] = e;
        out.F.values[k] = fv;
        out.G.values[k] = gv;
        out.E.mask[k] = out.F.mask[k] = out.G.mask[k] = bad;
    });
    return out;
}

Curvature gaussian_curvature(const MetricField& m, double degeneracy, Exec exec) {
    const Grid& g = m.E.grid;
    if (!(m.F.grid == g) || !(m.G.grid == g)) throw InvalidArgument("metric components on different grids");
    Curvature out{blank(g), Mask(g.size(), 0)};
    const double hx = g.dx, ht = g.dt;
    for_each_index(g.size(), exec, [&](std::size_t k) {
        const int i = g.col(k), j = g.row(k);
        auto masked = [&](std::size_t q) { return m.E.mask[q] || m.F.mask[q] || m.G.mask[q]; };
        double K = std::nan("");
        bool ok = i > 0 && j > 0 && i + 1 < g.nx && j + 1 < g.nt;
        for (int dj = -1; ok && dj <= 1; ++dj) {
            for (int di = -1; ok && di <= 1; ++di) ok = !masked(g.index(i + di, j + dj));
        }
        if (ok) {
            const double E = m.E.values[k], F = m.F.values[k], G = m.G.values[k];
            const double det = E * G - F * F;
            if (det <= degeneracy) {
                out.degenerate[k] = 1;
            } else {
                auto at = [&](const Field& f, int di, int dj) { return f.values[g.index(i + di, j + dj)]; };
                auto d_x = [&](const Field& f) { return (at(f, 1, 0) - at(f, -1, 0)) / (2 * hx); };
                auto d_t = [&](const Field& f) { return (at(f, 0, 1) - at(f, 0, -1)) / (2 * ht); };
                auto d_xx = [&](const Field& f) { return (at(f, 1, 0) - 2 * at(f, 0, 0) + at(f, -1, 0)) / (hx * hx); };
                auto d_tt = [&](const Field& f) { return (at(f, 0, 1) - 2 * at(f, 0, 0) + at(f, 0, -1)) / (ht * ht); };
                auto d_xt = [&](const Field& f) {
                    return (at(f, 1, 1) - at(f, 1, -1) - at(f, -1, 1) + at(f, -1, -1)) / (4 * hx * ht);
                };
                const double Ex = d_x(m.E), Et = d_t(m.E), Fx = d_x(m.F), Ft = d_t(m.F), Gx = d_x(m.G), Gt = d_t(m.G);
                const double a = -0.5 * d_tt(m.E) + d_xt(m.F) - 0.5 * d_xx(m.G);
                const Eigen::Matrix3d M1{{a, 0.5 * Ex, Fx - 0.5 * Et}, {Ft - 0.5 * Gx, E, F}, {0.5 * Gt, F, G}};
                const Eigen::Matrix3d M2{{0.0, 0.5 * Et, 0.5 * Gx}, {0.5 * Et, E, F}, {0.5 * Gx, F, G}};
                K = (M1.determinant() - M2.determinant()) / (det * det);
            }
        }
        out.K.values[k] = K;
        out.K.mask[k] = !std::isfinite(K);
    });
    return out;
}

Holonomy holonomy_defect(const core::LinearProblem& lp, const SampledSolution& sol, const ParamValues& params,
                         Exec exec) {
    const Grid& g = sol.grid();
    const CompiledMatrix A(lp.A, params), B(lp.B, params);
    const int px = g.nx - 1, pt = g.nt - 1;

    // Edge transports: along x on every row, along t on every column.
    std::vector<Mat4> tx(static_cast<std::size_t>(px) * g.nt), tt(static_cast<std::size_t>(g.nx) * pt);
    std::vector<std::uint8_t> ok_x(tx.size(), 0), ok_t(tt.size(), 0);
    for_each_index(tx.size(), exec, [&](std::size_t e) {
        const int i = static_cast<int>(e % px), j = static_cast<int>(e / px);
        const double x = g.x(i), t = g.t(j);
        ok_x[e] = rk4_transport(A, [&](double s) { return sol.jet_at(x + s, t); }, g.dx, tx[e]);
    });
    for_each_index(tt.size(), exec, [&](std::size_t e) {
        const int i = static_cast<int>(e % g.nx), j = static_cast<int>(e / g.nx);
        const double x = g.x(i), t = g.t(j);
        ok_t[e] = rk4_transport(B, [&](double s) { return sol.jet_at(x, t + s); }, g.dt, tt[e]);
    });

    Grid pg{g.x0 + 0.5 * g.dx, g.t0 + 0.5 * g.dt, g.dx, g.dt, px, pt};
    Holonomy h{blank(pg), {}};
    for_each_index(pg.size(), exec, [&](std::size_t k) {
        const int i = static_cast<int>(k % px), j = static_cast<int>(k / px);
        const std::size_t bottom = static_cast<std::size_t>(j) * px + i, top = bottom + px;
        const std::size_t left = static_cast<std::size_t>(j) * g.nx + i, right = left + 1;
        if (!(ok_x[bottom] && ok_x[top] && ok_t[left] && ok_t[right])) {
            h.defect.values[k] = std::nan("");
            h.defect.mask[k] = 1;
            return;
        }
        const Mat4 diff = tt[right] * tx[bottom] - tx[top] * tt[left];
        Eigen::JacobiSVD<Mat4> svd(diff);
        h.defect.values[k] = svd.singularValues()(0) / (g.dx * g.dt);
    });
    h.stats = abs_stats(h.defect);
    return h;
}

}  // namespace pss::numerics
