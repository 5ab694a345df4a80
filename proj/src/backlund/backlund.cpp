#include "pss/backlund/backlund.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>

#include "pss/error.hpp"
#include "pss/jet/ops.hpp"
#include "pss/numerics/fd.hpp"

namespace pss::backlund {

using jet::Expr;
using numerics::Field;
using numerics::JetSample;

namespace {

Expr num(double d) { return Expr(jet::Rational(d)); }

double xi1_at(const BTParams& p, double x, double t) {
    const double l1 = p.lambda1, l2 = p.lambda2;
    return l1 * x + (l1 * l1 * l1 - 3 * l1 * l2 * l2) * t + p.k1;
}

double xi2_at(const BTParams& p, double x, double t) {
    const double l1 = p.lambda1, l2 = p.lambda2;
    return -l2 * x + (l2 * l2 * l2 - 3 * l2 * l1 * l1) * t + p.k2;
}

int sign_of(double v) { return (v > 0) - (v < 0); }

SampledSolution finish(SampledSolution s) {
    if (numerics::masked_count(s.mask()) == s.mask().size()) throw EmptyMask("every grid point is masked");
    return s;
}

Field blank(const Grid& g) { return Field{g, std::vector<double>(g.size(), 0.0), Mask(g.size(), 0)}; }

// One RK4 step of (phi, psi)' = rate(s, phi, psi); false when the seed jet is unavailable.
template <class Rate>
bool rk4(Rate&& rate, double h, double& phi, double& psi) {
    PhiPsiRate k1, k2, k3, k4;
    if (!rate(0.0, phi, psi, k1)) return false;
    if (!rate(0.5 * h, phi + 0.5 * h * k1.phi, psi + 0.5 * h * k1.psi, k2)) return false;
    if (!rate(0.5 * h, phi + 0.5 * h * k2.phi, psi + 0.5 * h * k2.psi, k3)) return false;
    if (!rate(h, phi + h * k3.phi, psi + h * k3.psi, k4)) return false;
    phi += h / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi);
    psi += h / 6.0 * (k1.psi + 2 * k2.psi + 2 * k3.psi + k4.psi);
    return true;
}

enum class StepFault { None, BlowUp, Collision, Stopped };

StepFault check_step(double phi, double psi, double prev_psi, double limit) {
    if (!std::isfinite(phi) || !std::isfinite(psi) || std::abs(phi) > limit || std::abs(psi) > limit) {
        return StepFault::BlowUp;
    }
    if (psi == 0.0 || sign_of(psi) != sign_of(prev_psi)) return StepFault::Collision;
    return StepFault::None;
}

}  // namespace

void BTParams::validate() const {
    for (double v : {lambda1, lambda2, k1, k2}) {
        if (!std::isfinite(v)) throw InvalidArgument("Backlund parameters must be finite");
    }
    if (lambda1 == 0.0) throw InvalidArgument("lambda1 must be nonzero");
    if (sigma != 1 && sigma != -1) throw InvalidArgument("sigma must be +1 or -1");
}

Expr xi1(const BTParams& p) {
    const Expr l1 = num(p.lambda1), l2 = num(p.lambda2);
    return l1 * jet::xvar() + (l1.pow(3) - 3 * l1 * l2.pow(2)) * jet::tvar() + num(p.k1);
}

Expr xi2(const BTParams& p) {
    const Expr l1 = num(p.lambda1), l2 = num(p.lambda2);
    return -l2 * jet::xvar() + (l2.pow(3) - 3 * l2 * l1.pow(2)) * jet::tvar() + num(p.k2);
}

Expr vacuum_u(const BTParams& p) { return num(p.sigma * p.lambda1) * jet::exp(-xi2(p)) * jet::sec(xi1(p)); }

Expr vacuum_v(const BTParams& p) { return num(p.sigma * p.lambda1) * jet::exp(xi2(p)) * jet::sec(xi1(p)); }

namespace {

// k1, k2 such that xi1 = a, xi2 = log(r) at (x, t).
std::optional<BTParams> with_phase(BTParams p, double x, double t, double a, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) return std::nullopt;
    p.k1 = 0.0;
    p.k2 = 0.0;
    const double k1 = a - xi1_at(p, x, t), k2 = std::log(r) - xi2_at(p, x, t);
    p.k1 = k1;
    p.k2 = k2;
    return p;
}

}  // namespace

std::optional<BTParams> fit_vacuum(const BTParams& p, double x, double t, double phi, double psi) {
    BTParams q = p;
    q.sigma = 1;
    return with_phase(q, x, t, std::atan2(phi, psi), std::hypot(phi, psi));
}

std::optional<BTParams> fit_u0v1(const BTParams& p, double x, double t, double phi, double psi) {
    const double L = p.lambda1 * p.lambda1 + p.lambda2 * p.lambda2;
    const double c = L * phi - p.lambda2, s = -L * psi - p.lambda1;
    return with_phase(p, x, t, std::atan2(s, c), std::hypot(s, c));
}

namespace {

Expr u0v1_den(const BTParams& p) { return num(p.lambda1) + jet::exp(xi2(p)) * jet::sin(xi1(p)); }

Expr norm2(const BTParams& p) { return num(p.lambda1).pow(2) + num(p.lambda2).pow(2); }

}  // namespace

Expr u0v1_u(const BTParams& p) { return jet::divide(-num(p.lambda1) * norm2(p), u0v1_den(p)); }

Expr u0v1_v(const BTParams& p) {
    const Expr l1 = num(p.lambda1), l2 = num(p.lambda2), e = jet::exp(xi2(p));
    const Expr top = l1 * e + (l1.pow(2) - l2.pow(2)) * jet::sin(xi1(p)) + 2 * l1 * l2 * jet::cos(xi1(p));
    return jet::divide(-e * top, norm2(p) * u0v1_den(p));
}

Expr u0v1_phi(const BTParams& p) {
    return jet::divide(jet::exp(xi2(p)) * jet::cos(xi1(p)) + num(p.lambda2), norm2(p));
}

Expr u0v1_psi(const BTParams& p) {
    return jet::divide(-(jet::exp(xi2(p)) * jet::sin(xi1(p)) + num(p.lambda1)), norm2(p));
}

SampledSolution bt_vacuum(const BTParams& p, const Grid& g, double threshold) {
    p.validate();
    auto s = SampledSolution::closed_form(g, vacuum_u(p), vacuum_v(p));
    s.mask_small(jet::cos(xi1(p)), threshold);
    return finish(std::move(s));
}

SampledSolution bt_u0v1(const BTParams& p, const Grid& g, double threshold) {
    p.validate();
    auto s = SampledSolution::closed_form(g, u0v1_u(p), u0v1_v(p));
    s.mask_small(u0v1_den(p), threshold);
    return finish(std::move(s));
}

PhiPsiRate phipsi_x(const JetSample& s, double phi, double psi, double l1, double l2) {
    const double u = s.u[0], v = s.v[0];
    return {u * (psi * psi - phi * phi) + l1 * psi - l2 * phi + v, -2 * u * phi * psi - l1 * phi - l2 * psi};
}

PhiPsiRate phipsi_t(const JetSample& s, double phi, double psi, double l1, double l2) {
    const double u = s.u[0], ux = s.u[1], uxx = s.u[2];
    const double v = s.v[0], vx = s.v[1], vxx = s.v[2];
    const double l1s = l1 * l1, l2s = l2 * l2;
    const double K = uxx + l2 * ux - 2 * v * u * u + (l2s - l1s) * u;
    const double L = 2 * l2 * u + ux;
    const double wr = 2 * (u * vx - v * ux);
    const double diff = phi * phi - psi * psi;
    PhiPsiRate r;
    r.phi = K * diff - 2 * l1 * L * phi * psi + (l2 * (-2 * u * v - 3 * l1s + l2s) + wr) * phi +
            l1 * (2 * u * v + l1s - 3 * l2s) * psi - vxx + l2 * vx + 2 * u * v * v + (l1s - l2s) * v;
    r.psi = l1 * L * diff + 2 * K * phi * psi - l1 * (2 * u * v + l1s - 3 * l2s) * phi +
            (-l2 * (2 * u * v + 3 * l1s - l2s) + wr) * psi + l1 * (vx - 2 * v * l2);
    return r;
}

PseudopotentialField integrate_pseudopotential(const SampledSolution& seed, const BTParams& p, double phi0,
                                               double psi0, const IntegrationOptions& opt) {
    p.validate();
    const Grid& g = seed.grid();
    if (!std::isfinite(phi0) || !std::isfinite(psi0)) throw InvalidArgument("initial pseudopotential must be finite");
    if (psi0 == 0.0) throw MaskCollision("psi vanishes at the initial point");
    const double l1 = p.lambda1, l2 = p.lambda2;

    PseudopotentialField pp;
    pp.grid = g;
    pp.phi.assign(g.size(), std::nan(""));
    pp.psi.assign(g.size(), std::nan(""));
    pp.mask.assign(g.size(), 1);

    auto fail = [&](StepFault f, std::size_t last_valid, double x, double t) {
        if (f == StepFault::BlowUp) {
            throw BlowUp("pseudopotential exceeds " + std::to_string(opt.blowup) + " near (x, t) = (" +
                             std::to_string(x) + ", " + std::to_string(t) + ")",
                         last_valid);
        }
        throw MaskCollision("psi crosses zero near (x, t) = (" + std::to_string(x) + ", " + std::to_string(t) + ")");
    };

    // Along t at x0.
    std::vector<std::uint8_t> row_ok(g.nt, 0);
    {
        double phi = phi0, psi = psi0;
        const std::size_t k0 = g.index(0, 0);
        pp.phi[k0] = phi;
        pp.psi[k0] = psi;
        pp.mask[k0] = seed.masked(k0);
        row_ok[0] = 1;
        for (int j = 0; j + 1 < g.nt; ++j) {
            const double t = g.t(j);
            auto rate = [&](double s, double a, double b, PhiPsiRate& out) {
                const JetSample js = seed.jet_at(g.x0, t + s);
                if (!js.valid) return false;
                out = phipsi_t(js, a, b, l1, l2);
                return true;
            };
            const double prev = psi;
            if (!rk4(rate, g.dt, phi, psi)) break;
            if (auto f = check_step(phi, psi, prev, opt.blowup); f != StepFault::None) {
                fail(f, g.index(0, j), g.x0, g.t(j + 1));
            }
            const std::size_t k = g.index(0, j + 1);
            pp.phi[k] = phi;
            pp.psi[k] = psi;
            pp.mask[k] = seed.masked(k);
            row_ok[j + 1] = 1;
        }
    }

    // Along x on every row; rows are independent.
    struct RowFault {
        StepFault fault = StepFault::None;
        std::size_t last_valid = 0;
        double x = 0, t = 0;
    };
    std::vector<RowFault> faults(g.nt);
    numerics::for_each_index(static_cast<std::size_t>(g.nt), opt.exec, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        if (!row_ok[j]) return;
        const double t = g.t(j);
        double phi = pp.phi[g.index(0, j)], psi = pp.psi[g.index(0, j)];
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double x = g.x(i);
            auto rate = [&](double s, double a, double b, PhiPsiRate& out) {
                const JetSample js = seed.jet_at(x + s, t);
                if (!js.valid) return false;
                out = phipsi_x(js, a, b, l1, l2);
                return true;
            };
            const double prev = psi;
            if (!rk4(rate, g.dx, phi, psi)) return;
            if (auto f = check_step(phi, psi, prev, opt.blowup); f != StepFault::None) {
                faults[j] = {f, g.index(i, j), g.x(i + 1), t};
                return;
            }
            const std::size_t k = g.index(i + 1, j);
            pp.phi[k] = phi;
            pp.psi[k] = psi;
            pp.mask[k] = seed.masked(k);
        }
    });
    for (const auto& f : faults) {
        if (f.fault != StepFault::None) fail(f.fault, f.last_valid, f.x, f.t);
    }

    // Cross-consistency: t-derivative of the x-integrated field against the t-equations.
    static const std::vector<double> nodes{-2, -1, 0, 1, 2};
    const std::vector<double> w = numerics::fd_weights(0.0, nodes, 1);
    pp.defect = blank(g);
    numerics::for_each_index(g.size(), opt.exec, [&](std::size_t k) {
        const int i = g.col(k), j = g.row(k);
        double value = std::nan("");
        bool ok = j >= 2 && j + 2 < g.nt;
        for (int q = -2; ok && q <= 2; ++q) ok = !pp.mask[g.index(i, j + q)];
        if (ok) {
            const JetSample js = seed.jet(i, j);
            if (js.valid) {
                double dphi = 0.0, dpsi = 0.0;
                for (int q = 0; q < 5; ++q) {
                    dphi += w[q] * pp.phi[g.index(i, j + q - 2)];
                    dpsi += w[q] * pp.psi[g.index(i, j + q - 2)];
                }
                dphi /= g.dt;
                dpsi /= g.dt;
                const PhiPsiRate r = phipsi_t(js, pp.phi[k], pp.psi[k], l1, l2);
                value = std::max(std::abs(dphi - r.phi), std::abs(dpsi - r.psi));
            }
        }
        pp.defect.values[k] = value;
        pp.defect.mask[k] = !std::isfinite(value);
    });
    pp.defect_stats = numerics::abs_stats(pp.defect);
    return pp;
}

SampledSolution bt_transform(const SampledSolution& seed, const PseudopotentialField& pp, double lambda1) {
    const Grid& g = seed.grid();
    if (!(pp.grid == g)) throw InvalidArgument("pseudopotential and seed live on different grids");
    if (numerics::masked_count(pp.mask) == pp.mask.size()) throw EmptyMask("pseudopotential is masked everywhere");
    if (lambda1 == 0.0) std::clog << "warning: lambda1 = 0 makes the transformation the identity\n";
    std::vector<double> u(g.size()), v(g.size());
    Mask mask(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        mask[k] = pp.mask[k] || seed.masked(k);
        const double phi = pp.phi[k], psi = pp.psi[k];
        if (lambda1 == 0.0) {
            u[k] = seed.u()[k];
            v[k] = seed.v()[k];
        } else {
            u[k] = seed.u()[k] + lambda1 / psi;
            v[k] = seed.v()[k] + lambda1 * (phi * phi + psi * psi) / psi;
        }
    }
    return SampledSolution::from_arrays(g, std::move(u), std::move(v), std::move(mask));
}

Branch branch_from_pseudopotential(const PseudopotentialField& pp, double lambda1) {
    Branch b(pp.grid.size(), 0);
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (!pp.mask[k]) b[k] = sign_of(pp.phi[k] * lambda1 * pp.psi[k]);
    }
    return b;
}

Branch vacuum_branch(const BTParams& p, const Grid& g) {
    Branch b(g.size(), 0);
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) b[g.index(i, j)] = sign_of(p.lambda1 * std::tan(xi1_at(p, g.x(i), g.t(j))));
    }
    return b;
}

Branch u0v1_branch(const BTParams& p, const Grid& g) {
    Branch b(g.size(), 0);
    const double n2 = p.lambda1 * p.lambda1 + p.lambda2 * p.lambda2;
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double a = xi1_at(p, g.x(i), g.t(j)), e = std::exp(xi2_at(p, g.x(i), g.t(j)));
            const double phi = (e * std::cos(a) + p.lambda2) / n2;
            const double du = -p.lambda1 * n2 / (p.lambda1 + e * std::sin(a));
            b[g.index(i, j)] = sign_of(phi * du);
        }
    }
    return b;
}

namespace {

struct FirstOrderTerms {
    double e1, e2, e3, e4;
};

template <class Eval>
BTResidual residual_driver(const Grid& g, const Branch& branch, Exec exec, Eval&& eval) {
    if (branch.size() != g.size()) throw InvalidArgument("branch field does not match the grid");
    BTResidual r{blank(g), {}};
    std::vector<std::uint8_t> violation(g.size(), 0);
    numerics::for_each_index(g.size(), exec, [&](std::size_t k) {
        double value = std::nan("");
        const int sigma = branch[k] >= 0 ? 1 : -1;
        switch (eval(k, sigma, value)) {
            case 1: violation[k] = 1; break;
            default: break;
        }
        r.field.values[k] = value;
        r.field.mask[k] = !std::isfinite(value);
    });
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (violation[k]) {
            throw BranchViolation("negative radicand at (x, t) = (" + std::to_string(g.x(g.col(k))) + ", " +
                                  std::to_string(g.t(g.row(k))) + ")");
        }
    }
    r.stats = numerics::abs_stats(r.field);
    return r;
}

// Returns sqrt of the clamped radicand, or -1 on a genuine violation.
double root_of(double radicand) {
    if (radicand < -kRadicandTolerance) return -1.0;
    return std::sqrt(std::max(radicand, 0.0));
}

}  // namespace

BTResidual bt_first_order_residual(const SampledSolution& seed, const SampledSolution& transformed,
                                   const BTParams& p, const Branch& branch, Exec exec) {
    p.validate();
    const Grid& g = seed.grid();
    if (!(transformed.grid() == g)) throw InvalidArgument("solutions live on different grids");
    const double l1 = p.lambda1, l2 = p.lambda2, l1s = l1 * l1, l2s = l2 * l2;
    const double half = 0.5 * (l1s - l2s);
    return residual_driver(g, branch, exec, [&](std::size_t k, int sigma, double& value) {
        const JetSample a = seed.jet(g.col(k), g.row(k));
        const JetSample b = transformed.jet(g.col(k), g.row(k));
        if (!a.valid || !b.valid) return 0;
        const double u = a.u[0], ux = a.u[1], uxx = a.u[2], v = a.v[0], vx = a.v[1], vxx = a.v[2];
        const double U = b.u[0], V = b.v[0];
        const double D = U - u, E = V - v, R = D * E - l1s;
        const double s = root_of(R);
        if (s < 0) return 1;
        const double uv = u * v;
        const double e1 = (b.u[1] - ux) - (sigma * (U + u) * s + l2 * D);
        const double e2 = (b.v[1] - vx) - (sigma * (V + v) * s - l2 * E);
        const double e3 = (b.u_t - a.u_t) - (-2 * sigma * s * (uxx + l2 * ux + l2s * D - (U + u) * (uv + half)) -
                                             (D * (V - 3 * v) - 2 * l1s) * ux - D * (U + u) * vx +
                                             2 * l2 * D * (U * V + half) - 2 * l2 * (U + u) * R);
        const double e4 = (b.v_t - a.v_t) - (2 * sigma * s * (-vxx + l2 * vx - l2s * E + (V + v) * (uv + half)) -
                                             (E * (U - 3 * u) - 2 * l1s) * vx - E * (V + v) * ux -
                                             2 * l2 * E * (U * V + half) + 2 * l2 * (V + v) * R);
        value = std::max({std::abs(e1), std::abs(e2), std::abs(e3), std::abs(e4)});
        return 0;
    });
}

BTResidual bt_trivial_residual(const SampledSolution& transformed, const BTParams& p, const Branch& branch,
                               Exec exec) {
    p.validate();
    const Grid& g = transformed.grid();
    const double l1 = p.lambda1, l2 = p.lambda2, l1s = l1 * l1, l2s = l2 * l2;
    const double c = l2 * l2s - 3 * l2 * l1s;
    return residual_driver(g, branch, exec, [&](std::size_t k, int sigma, double& value) {
        const JetSample b = transformed.jet(g.col(k), g.row(k));
        if (!b.valid) return 0;
        const double U = b.u[0], V = b.v[0];
        const double s = root_of(U * V - l1s);
        if (s < 0) return 1;
        const double e1 = b.u[1] - (U * sigma * s + l2 * U);
        const double e2 = b.v[1] - (V * sigma * s - l2 * V);
        const double e3 = b.u_t - (U * (l1s - 3 * l2s) * sigma * s - U * c);
        const double e4 = b.v_t - (V * (l1s - 3 * l2s) * sigma * s + V * c);
        value = std::max({std::abs(e1), std::abs(e2), std::abs(e3), std::abs(e4)});
        return 0;
    });
}

}  // namespace pss::backlund
