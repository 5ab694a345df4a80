#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pss/backlund/backlund.hpp"
#include "pss/core/json_io.hpp"
#include "pss/core/verify.hpp"
#include "pss/error.hpp"
#include "pss/families/families.hpp"
#include "pss/jet/ops.hpp"
#include "pss/numerics/analysis.hpp"
#include "pss/numerics/io.hpp"

namespace pss::cli {

using nlohmann::ordered_json;
using numerics::Field;
using numerics::Grid;
using numerics::SampledSolution;
using numerics::Stats;

namespace {

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + name + " under " + dir);
    f << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Successive refinements h, h/2, h/4 of the base grid.
std::vector<Grid> ladder(const Grid& g) { return {g, g.refined(), g.refined().refined()}; }

// Same extent at 4h, 2h, h; empty unless both axes coarsen twice to at least 17 points.
std::vector<Grid> coarse_ladder(const Grid& g) {
    auto half = [](Grid c) {
        c.dx *= 2;
        c.dt *= 2;
        c.nx = (c.nx - 1) / 2 + 1;
        c.nt = (c.nt - 1) / 2 + 1;
        return c;
    };
    if ((g.nx - 1) % 4 != 0 || (g.nt - 1) % 4 != 0 || std::min(g.nx, g.nt) < 65) return {};
    return {half(half(g)), half(g), g};
}

// Each successive order lies in [lo, hi], unless the finer error is already at the floor.
bool orders_within(const std::vector<double>& errors, double lo, double hi, double floor) {
    const auto orders = numerics::convergence_orders(errors);
    for (std::size_t k = 0; k < orders.size(); ++k) {
        if (errors[k + 1] < floor) continue;
        if (!(orders[k] >= lo && orders[k] <= hi)) return false;
    }
    return true;
}

struct Study {
    std::vector<Grid> grids;
    std::vector<Stats> stats;

    std::vector<double> maxima() const {
        std::vector<double> m;
        for (const auto& s : stats) m.push_back(s.max);
        return m;
    }

    ordered_json to_json() const {
        ordered_json j;
        const auto orders = numerics::convergence_orders(maxima());
        j["grids"] = ordered_json::array();
        for (std::size_t k = 0; k < grids.size(); ++k) {
            std::optional<double> order;
            if (k > 0 && std::isfinite(orders[k - 1])) order = orders[k - 1];
            j["grids"].push_back(numerics::stats_json(stats[k], grids[k], order));
        }
        return j;
    }
};

// |K - target| over points where K is defined.
Field curvature_error(const numerics::Curvature& c, double target) {
    Field e = c.K;
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        if (!e.mask[k]) e.values[k] = std::abs(e.values[k] - target);
    }
    return e;
}

// Share of interior points (boundary ring excluded) without a curvature value.
double interior_mask_fraction(const Field& K) {
    const Grid& g = K.grid;
    std::size_t masked = 0, total = 0;
    for (int j = 1; j + 1 < g.nt; ++j) {
        for (int i = 1; i + 1 < g.nx; ++i) {
            ++total;
            masked += K.mask[g.index(i, j)] != 0;
        }
    }
    return total ? static_cast<double>(masked) / static_cast<double>(total) : 1.0;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b, const numerics::Mask& ma,
                const numerics::Mask& mb) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!ma[k] && !mb[k]) m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

ordered_json bt_json(const backlund::BTParams& p) {
    return {{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"sigma", p.sigma}, {"k1", p.k1}, {"k2", p.k2}};
}

core::SystemDocument load_system(const std::string& spec) {
    if (std::filesystem::exists(spec)) return core::read_document(spec);
    for (const auto& e : families::catalog()) {
        if (e.name == spec) return e.doc;
    }
    throw InvalidArgument("no system file or catalog entry named '" + spec + "'");
}

}  // namespace

int cmd_verify(const Context& ctx, const std::string& path) {
    const core::SystemDocument doc = core::read_document(path);
    const auto report = core::verify_describes(doc.system, doc.fij, ctx.seed);
    ordered_json j;
    j["command"] = "verify";
    j["file"] = path;
    j["description"] = doc.description;
    j["seed"] = ctx.seed;
    const ordered_json body = core::report_to_json(report);
    for (const auto& [k, v] : body.items()) j[k] = v;
    ctx.out << dump(j);
    if (!ctx.out_dir.empty()) write_text(ctx.out_dir, "report.json", dump(j));
    return report.verdict == core::Verdict::Fails ? kFailed : kOk;
}

int cmd_generate(const Context& ctx, const std::string& family, const GenerateOptions& opt) {
    std::map<std::string, std::string> b;
    for (auto& [k, v] : parse_bindings(ctx.params_text)) b[k] = v;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = b.find(key);
        if (it == b.end()) return std::nullopt;
        std::string v = it->second;
        b.erase(it);
        return v;
    };
    auto need = [&](const std::string& key) {
        auto v = take(key);
        if (!v) throw InvalidArgument("family '" + family + "' needs parameter '" + key + "'");
        return *v;
    };
    auto delta_of = [&](int fallback) {
        auto v = take("delta");
        if (!v) return fallback;
        if (*v == "1" || *v == "+1") return 1;
        if (*v == "-1") return -1;
        throw InvalidArgument("delta must be +1 or -1");
    };
    auto placement_of = [&](const std::string& prefix) {
        return families::parse_placement(family.substr(prefix.size()));
    };

    core::SystemDocument doc;
    if (family.rfind("kdv-", 0) == 0) {
        families::KdVFamilyInput in;
        in.eta = in.params.declare("eta");
        for (const auto& name : opt.declare) in.params.declare(name);
        auto expr = [&](const std::string& key) { return jet::parse_expr(need(key), in.params); };
        in.placement = placement_of("kdv-");
        in.delta = delta_of(1);
        if (auto a = take("a")) in.a = jet::parse_expr(*a, in.params);
        in.a1 = expr("a1");
        in.b1 = expr("b1");
        in.a2 = expr("a2");
        in.b2 = expr("b2");
        in.c = expr("c");
        in.p = expr("p");
        in.description = opt.description.empty() ? "KdV-type family (" + family.substr(4) + ")" : opt.description;
        if (!b.empty()) throw InvalidArgument("unused parameter '" + b.begin()->first + "'");
        doc = families::generate_kdv_family(in);
    } else if (family.rfind("general-", 0) == 0) {
        families::GeneralFamilyInput in;
        for (const auto& name : opt.declare) in.params.declare(name);
        auto expr = [&](const std::string& key) { return jet::parse_expr(need(key), in.params); };
        in.placement = placement_of("general-");
        in.delta = delta_of(1);
        in.ell = expr("ell");
        in.g = expr("g");
        in.h = expr("h");
        in.P = expr("P");
        in.q = expr("q");
        if (auto H = take("H")) in.H = jet::parse_expr(*H, in.params);
        in.description = opt.description.empty() ? "general family (" + family.substr(8) + ")" : opt.description;
        if (!b.empty()) throw InvalidArgument("unused parameter '" + b.begin()->first + "'");
        doc = families::generate_general(in);
    } else if (family == "nls") {
        const auto k = jet::parse_expr(need("k")).constant_value();
        if (!k) throw InvalidArgument("k must be a rational number");
        const int delta = delta_of(0);
        if (delta == 0) throw InvalidArgument("family 'nls' needs parameter 'delta'");
        if (!b.empty()) throw InvalidArgument("unused parameter '" + b.begin()->first + "'");
        doc = families::nls_family(*k, delta);
    } else if (family == "mkdv") {
        const int delta = delta_of(0);
        if (delta == 0) throw InvalidArgument("family 'mkdv' needs parameter 'delta'");
        if (!b.empty()) throw InvalidArgument("unused parameter '" + b.begin()->first + "'");
        doc = families::mkdv_family(delta);
    } else {
        throw InvalidArgument("unknown family '" + family + "'");
    }
    if (!opt.description.empty()) doc.description = opt.description;
    const std::string text = core::dump_document(doc);
    ctx.out << text;
    if (!ctx.out_dir.empty()) write_text(ctx.out_dir, family + ".json", text);
    return kOk;
}

int cmd_backlund(const Context& ctx, const std::string& seed_spec) {
    const Params params(ctx.params_text);
    const Defaults& d = ctx.defaults;
    const SolutionSpec seed = resolve_solution(seed_spec, params, d);
    backlund::BTParams bt;
    bt.lambda1 = params.get("lambda1", 1.0);
    bt.lambda2 = params.get("lambda2", 0.0);
    bt.sigma = static_cast<int>(params.get("sigma", 1.0));
    bt.k1 = params.get("k1", 0.0);
    bt.k2 = params.get("k2", 0.0);
    bt.validate();
    const Grid base = ctx.grid;
    base.validate();

    // Initial pseudopotential: the closed form with the given k1, k2 where one is known.
    double phi0 = 0.0, psi0 = 1.0;
    if (seed.seed_family == "u0v1") {
        auto at = [&](const jet::Expr& e) {
            jet::Point p;
            p.jets[jet::JetVar::x()] = base.x0;
            p.jets[jet::JetVar::t()] = base.t0;
            return jet::eval(e, p);
        };
        phi0 = at(backlund::u0v1_phi(bt));
        psi0 = at(backlund::u0v1_psi(bt));
    } else if (seed.seed_family == "vacuum") {
        jet::Point p;
        p.jets[jet::JetVar::x()] = base.x0;
        p.jets[jet::JetVar::t()] = base.t0;
        const double a = jet::eval(backlund::xi1(bt), p), r = std::exp(jet::eval(backlund::xi2(bt), p));
        phi0 = r * std::sin(a);
        psi0 = r * std::cos(a);
    }
    phi0 = params.get("phi0", phi0);
    psi0 = params.get("psi0", psi0);
    const double eta = params.get("eta", 1.5);

    const auto& kdv = families::catalog_entry("coupled-kdv").doc;
    backlund::IntegrationOptions opt;
    opt.blowup = d["blowup"];

    auto transform = [&](const Grid& g, const SampledSolution& s) {
        const auto pp = backlund::integrate_pseudopotential(s, bt, phi0, psi0, opt);
        return std::pair{pp, backlund::bt_transform(s, pp, bt.lambda1)};
    };
    auto curvature_of = [&](const SampledSolution& out) {
        const auto m = numerics::metric_field(kdv.fij, out, {{"eta", eta}});
        return numerics::abs_stats(curvature_error(numerics::gaussian_curvature(m, d["degeneracy"]), -kdv.fij.delta));
    };

    Study pde, bt_res, defect, curv;
    SampledSolution base_out, base_seed;
    double mask_fraction = 0.0;
    for (const Grid& g : ladder(base)) {
        const SampledSolution s = seed.sample(g);
        const auto [pp, out] = transform(g, s);
        if (pde.grids.empty()) {
            mask_fraction = out.mask_fraction();
            if (mask_fraction > d["mask_fraction_limit"]) {
                throw EmptyMask("transformed solution is masked on " + std::to_string(mask_fraction * 100) + "% of the grid");
            }
            base_out = out;
            base_seed = s;
        }
        for (Study* st : {&pde, &bt_res, &defect, &curv}) st->grids.push_back(g);
        pde.stats.push_back(numerics::pde_residual(kdv.system, out).stats);
        bt_res.stats.push_back(
            backlund::bt_first_order_residual(s, out, bt, backlund::branch_from_pseudopotential(pp, bt.lambda1)).stats);
        defect.stats.push_back(pp.defect_stats);
        curv.stats.push_back(curvature_of(out));
    }

    const double lo = d["order_min"], hi = d["order_max"], floor = d["order_floor"];
    ordered_json checks;
    auto add = [&](const char* name, const Study& st, bool pass, ordered_json extra = {}) {
        ordered_json j = st.to_json();
        for (const auto& [k, v] : extra.items()) j[k] = v;
        j["pass"] = pass;
        checks[name] = j;
        return pass;
    };
    bool pass = true;
    pass &= add("pde_residual", pde, orders_within(pde.maxima(), lo, hi, floor));
    pass &= add("bt_residual", bt_res, orders_within(bt_res.maxima(), lo, hi, floor));
    pass &= add("pseudopotential_defect", defect,
                orders_within(defect.maxima(), d["defect_order_min"], INFINITY, floor));
    // Curvature takes fourth differences of the integrated arrays: refinement can reach the round-off regime
    // before the coarse grid is asymptotic, so a study on coarsenings of the given grid may certify instead.
    const double ktol = d["curvature_tolerance"];
    auto certifies = [&](const Study& st) {
        return st.stats.back().max < ktol && orders_within(st.maxima(), lo, hi, floor);
    };
    ordered_json curv_extra = {{"target", -kdv.fij.delta}, {"eta", eta}};
    bool curv_ok = certifies(curv);
    if (!curv_ok) {
        Study coarse;
        for (const Grid& g : coarse_ladder(base)) {
            coarse.grids.push_back(g);
            coarse.stats.push_back(g == base ? curv.stats.front() : curvature_of(transform(g, seed.sample(g)).second));
        }
        if (!coarse.grids.empty()) {
            curv_ok = certifies(coarse);
            ordered_json cj = coarse.to_json();
            cj["pass"] = curv_ok;
            curv_extra["coarsened"] = cj;
        }
    }
    pass &= add("curvature", curv, curv_ok, curv_extra);

    if (!seed.seed_family.empty()) {
        const bool vac = seed.seed_family == "vacuum";
        const auto fit = vac ? backlund::fit_vacuum(bt, base.x0, base.t0, phi0, psi0)
                             : backlund::fit_u0v1(bt, base.x0, base.t0, phi0, psi0);
        ordered_json j;
        j["family"] = seed.seed_family;
        if (!fit) {
            j["pass"] = false;
            j["reason"] = "no closed-form constants match the initial pseudopotential";
            pass = false;
        } else {
            const double thr = d["mask_threshold"];
            const SampledSolution closed = vac ? backlund::bt_vacuum(*fit, base, thr) : backlund::bt_u0v1(*fit, base, thr);
            const auto branch = vac ? backlund::vacuum_branch(*fit, base) : backlund::u0v1_branch(*fit, base);
            const double eu = max_diff(base_out.u(), closed.u(), base_out.mask(), closed.mask());
            const double ev = max_diff(base_out.v(), closed.v(), base_out.mask(), closed.mask());
            const double r_pde = numerics::pde_residual(kdv.system, closed).stats.max;
            const double r_bt = backlund::bt_first_order_residual(base_seed, closed, *fit, branch).stats.max;
            const bool ok = std::max(eu, ev) < d["closed_form_tolerance"] && r_pde < d["residual_analytic"] &&
                            r_bt < d["bt_residual"];
            j["params"] = bt_json(*fit);
            j["max_error_u"] = eu;
            j["max_error_v"] = ev;
            j["pde_residual"] = r_pde;
            j["bt_residual"] = r_bt;
            j["pass"] = ok;
            pass &= ok;
        }
        checks["closed_form"] = j;
    }

    ordered_json report;
    report["command"] = "backlund";
    report["seed_solution"] = seed.name;
    report["params"] = bt_json(bt);
    report["params"]["phi0"] = phi0;
    report["params"]["psi0"] = psi0;
    report["grid"] = numerics::grid_json(base);
    report["mask_fraction"] = mask_fraction;
    report["thresholds"] = d.to_json();
    report["checks"] = checks;
    report["pass"] = pass;
    ctx.out << dump(report);
    if (!ctx.out_dir.empty()) {
        write_text(ctx.out_dir, "certification.json", dump(report));
        std::ostringstream csv;
        numerics::write_solution_csv(csv, base, base_out.u(), base_out.v(), base_out.mask());
        write_text(ctx.out_dir, "solution.csv", csv.str());
    }
    return pass ? kOk : kFailed;
}

int cmd_curvature(const Context& ctx, const CurvatureOptions& opt) {
    const Params params(ctx.params_text);
    const Defaults& d = ctx.defaults;
    const Grid base = ctx.grid;
    base.validate();

    std::function<numerics::MetricField(const Grid&)> metric;
    double target = 0.0;
    ordered_json source;
    if (!opt.oracle.empty()) {
        std::function<double(double)> G;
        if (opt.oracle == "sphere") {
            G = [](double x) { return std::sin(x) * std::sin(x); };
            target = 1.0;
        } else if (opt.oracle == "pseudosphere") {
            G = [](double x) { return std::cosh(x) * std::cosh(x); };
            target = -1.0;
        } else if (opt.oracle == "flat") {
            G = [](double) { return 1.0; };
        } else {
            throw InvalidArgument("unknown oracle '" + opt.oracle + "' (sphere, pseudosphere, flat)");
        }
        metric = [G](const Grid& g) {
            numerics::MetricField m;
            for (Field* f : {&m.E, &m.F, &m.G}) *f = Field{g, std::vector<double>(g.size(), 0.0), numerics::Mask(g.size(), 0)};
            for (std::size_t k = 0; k < g.size(); ++k) {
                m.E.values[k] = 1.0;
                m.G.values[k] = G(g.x(g.col(k)));
            }
            return m;
        };
        source["oracle"] = opt.oracle;
    } else {
        if (opt.system.empty() || opt.solution.empty()) {
            throw InvalidArgument("curvature needs a system and --solution, or --oracle");
        }
        const core::SystemDocument doc = load_system(opt.system);
        const SolutionSpec sol = resolve_solution(opt.solution, params, d);
        const auto values = params.values();
        target = -doc.fij.delta;
        metric = [doc, sol, values](const Grid& g) { return numerics::metric_field(doc.fij, sol.sample(g), values); };
        source["system"] = opt.system;
        source["solution"] = sol.name;
        source["delta"] = doc.fij.delta;
    }

    Study st;
    double mask_fraction = 0.0;
    std::optional<Field> base_K;
    for (const Grid& g : ladder(base)) {
        const auto K = numerics::gaussian_curvature(metric(g), d["degeneracy"]);
        if (!base_K) {
            mask_fraction = interior_mask_fraction(K.K);
            if (mask_fraction > d["mask_fraction_limit"]) {
                std::ostringstream msg;
                msg << "curvature undefined on " << mask_fraction * 100 << "% of interior points (degenerate: "
                    << numerics::masked_count(K.degenerate) << ")";
                throw EmptyMask(msg.str());
            }
            base_K = K.K;
        }
        st.grids.push_back(g);
        st.stats.push_back(numerics::abs_stats(curvature_error(K, target)));
    }
    const bool pass = st.stats.front().max < d["curvature_tolerance"] &&
                      orders_within(st.maxima(), d["order_min"], d["order_max"], d["order_floor"]);

    ordered_json report;
    report["command"] = "curvature";
    for (const auto& [k, v] : source.items()) report[k] = v;
    report["params"] = params.to_json();
    report["target"] = target;
    report["mask_fraction"] = mask_fraction;
    report["max_abs_error"] = st.stats.front().max;
    const auto orders = numerics::convergence_orders(st.maxima());
    report["order_estimate"] = std::isfinite(orders.back()) ? ordered_json(orders.back()) : ordered_json(nullptr);
    report["study"] = st.to_json();
    report["pass"] = pass;
    ctx.out << dump(report);
    if (!ctx.out_dir.empty()) {
        write_text(ctx.out_dir, "curvature.json", dump(report));
        std::ostringstream csv;
        numerics::write_field_csv(csv, *base_K);
        write_text(ctx.out_dir, "curvature.csv", csv.str());
    }
    return pass ? kOk : kFailed;
}

int cmd_catalog_list(const Context& ctx) {
    for (const auto& e : families::catalog()) ctx.out << e.name << "\t" << e.doc.description << "\n";
    return kOk;
}

int cmd_catalog_dump(const Context& ctx, const std::string& name, bool all) {
    if (all == !name.empty()) throw InvalidArgument("catalog dump takes either a name or --all");
    for (const auto& e : families::catalog()) {
        if (!all && e.name != name) continue;
        const std::string text = core::dump_document(e.doc);
        if (ctx.out_dir.empty()) {
            ctx.out << text;
        } else {
            write_text(ctx.out_dir, e.name + ".json", text);
            ctx.out << (std::filesystem::path(ctx.out_dir) / (e.name + ".json")).string() << "\n";
        }
        if (!all) return kOk;
    }
    if (!all) throw InvalidArgument("no catalog entry named '" + name + "'");
    return kOk;
}

}  // namespace pss::cli
