#include <algorithm>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pss/error.hpp"

namespace pss::cli {

namespace {

constexpr const char* kDefaultGrid = "0,0,0.0078125,0.0078125,129,129";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pseudospherical surface toolkit", "pss"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string defaults_path = Defaults::default_path(), overrides, out_dir, grid_text = kDefaultGrid, params_text;
    std::uint64_t seed = 1;
    app.add_option("--defaults", defaults_path, "thresholds file");
    app.add_option("--set", overrides, "threshold overrides, key=value,...");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--grid", grid_text, "x0,t0,dx,dt,nx,nt");
    app.add_option("--params", params_text, "parameter bindings, key=value,...");

    std::string path;
    auto* verify = app.add_subcommand("verify", "check that a system document describes pss/ss");
    verify->add_option("file", path, "system JSON")->required();

    std::string family;
    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "build a system from a family");
    generate->add_option("family", family, "kdv-f21|kdv-f11|kdv-f31|general-f21|general-f11|general-f31|nls|mkdv")
        ->required();
    generate->add_option("--description", gen.description);
    generate->add_option("--declare", gen.declare, "extra parameter symbols")->delimiter(',');

    std::string seed_spec;
    auto* bt = app.add_subcommand("backlund", "transform a seed solution and certify the result");
    bt->add_option("seed_solution", seed_spec, "vacuum|u0v1|u=EXPR;v=EXPR|file.json")->required();

    CurvatureOptions curv;
    auto* curvature = app.add_subcommand("curvature", "Gaussian curvature of the induced metric");
    curvature->add_option("system", curv.system, "system JSON or catalog name");
    curvature->add_option("--solution", curv.solution, "zero|u0v1|bt-vacuum|bt-u0v1|u=EXPR;v=EXPR|file.json");
    curvature->add_option("--oracle", curv.oracle, "sphere|pseudosphere|flat");

    auto* catalog = app.add_subcommand("catalog", "built-in systems");
    catalog->require_subcommand(1);
    auto* list = catalog->add_subcommand("list");
    std::string name;
    bool all = false;
    auto* dump = catalog->add_subcommand("dump");
    dump->add_option("name", name);
    dump->add_flag("--all", all);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        Context ctx{out, Defaults::load(defaults_path), out_dir, seed, numerics::parse_grid(grid_text), params_text};
        for (const auto& [k, v] : parse_bindings(overrides)) ctx.defaults.set(k, Params(k + "=" + v).get(k, 0.0));
        if (*verify) return cmd_verify(ctx, path);
        if (*bt) return cmd_backlund(ctx, seed_spec);
        if (*curvature) return cmd_curvature(ctx, curv);
        if (*list) return cmd_catalog_list(ctx);
        if (*dump) return cmd_catalog_dump(ctx, name, all);
        if (*generate) {
            try {
                return cmd_generate(ctx, family, gen);
            } catch (const GenericityViolation& e) {
                err << "pss: GenericityViolation: " << e.what() << "\n";
                return kFailed;
            } catch (const IrreducibilityViolation& e) {
                err << "pss: IrreducibilityViolation: " << e.what() << "\n";
                return kFailed;
            } catch (const DivisionError& e) {
                err << "pss: DivisionError: " << e.what() << "\n";
                return kFailed;
            }
        }
    } catch (const BlowUp& e) {
        err << "pss: blow-up: " << e.what() << " (last valid index " << e.last_valid() << ")\n";
    } catch (const Error& e) {
        err << "pss: " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
        err << "pss: malformed JSON: " << e.what() << "\n";
    } catch (const std::filesystem::filesystem_error& e) {
        err << "pss: " << e.what() << "\n";
    }
    return kBadInput;
}

}  // namespace pss::cli
