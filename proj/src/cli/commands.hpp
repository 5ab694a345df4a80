#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pss/cli/cli.hpp"

namespace pss::cli {

struct Context {
    std::ostream& out;
    Defaults defaults;
    std::string out_dir;
    std::uint64_t seed = 1;
    numerics::Grid grid;
    std::string params_text;
};

struct GenerateOptions {
    std::string description;
    std::vector<std::string> declare;
};

struct CurvatureOptions {
    std::string system;
    std::string solution;
    std::string oracle;
};

int cmd_verify(const Context& ctx, const std::string& path);
int cmd_generate(const Context& ctx, const std::string& family, const GenerateOptions& opt);
int cmd_backlund(const Context& ctx, const std::string& seed_spec);
int cmd_curvature(const Context& ctx, const CurvatureOptions& opt);
int cmd_catalog_list(const Context& ctx);
int cmd_catalog_dump(const Context& ctx, const std::string& name, bool all);

}  // namespace pss::cli
