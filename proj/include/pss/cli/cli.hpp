#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pss/numerics/grid.hpp"
#include "pss/numerics/solution.hpp"

namespace pss::cli {

enum ExitCode { kOk = 0, kFailed = 1, kBadInput = 2 };

/// "k=v,k=v"; commas inside parentheses do not split.
std::vector<std::pair<std::string, std::string>> parse_bindings(const std::string& text);

/// Thresholds shared by every command; values come from a JSON file and may be overridden.
class Defaults {
public:
    static Defaults load(const std::string& path);
    /// Compiled-in location of data/defaults.json.
    static std::string default_path();

    double operator[](const std::string& key) const;
    /// Throws InvalidArgument for unknown keys.
    void set(const std::string& key, double value);
    nlohmann::ordered_json to_json() const;

private:
    nlohmann::ordered_json values_;
};

/// Named parameter values from --params; numeric values may be constant expressions ("1/3").
class Params {
public:
    Params() = default;
    explicit Params(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    double get(const std::string& key, double fallback) const;
    const std::map<std::string, double>& values() const { return values_; }
    nlohmann::ordered_json to_json() const;

private:
    std::map<std::string, double> values_;
};

/// Resolves a solution description to samples on any grid:
/// "zero"/"vacuum", "u0v1", "bt-vacuum", "bt-u0v1", "u=EXPR;v=EXPR", or a JSON file {"u": .., "v": ..}.
struct SolutionSpec {
    std::string name;
    std::function<numerics::SampledSolution(const numerics::Grid&)> sample;
    /// True when the solution is u = v = 0 or u = 0, v = 1 (valid Backlund seeds with closed-form families).
    std::string seed_family;
};
SolutionSpec resolve_solution(const std::string& spec, const Params& params, const Defaults& d);

/// Runs one command line (without the program name). Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pss::cli
