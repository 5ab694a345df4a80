#include <filesystem>
#include <fstream>

#include "pss/backlund/backlund.hpp"
#include "pss/cli/cli.hpp"
#include "pss/error.hpp"
#include "pss/jet/ops.hpp"
#include "pss/jet/parser.hpp"

#ifndef PSS_DEFAULTS_PATH
#define PSS_DEFAULTS_PATH "data/defaults.json"
#endif

namespace pss::cli {

using numerics::Grid;
using numerics::SampledSolution;

std::vector<std::pair<std::string, std::string>> parse_bindings(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> items(1);
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            items.emplace_back();
        } else {
            items.back() += c;
        }
    }
    if (depth != 0) throw InvalidArgument("unbalanced parentheses in '" + text + "'");
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    for (const auto& item : items) {
        if (trim(item).empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidArgument("expected key=value, got '" + item + "'");
        std::string key = trim(item.substr(0, eq)), value = trim(item.substr(eq + 1));
        if (key.empty() || value.empty()) throw InvalidArgument("expected key=value, got '" + item + "'");
        for (const auto& [k, v] : out) {
            if (k == key) throw InvalidArgument("parameter '" + key + "' given twice");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

Defaults Defaults::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open defaults file " + path);
    Defaults d;
    try {
        d.values_ = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("defaults file " + path + ": " + e.what());
    }
    if (!d.values_.is_object()) throw InvalidArgument("defaults file must hold an object");
    for (const auto& [k, v] : d.values_.items()) {
        if (!v.is_number()) throw InvalidArgument("default '" + k + "' is not a number");
    }
    return d;
}

std::string Defaults::default_path() { return PSS_DEFAULTS_PATH; }

double Defaults::operator[](const std::string& key) const {
    if (!values_.contains(key)) throw InvalidArgument("defaults file lacks '" + key + "'");
    return values_[key].get<double>();
}

void Defaults::set(const std::string& key, double value) {
    if (!values_.contains(key)) throw InvalidArgument("unknown threshold '" + key + "'");
    values_[key] = value;
}

nlohmann::ordered_json Defaults::to_json() const { return values_; }

Params::Params(const std::string& text) {
    for (const auto& [k, v] : parse_bindings(text)) {
        const jet::Expr e = jet::parse_expr(v);
        const auto c = e.constant_value();
        if (!c) throw InvalidArgument("parameter '" + k + "' must be a number");
        values_[k] = c->get_d();
    }
}

double Params::get(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

nlohmann::ordered_json Params::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
}

namespace {

backlund::BTParams bt_params(const Params& p) {
    backlund::BTParams bt;
    bt.lambda1 = p.get("lambda1", 1.0);
    bt.lambda2 = p.get("lambda2", 0.0);
    bt.sigma = static_cast<int>(p.get("sigma", 1.0));
    bt.k1 = p.get("k1", 0.0);
    bt.k2 = p.get("k2", 0.0);
    bt.validate();
    return bt;
}

SolutionSpec from_exprs(std::string name, const std::string& u, const std::string& v, const Params& params,
                        std::string family = {}) {
    jet::ParamTable table;
    for (const auto& [k, value] : params.values()) table.declare(k);
    const jet::Expr eu = jet::parse_expr(u, table), ev = jet::parse_expr(v, table);
    auto values = params.values();
    return {std::move(name), [eu, ev, values](const Grid& g) { return SampledSolution::closed_form(g, eu, ev, values); },
            std::move(family)};
}

}  // namespace

SolutionSpec resolve_solution(const std::string& spec, const Params& params, const Defaults& d) {
    if (spec == "zero" || spec == "vacuum") return from_exprs(spec, "0", "0", params, "vacuum");
    if (spec == "u0v1") return from_exprs(spec, "0", "1", params, "u0v1");
    if (spec == "bt-vacuum" || spec == "bt-u0v1") {
        const auto bt = bt_params(params);
        const double thr = d["mask_threshold"];
        if (spec == "bt-vacuum") return {spec, [bt, thr](const Grid& g) { return backlund::bt_vacuum(bt, g, thr); }, {}};
        return {spec, [bt, thr](const Grid& g) { return backlund::bt_u0v1(bt, g, thr); }, {}};
    }
    if (spec.rfind("u=", 0) == 0) {
        const auto semi = spec.find(';');
        if (semi == std::string::npos || spec.compare(semi + 1, 2, "v=") != 0) {
            throw InvalidArgument("inline solution must read 'u=EXPR;v=EXPR'");
        }
        return from_exprs(spec, spec.substr(2, semi - 2), spec.substr(semi + 3), params);
    }
    if (!std::filesystem::exists(spec)) throw InvalidArgument("unknown solution '" + spec + "'");
    std::ifstream in(spec);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(spec + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("u") || !j.contains("v") || !j["u"].is_string() || !j["v"].is_string()) {
        throw InvalidArgument(spec + ": expected {\"u\": string, \"v\": string}");
    }
    return from_exprs(spec, j["u"].get<std::string>(), j["v"].get<std::string>(), params);
}

}  // namespace pss::cli
