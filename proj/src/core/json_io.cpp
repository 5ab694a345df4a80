#include "pss/core/json_io.hpp"

#include <fstream>
#include <sstream>

#include "pss/error.hpp"

namespace pss::core {

namespace {

const char* kFijNames[6] = {"f11", "f12", "f21", "f22", "f31", "f32"};

Expr& fij_slot(AssociatedFunctions& f, int k) { return f.f(k / 2 + 1, k % 2 + 1); }
const Expr& fij_slot(const AssociatedFunctions& f, int k) { return f.f(k / 2 + 1, k % 2 + 1); }

std::string require_string(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw InvalidArgument(std::string("system document needs string field '") + key + "'");
    }
    return j[key].get<std::string>();
}

}  // namespace

ordered_json to_json(const SystemDocument& doc) {
    ordered_json j;
    j["description"] = doc.description;
    j["delta"] = doc.fij.delta;
    ordered_json params = ordered_json::array();
    for (const auto& p : doc.params.all()) {
        ordered_json pj;
        pj["name"] = p->name;
        pj["time_dependent"] = p->time_dependent;
        if (p->reduction) {
            pj["reduction"] = {{"power", p->reduction->power}, {"value", p->reduction->value.get_str()}};
        } else {
            pj["reduction"] = nullptr;
        }
        params.push_back(pj);
    }
    j["parameters"] = params;
    j["F"] = doc.system.F.str();
    j["G"] = doc.system.G.str();
    ordered_json fj;
    for (int k = 0; k < 6; ++k) fj[kFijNames[k]] = fij_slot(doc.fij, k).str();
    j["fij"] = fj;
    return j;
}

SystemDocument from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("system document must be a JSON object");
    SystemDocument doc;
    if (j.contains("description")) {
        if (!j["description"].is_string()) throw InvalidArgument("'description' must be a string");
        doc.description = j["description"].get<std::string>();
    }
    if (!j.contains("delta") || !j["delta"].is_number_integer()) throw InvalidArgument("'delta' must be +1 or -1");
    int delta = j["delta"].get<int>();
    if (delta != 1 && delta != -1) throw InvalidArgument("'delta' must be +1 or -1");
    if (j.contains("parameters")) {
        if (!j["parameters"].is_array()) throw InvalidArgument("'parameters' must be an array");
        for (const auto& pj : j["parameters"]) {
            std::string name = require_string(pj, "name");
            bool td = pj.value("time_dependent", false);
            std::optional<jet::Reduction> red;
            if (pj.contains("reduction") && !pj["reduction"].is_null()) {
                const auto& rj = pj["reduction"];
                if (!rj.contains("power") || !rj["power"].is_number_integer()) {
                    throw InvalidArgument("reduction of '" + name + "' needs an integer power");
                }
                jet::Reduction r;
                r.power = rj["power"].get<int>();
                std::string value = rj.contains("value") && rj["value"].is_string()
                                        ? rj["value"].get<std::string>()
                                        : (rj.contains("value") ? rj["value"].dump() : std::string());
                auto parsed = jet::parse_expr(value).constant_value();
                if (!parsed) throw InvalidArgument("reduction value of '" + name + "' must be rational");
                r.value = *parsed;
                red = r;
            }
            doc.params.declare(name, td, red);
        }
    }
    Expr F = jet::parse_expr(require_string(j, "F"), doc.params);
    Expr G = jet::parse_expr(require_string(j, "G"), doc.params);
    doc.system = make_system(std::move(F), std::move(G), doc.description);
    if (!j.contains("fij") || !j["fij"].is_object()) throw InvalidArgument("system document needs object 'fij'");
    for (int k = 0; k < 6; ++k) {
        fij_slot(doc.fij, k) = jet::parse_expr(require_string(j["fij"], kFijNames[k]), doc.params);
    }
    doc.fij.delta = delta;
    return doc;
}

SystemDocument read_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

std::string dump_document(const SystemDocument& doc) { return to_json(doc).dump(2) + "\n"; }

void write_document(const SystemDocument& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << dump_document(doc);
}

}  // namespace pss::core
