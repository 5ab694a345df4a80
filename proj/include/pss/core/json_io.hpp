#pragma once

#include <string>

#include "json.hpp"
#include "pss/core/system.hpp"

namespace pss::core {

using ordered_json = nlohmann::ordered_json;

/// {description, delta, parameters: [{name, time_dependent, reduction}], F, G, fij: {f11..f32}}
ordered_json to_json(const SystemDocument& doc);
/// Throws InvalidArgument on a malformed document, SyntaxError/UnknownSymbol on bad expressions.
SystemDocument from_json(const nlohmann::json& j);

SystemDocument read_document(const std::string& path);
void write_document(const SystemDocument& doc, const std::string& path);
/// Canonical text form (two-space indentation, trailing newline).
std::string dump_document(const SystemDocument& doc);

}  // namespace pss::core
