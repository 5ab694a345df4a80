#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pss/jet/expr.hpp"

namespace pss::jet {

/// Declared parameter symbols, looked up by name while parsing.
class ParamTable {
public:
    ParamPtr declare(const std::string& name, bool time_dependent = false,
                     std::optional<Reduction> reduction = std::nullopt);
    void add(const ParamPtr& p);
    ParamPtr find(const std::string& name) const;
    std::vector<ParamPtr> all() const;
    bool empty() const { return symbols_.empty(); }

private:
    std::map<std::string, ParamPtr> symbols_;
};

bool is_reserved_identifier(const std::string& name);

/// Grammar: expr := term (('+'|'-') term)*;  term := unary (('*'|'/') unary)*;
///          unary := ('-'|'+') unary | power;  power := base ('^' ['+'|'-'] integer)?;
///          base := number | ident | func '(' expr ')' | '(' expr ')'.
/// A leading minus binds looser than '^', so -z0^2 is -(z0^2).
Expr parse_expr(const std::string& text, const ParamTable& params = {});

}  // namespace pss::jet
