#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"
#include "pss/numerics/grid.hpp"

namespace pss::numerics {

/// x,t,value,mask rows in grid order.
void write_field_csv(std::ostream& out, const Field& f);
/// x,t,u,v,mask rows in grid order.
void write_solution_csv(std::ostream& out, const Grid& g, const std::vector<double>& u, const std::vector<double>& v,
                        const Mask& mask);

nlohmann::ordered_json grid_json(const Grid& g);
/// {max, mean, count, order_estimate, grid}
nlohmann::ordered_json stats_json(const Stats& s, const Grid& g, std::optional<double> order = std::nullopt);

}  // namespace pss::numerics
