#include "pss/numerics/io.hpp"

#include <cmath>
#include <ostream>

namespace pss::numerics {

namespace {

void put(std::ostream& out, double v) {
    if (std::isfinite(v)) {
        out << v;
    } else {
        out << "nan";
    }
}

}  // namespace

void write_field_csv(std::ostream& out, const Field& f) {
    const Grid& g = f.grid;
    out.precision(17);
    out << "x,t,value,mask\n";
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            out << g.x(i) << ',' << g.t(j) << ',';
            put(out, f.values[k]);
            out << ',' << (f.mask.empty() ? 0 : int(f.mask[k])) << '\n';
        }
    }
}

void write_solution_csv(std::ostream& out, const Grid& g, const std::vector<double>& u, const std::vector<double>& v,
                        const Mask& mask) {
    out.precision(17);
    out << "x,t,u,v,mask\n";
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            out << g.x(i) << ',' << g.t(j) << ',';
            put(out, u[k]);
            out << ',';
            put(out, v[k]);
            out << ',' << int(mask[k]) << '\n';
        }
    }
}

nlohmann::ordered_json grid_json(const Grid& g) {
    return {{"x0", g.x0}, {"t0", g.t0}, {"dx", g.dx}, {"dt", g.dt}, {"nx", g.nx}, {"nt", g.nt}};
}

nlohmann::ordered_json stats_json(const Stats& s, const Grid& g, std::optional<double> order) {
    nlohmann::ordered_json j;
    j["max"] = s.max;
    j["mean"] = s.mean;
    j["count"] = s.count;
    j["order_estimate"] = order ? nlohmann::ordered_json(*order) : nlohmann::ordered_json(nullptr);
    j["grid"] = grid_json(g);
    return j;
}

}  // namespace pss::numerics
