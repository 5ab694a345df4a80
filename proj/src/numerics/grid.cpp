#include "pss/numerics/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <sstream>

#include "pss/error.hpp"

namespace pss::numerics {

Grid Grid::over(double x0, double x1, double t0, double t1, int nx, int nt) {
    if (nx < 2 || nt < 2) throw InvalidArgument("grid needs at least two points per axis");
    Grid g{x0, t0, (x1 - x0) / (nx - 1), (t1 - t0) / (nt - 1), nx, nt};
    g.validate();
    return g;
}

void Grid::validate() const {
    if (!(dx > 0.0) || !(dt > 0.0) || !std::isfinite(dx) || !std::isfinite(dt)) {
        throw InvalidArgument("grid spacings must be positive");
    }
    if (!std::isfinite(x0) || !std::isfinite(t0)) throw InvalidArgument("grid origin must be finite");
    if (nx < 5 || nt < 5) throw InvalidArgument("grid needs at least 5 points per axis");
}

Grid Grid::refined() const {
    Grid g{x0, t0, dx / 2, dt / 2, 2 * nx - 1, 2 * nt - 1};
    return g;
}

Grid parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 6) throw InvalidArgument("grid spec must be x0,t0,dx,dt,nx,nt");
    Grid g;
    try {
        std::size_t used = 0;
        auto num = [&](const std::string& s) {
            double v = std::stod(s, &used);
            if (used != s.size()) throw InvalidArgument("bad number in grid spec: " + s);
            return v;
        };
        auto count = [&](const std::string& s) {
            int v = std::stoi(s, &used);
            if (used != s.size()) throw InvalidArgument("bad count in grid spec: " + s);
            return v;
        };
        g = Grid{num(parts[0]), num(parts[1]), num(parts[2]), num(parts[3]), count(parts[4]), count(parts[5])};
    } catch (const std::logic_error&) {
        throw InvalidArgument("grid spec must be x0,t0,dx,dt,nx,nt");
    }
    g.validate();
    return g;
}

std::string grid_spec(const Grid& g) {
    std::ostringstream out;
    out.precision(17);
    out << g.x0 << ',' << g.t0 << ',' << g.dx << ',' << g.dt << ',' << g.nx << ',' << g.nt;
    return out.str();
}

Mask dilate(const Mask& m, const Grid& g) {
    Mask out = m;
    for (int j = 0; j < g.nt; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!m[g.index(i, j)]) continue;
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    int a = i + di, b = j + dj;
                    if (a >= 0 && a < g.nx && b >= 0 && b < g.nt) out[g.index(a, b)] = 1;
                }
            }
        }
    }
    return out;
}

std::size_t masked_count(const Mask& m) {
    std::size_t n = 0;
    for (auto b : m) n += b != 0;
    return n;
}

Stats abs_stats(const Field& f) {
    Stats s;
    double sum = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        if (!f.mask.empty() && f.mask[k]) continue;
        double a = std::abs(f.values[k]);
        if (std::isnan(a)) continue;
        s.max = std::max(s.max, a);
        sum += a;
        ++s.count;
    }
    s.mean = s.count ? sum / static_cast<double>(s.count) : 0.0;
    return s;
}

std::vector<double> convergence_orders(const std::vector<double>& errors) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) out.push_back(std::log2(errors[k] / errors[k + 1]));
    return out;
}

}  // namespace pss::numerics
