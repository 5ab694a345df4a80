#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pss::numerics {

/// Uniform (x, t) grid; index k = j * nx + i.
struct Grid {
    double x0 = 0.0, t0 = 0.0;
    double dx = 0.0, dt = 0.0;
    int nx = 0, nt = 0;

    /// nx x nt points covering [x0, x1] x [t0, t1].
    static Grid over(double x0, double x1, double t0, double t1, int nx, int nt);

    /// Throws InvalidArgument unless spacings are positive and both counts are >= 5.
    void validate() const;

    double x(int i) const { return x0 + i * dx; }
    double t(int j) const { return t0 + j * dt; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    int col(std::size_t k) const { return static_cast<int>(k % nx); }
    int row(std::size_t k) const { return static_cast<int>(k / nx); }

    /// Same extent, spacing halved (2n - 1 points per axis).
    Grid refined() const;
    bool operator==(const Grid& o) const = default;
};

/// "x0,t0,dx,dt,nx,nt"
Grid parse_grid(const std::string& spec);
std::string grid_spec(const Grid& g);

/// 1 = excluded from every statistic.
using Mask = std::vector<std::uint8_t>;

/// Grows the masked set by one cell in each of the eight directions.
Mask dilate(const Mask& m, const Grid& g);
std::size_t masked_count(const Mask& m);

/// Scalar field on a grid.
struct Field {
    Grid grid;
    std::vector<double> values;
    Mask mask;
};

struct Stats {
    double max = 0.0;
    double mean = 0.0;
    std::size_t count = 0;  // unmasked points contributing
};

/// max |v| and mean |v| over unmasked points (NaN values count as masked).
Stats abs_stats(const Field& f);

/// log2(e[k] / e[k+1]) for successive halvings.
std::vector<double> convergence_orders(const std::vector<double>& errors);

}  // namespace pss::numerics
