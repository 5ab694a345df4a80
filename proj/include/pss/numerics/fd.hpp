#pragma once

#include <cstddef>
#include <vector>

namespace pss::numerics {

/// Weights c[k] with f^(m)(x0) ~ sum c[k] f(nodes[k]) (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m);

/// Second-order stencil for derivative m at index i of n equally spaced samples:
/// centered where it fits, one-sided (m + 2 points) near the ends.
struct Stencil {
    int first = 0;  // index of the first node
    std::vector<double> w;  // already divided by h^m
};
Stencil fd_stencil(int i, int n, int m, double h);

/// Applies fd_stencil to samples spaced `stride` apart starting at `base`.
double apply_stencil(const Stencil& s, const double* base, std::ptrdiff_t stride);

}  // namespace pss::numerics
