#include "pss/numerics/fd.hpp"

#include <algorithm>
#include <cmath>

#include "pss/error.hpp"

namespace pss::numerics {

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int m) {
    const int n = static_cast<int>(nodes.size());
    if (m < 0 || n <= m) throw InvalidArgument("stencil too small for the derivative order");
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

Stencil fd_stencil(int i, int n, int m, double h) {
    Stencil s;
    if (m == 0) {
        s.first = i;
        s.w = {1.0};
        return s;
    }
    const int centered = 2 * ((m + 1) / 2) + 1;
    const int half = centered / 2;
    int width = centered;
    if (i - half >= 0 && i + half < n) {
        s.first = i - half;
    } else {
        width = m + 2;
        s.first = i - half < 0 ? 0 : n - width;
    }
    if (width > n) throw InvalidArgument("not enough samples for the stencil");
    std::vector<double> nodes(width);
    for (int k = 0; k < width; ++k) nodes[k] = s.first + k - i;
    s.w = fd_weights(0.0, nodes, m);
    const double scale = std::pow(h, m);
    for (double& w : s.w) w /= scale;
    return s;
}

double apply_stencil(const Stencil& s, const double* base, std::ptrdiff_t stride) {
    double sum = 0.0;
    for (std::size_t k = 0; k < s.w.size(); ++k) sum += s.w[k] * base[(s.first + static_cast<std::ptrdiff_t>(k)) * stride];
    return sum;
}

}  // namespace pss::numerics
