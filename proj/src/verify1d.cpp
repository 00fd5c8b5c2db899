#include "cellforce/verify1d.hpp"

#include "cellforce/error.hpp"
#include "cellforce/quadrature.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>

namespace cellforce {

void Cell1D::validate() const {
    if (!(L > 0.0 && h > 0.0 && c - 0.5 * h > 0.0 && c + 0.5 * h < L))
        fail(ErrorKind::Domain, "1D cell needs 0 < c - h/2 < c + h/2 < L (L = " + fmt17(L) + ", c = " + fmt17(c) +
                                    ", h = " + fmt17(h) + ")");
}

double exact_1d(const Cell1D& cell, double x) {
    if (!(x >= 0.0 && x <= cell.L)) fail(ErrorKind::Domain, "exact_1d: x = " + fmt17(x) + " outside [0, L]");
    const auto pos = [](double v) { return std::max(0.0, v); };
    return cell.h * x / cell.L + pos(x - (cell.c + 0.5 * cell.h)) - pos(x - (cell.c - 0.5 * cell.h));
}

Solution1D solve_1d(const Cell1D& cell, std::size_t nodes, bool align) {
    cell.validate();
    if (nodes < 3) fail(ErrorKind::Config, "solve_1d needs at least 3 nodes");
    const std::size_t n = nodes;
    const double dx = cell.L / static_cast<double>(n - 1);
    Solution1D sol;
    sol.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.x[i] = static_cast<double>(i) * dx;

    std::vector<double> f(n, 0.0);
    const auto add_point_load = [&](double p, double value) {
        const double s = p / dx;
        std::size_t k = static_cast<std::size_t>(std::floor(s));
        const bool on_node = std::abs(s - std::round(s)) <= 1e-9;
        if (align && !on_node)
            fail(ErrorKind::Config, "force point " + fmt17(p) + " is not a node of the " + std::to_string(n) +
                                        "-node mesh");
        if (on_node) {
            f[static_cast<std::size_t>(std::llround(s))] += value;
            return;
        }
        k = std::min(k, n - 2);
        const double t = s - static_cast<double>(k);
        f[k] += (1.0 - t) * value;
        f[k + 1] += t * value;
    };
    add_point_load(cell.c - 0.5 * cell.h, 1.0);
    add_point_load(cell.c + 0.5 * cell.h, -1.0);

    // interior unknowns 1..n-2: (1/dx) tridiag(-1, 2, -1); Thomas algorithm
    const std::size_t m = n - 2;
    std::vector<double> diag(m, 2.0 / dx), rhs(f.begin() + 1, f.end() - 1);
    const double off = -1.0 / dx;
    for (std::size_t i = 1; i < m; ++i) {
        const double w = off / diag[i - 1];
        diag[i] -= w * off;
        rhs[i] -= w * rhs[i - 1];
    }
    sol.u.assign(n, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        const double next = (i + 1 < m) ? sol.u[i + 2] : 0.0;
        sol.u[i + 1] = (rhs[i] - off * next) / diag[i];
    }
    return sol;
}

double max_nodal_error(const Cell1D& cell, const Solution1D& sol) {
    double err = 0.0;
    for (std::size_t i = 0; i < sol.x.size(); ++i) err = std::max(err, std::abs(sol.u[i] - exact_1d(cell, sol.x[i])));
    return err;
}

double l2_error(const Cell1D& cell, const Solution1D& sol) {
    const LineRule gl = gauss_legendre(3);
    const double kinks[] = {cell.c - 0.5 * cell.h, cell.c + 0.5 * cell.h};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < sol.x.size(); ++i) {
        std::vector<double> breaks{sol.x[i], sol.x[i + 1]};
        for (const double k : kinks)
            if (k > sol.x[i] && k < sol.x[i + 1]) breaks.push_back(k);
        std::sort(breaks.begin(), breaks.end());
        for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
            const double a = breaks[b], len = breaks[b + 1] - a;
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                const double x = a + 0.5 * len * (1.0 + gl.nodes[q]);
                const double t = (x - sol.x[i]) / (sol.x[i + 1] - sol.x[i]);
                const double uh = (1.0 - t) * sol.u[i] + t * sol.u[i + 1];
                const double e = uh - exact_1d(cell, x);
                total += 0.5 * len * gl.weights[q] * e * e;
            }
        }
    }
    return std::sqrt(total);
}

}  // namespace cellforce
