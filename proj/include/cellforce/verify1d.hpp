#pragma once

#include <cstddef>
#include <vector>

namespace cellforce {

/// Cell of size h centered at c in the bar (0, L).
struct Cell1D {
    double L = 20.0;
    double c = 10.0;
    double h = 6.0;

    /// Throws ErrorKind::Domain unless 0 < c - h/2 < c + h/2 < L.
    void validate() const;
};

/// u(x) = h x / L + (x - (c + h/2))_+ - (x - (c - h/2))_+ for 0 <= x <= L.
double exact_1d(const Cell1D& cell, double x);

struct Solution1D {
    std::vector<double> x;
    std::vector<double> u;
};

/// P1 Galerkin solution of -u'' = delta(x - (c - h/2)) - delta(x - (c + h/2)),
/// u(0) = u(L) = 0, on `nodes` equally spaced nodes. With `align` the two force
/// points must fall on nodes (ErrorKind::Config otherwise).
Solution1D solve_1d(const Cell1D& cell, std::size_t nodes, bool align);

/// max_i |u_h(x_i) - u(x_i)|.
double max_nodal_error(const Cell1D& cell, const Solution1D& sol);

/// Exact L2 norm of u_h - u, integrated piecewise with Gauss points between kinks.
double l2_error(const Cell1D& cell, const Solution1D& sol);

}  // namespace cellforce
