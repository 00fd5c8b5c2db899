#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace cellforce {

struct LineRule {
    std::vector<double> nodes;    ///< on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2n-1.
LineRule gauss_legendre(std::size_t n);

struct TriangleRule {
    std::vector<std::array<double, 3>> barycentric;
    std::vector<double> weights;   ///< sum to 1; multiply by the triangle area
};

/// Collapsed (conical product) Gauss rule on the reference triangle, exact for
/// polynomials of total degree `degree`.
TriangleRule triangle_rule(std::size_t degree);

}  // namespace cellforce
