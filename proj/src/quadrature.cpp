#include "cellforce/quadrature.hpp"

#include "cellforce/error.hpp"

#include <cmath>
#include <numbers>

namespace cellforce {

LineRule gauss_legendre(std::size_t n) {
    if (n == 0) fail(ErrorKind::Domain, "gauss_legendre: at least one point required");
    LineRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1) {
        rule.weights[0] = 2.0;
        return rule;
    }
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p_prev = 1.0;
            double p = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double dk = static_cast<double>(k);
                const double next = ((2.0 * dk - 1.0) * x * p - (dk - 1.0) * p_prev) / dk;
                p_prev = p;
                p = next;
            }
            dp = dn * (x * p - p_prev) / (x * x - 1.0);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

TriangleRule triangle_rule(std::size_t degree) {
    // Duffy collapse of the unit square: (s, t) -> (s, t (1 - s)) with Jacobian (1 - s),
    // which adds one degree in s.
    const LineRule rs = gauss_legendre((degree + 3) / 2);
    const LineRule rt = gauss_legendre((degree + 2) / 2);
    TriangleRule rule;
    for (std::size_t i = 0; i < rs.nodes.size(); ++i) {
        const double s = 0.5 * (rs.nodes[i] + 1.0);
        for (std::size_t j = 0; j < rt.nodes.size(); ++j) {
            const double t = 0.5 * (rt.nodes[j] + 1.0);
            const double l1 = s;
            const double l2 = t * (1.0 - s);
            rule.barycentric.push_back({1.0 - l1 - l2, l1, l2});
            rule.weights.push_back(0.5 * rs.weights[i] * rt.weights[j] * (1.0 - s));
        }
    }
    return rule;
}

}  // namespace cellforce
