#include "cellforce/forces.hpp"

#include "cellforce/error.hpp"
#include "cellforce/quadrature.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cellforce {

namespace {

struct Side {
    Vec2 a;
    Vec2 b;
    Vec2 normal;
};

// Sides counterclockwise from the lower-left corner, with inward normals.
std::array<Side, 4> square_sides(const CellSquare& s) {
    const Vec2 lo = s.lower();
    const Vec2 hi = s.upper();
    return {Side{{lo.x, lo.y}, {hi.x, lo.y}, {0.0, 1.0}}, Side{{hi.x, lo.y}, {hi.x, hi.y}, {-1.0, 0.0}},
            Side{{hi.x, hi.y}, {lo.x, hi.y}, {0.0, -1.0}}, Side{{lo.x, hi.y}, {lo.x, lo.y}, {1.0, 0.0}}};
}

void add_nodal(LoadVector& f, const TriangleNodes& tri, const std::array<double, 3>& phi, Vec2 force) {
    for (int k = 0; k < 3; ++k) {
        f[2 * tri[k]] += phi[k] * force.x;
        f[2 * tri[k] + 1] += phi[k] * force.y;
    }
}

std::array<double, 3> barycentric(const Triangle2& v, Vec2 p) {
    const double a = signed_area(v[0], v[1], v[2]);
    return {signed_area(p, v[1], v[2]) / a, signed_area(v[0], p, v[2]) / a, signed_area(v[0], v[1], p) / a};
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
    return norm(p - (a + t * d));
}

double point_triangle_distance(Vec2 p, const Triangle2& v) {
    const auto lam = barycentric(v, p);
    if (lam[0] >= 0.0 && lam[1] >= 0.0 && lam[2] >= 0.0) return 0.0;
    return std::min({point_segment_distance(p, v[0], v[1]), point_segment_distance(p, v[1], v[2]),
                     point_segment_distance(p, v[2], v[0])});
}

// A sub-triangle described by the parent-barycentric coordinates of its corners.
using SubTriangle = std::array<std::array<double, 3>, 3>;

constexpr double kCutoffWidths = 8.0;
constexpr std::size_t kSmoothedDegree = 7;

// Integrates density(x) * phi_k(x) over every triangle within the cutoff radius of
// a center. Triangles wider than eps are split uniformly until the Gaussian is
// resolved by the fixed-degree rule.
template <class Density>
LoadVector integrate_against_basis(const Mesh& mesh, std::span<const Vec2> centers, double eps,
                                   Density&& density) {
    static const TriangleRule rule = triangle_rule(kSmoothedDegree);
    LoadVector f(mesh.num_dofs(), 0.0);
    const double cutoff = kCutoffWidths * eps;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle2 v = mesh.vertices(t);
        bool near = false;
        for (const Vec2 c : centers) {
            if (point_triangle_distance(c, v) <= cutoff) {
                near = true;
                break;
            }
        }
        if (!near) continue;

        const double diameter = std::max({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
        int levels = 0;
        for (double d = diameter; d > eps && levels < 8; d *= 0.5) ++levels;

        std::vector<SubTriangle> pieces{SubTriangle{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}};
        for (int l = 0; l < levels; ++l) {
            std::vector<SubTriangle> next;
            next.reserve(4 * pieces.size());
            for (const auto& s : pieces) {
                auto mid = [](const std::array<double, 3>& p, const std::array<double, 3>& q) {
                    return std::array<double, 3>{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])};
                };
                const auto m01 = mid(s[0], s[1]), m12 = mid(s[1], s[2]), m20 = mid(s[2], s[0]);
                next.push_back({s[0], m01, m20});
                next.push_back({m01, s[1], m12});
                next.push_back({m20, m12, s[2]});
                next.push_back({m01, m12, m20});
            }
            pieces = std::move(next);
        }

        const double piece_area = mesh.area(t) / static_cast<double>(pieces.size());
        const auto& tri = mesh.triangles()[t];
        for (const auto& s : pieces) {
            for (std::size_t q = 0; q < rule.weights.size(); ++q) {
                const auto& b = rule.barycentric[q];
                std::array<double, 3> phi{};
                for (int k = 0; k < 3; ++k) phi[k] = b[0] * s[0][k] + b[1] * s[1][k] + b[2] * s[2][k];
                const Vec2 x = phi[0] * v[0] + phi[1] * v[1] + phi[2] * v[2];
                const Vec2 value = density(x);
                add_nodal(f, tri, phi, rule.weights[q] * piece_area * value);
            }
        }
    }
    return f;
}

void check_resolution(const Mesh& mesh, double eps, Warnings* warnings) {
    if (warnings && eps < 0.1 * mesh.h_target())
        warnings->push_back("under-resolved Gaussian: eps = " + fmt17(eps) + " is below 0.1 h = " +
                            fmt17(0.1 * mesh.h_target()));
}

}  // namespace

CellGeometry discretize_cell_boundary(const CellSquare& square, std::size_t segments) {
    if (segments < 4 || segments % 4 != 0)
        fail(ErrorKind::Config, "segment count must be a positive multiple of 4, got " + std::to_string(segments));
    if (!(square.side > 0.0)) fail(ErrorKind::Geometry, "cell side must be positive");
    const std::size_t per_side = segments / 4;
    const double length = square.side / static_cast<double>(per_side);
    CellGeometry cell{square, {}};
    cell.segments.reserve(segments);
    for (const Side& side : square_sides(square)) {
        const Vec2 dir = (1.0 / square.side) * (side.b - side.a);
        for (std::size_t i = 0; i < per_side; ++i) {
            const double s0 = static_cast<double>(i) * length;
            const double s1 = static_cast<double>(i + 1) * length;
            const double sm = (static_cast<double>(i) + 0.5) * length;
            cell.segments.push_back({side.a + s0 * dir, side.a + s1 * dir, side.a + sm * dir, side.normal, length});
        }
    }
    return cell;
}

Pressure constant_pressure(double P) {
    return [P](Vec2) { return P; };
}

LoadVector rhs_point_forces(const Mesh& mesh, const CellGeometry& cell, const Pressure& P) {
    LoadVector f(mesh.num_dofs(), 0.0);
    for (const auto& seg : cell.segments) {
        const PointLocation loc = mesh.locate(seg.midpoint);
        add_nodal(f, mesh.triangles()[loc.triangle], loc.barycentric, P(seg.midpoint) * seg.measure * seg.normal);
    }
    return f;
}

LoadVector rhs_continuous_immersed(const Mesh& mesh, const CellSquare& square, const Pressure& P,
                                   std::size_t quadrature_order) {
    if (quadrature_order < 1) fail(ErrorKind::Config, "quadrature order must be at least 1");
    const LineRule gl = gauss_legendre(quadrature_order);
    LoadVector f(mesh.num_dofs(), 0.0);
    constexpr double tol = 1e-12;
    for (const Side& side : square_sides(square)) {
        const Vec2 d = side.b - side.a;
        const double length = norm(d);
        // parameters in [0, 1] where the side meets mesh edges
        std::vector<double> breaks{0.0, 1.0};
        for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
            const Triangle2 v = mesh.vertices(t);
            for (int k = 0; k < 3; ++k) {
                const Vec2 p = v[k];
                const Vec2 e = v[(k + 1) % 3] - p;
                const double denom = cross(d, e);
                const Vec2 ap = p - side.a;
                if (std::abs(denom) <= tol * length * norm(e)) {
                    if (std::abs(cross(ap, d)) > tol * length * length) continue;  // parallel, apart
                    for (const Vec2 q : {p, v[(k + 1) % 3]}) {
                        const double s = dot(q - side.a, d) / (length * length);
                        if (s > tol && s < 1.0 - tol) breaks.push_back(s);
                    }
                    continue;
                }
                const double s = cross(ap, e) / denom;
                const double r = cross(ap, d) / denom;
                if (s > tol && s < 1.0 - tol && r >= -tol && r <= 1.0 + tol) breaks.push_back(s);
            }
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return b - a <= 1e-12; }),
                     breaks.end());

        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            const double s0 = breaks[i];
            const double s1 = breaks[i + 1];
            const PointLocation loc = mesh.locate(side.a + (0.5 * (s0 + s1)) * d);
            const Triangle2 v = mesh.vertices(loc.triangle);
            const double half = 0.5 * (s1 - s0) * length;
            for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                const double s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * gl.nodes[q];
                const Vec2 x = side.a + s * d;
                add_nodal(f, mesh.triangles()[loc.triangle], barycentric(v, x),
                          gl.weights[q] * half * P(x) * side.normal);
            }
        }
    }
    return f;
}

double gaussian_delta(std::span<const double> x, std::span<const double> x_prime, double eps) {
    if (!(eps > 0.0)) fail(ErrorKind::Domain, "gaussian_delta: eps must be positive, got " + fmt17(eps));
    if (x.size() != x_prime.size() || x.empty() || x.size() > 3)
        fail(ErrorKind::Domain, "gaussian_delta: dimension must be 1, 2 or 3");
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - x_prime[i]) * (x[i] - x_prime[i]);
    const double n = static_cast<double>(x.size());
    return std::pow(2.0 * std::numbers::pi * eps * eps, -0.5 * n) * std::exp(-r2 / (2.0 * eps * eps));
}

double gaussian_delta(Vec2 x, Vec2 x_prime, double eps) {
    if (!(eps > 0.0)) fail(ErrorKind::Domain, "gaussian_delta: eps must be positive, got " + fmt17(eps));
    const Vec2 r = x - x_prime;
    return std::exp(-dot(r, r) / (2.0 * eps * eps)) / (2.0 * std::numbers::pi * eps * eps);
}

Vec2 gaussian_delta_gradient(Vec2 x, Vec2 x_prime, double eps) {
    return (-gaussian_delta(x, x_prime, eps) / (eps * eps)) * (x - x_prime);
}

LoadVector rhs_smoothed_gaussian(const Mesh& mesh, const CellGeometry& cell, const Pressure& P, double eps,
                                 Warnings* warnings) {
    if (!(eps > 0.0)) fail(ErrorKind::Domain, "smoothed Gaussian: eps must be positive");
    check_resolution(mesh, eps, warnings);
    std::vector<Vec2> centers;
    std::vector<Vec2> weights;
    for (const auto& seg : cell.segments) {
        centers.push_back(seg.midpoint);
        weights.push_back(P(seg.midpoint) * seg.measure * seg.normal);
    }
    const double cutoff2 = std::pow(kCutoffWidths * eps, 2);
    return integrate_against_basis(mesh, centers, eps, [&](Vec2 x) {
        Vec2 sum{};
        for (std::size_t j = 0; j < centers.size(); ++j) {
            const Vec2 r = x - centers[j];
            if (dot(r, r) > cutoff2) continue;
            sum += gaussian_delta(x, centers[j], eps) * weights[j];
        }
        return sum;
    });
}

LoadVector rhs_smoothed_particle_gradient(const Mesh& mesh, Vec2 center, double P, double eps, double dx,
                                          Warnings* warnings) {
    if (!(eps > 0.0)) fail(ErrorKind::Domain, "smoothed particle: eps must be positive");
    if (!(dx > 0.0)) fail(ErrorKind::Domain, "smoothed particle: cell width must be positive");
    check_resolution(mesh, eps, warnings);
    const Vec2 centers[] = {center};
    const double scale = P * dx * dx;
    return integrate_against_basis(mesh, centers, eps,
                                   [&](Vec2 x) { return scale * gaussian_delta_gradient(x, center, eps); });
}

LoadVector rhs_hole_neumann(const Mesh& mesh, const Pressure& P) {
    if (!mesh.has_hole()) fail(ErrorKind::Config, "hole Neumann load requires a mesh with the cell removed");
    const LineRule gl = gauss_legendre(2);
    LoadVector f(mesh.num_dofs(), 0.0);
    const Vec2 center = mesh.cell().center;
    for (const auto& e : mesh.tagged_edges()) {
        if (e.tag != EdgeTag::CellBoundary) continue;
        const Vec2 a = mesh.nodes()[e.nodes[0]];
        const Vec2 b = mesh.nodes()[e.nodes[1]];
        const double length = norm(b - a);
        Vec2 n{-(b - a).y / length, (b - a).x / length};
        if (dot(n, center - 0.5 * (a + b)) < 0.0) n = -n;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double s = 0.5 * (1.0 + gl.nodes[q]);
            const Vec2 x = a + s * (b - a);
            const Vec2 w = (0.5 * gl.weights[q] * length * P(x)) * n;
            f[2 * e.nodes[0]] += (1.0 - s) * w.x;
            f[2 * e.nodes[0] + 1] += (1.0 - s) * w.y;
            f[2 * e.nodes[1]] += s * w.x;
            f[2 * e.nodes[1] + 1] += s * w.y;
        }
    }
    return f;
}

std::size_t mesh_matched_segments(const Mesh& mesh) {
    const double per_side = std::round(mesh.cell().side / mesh.h_target());
    return 4 * static_cast<std::size_t>(std::max(1.0, per_side));
}

std::string describe(const ForceModel& model) {
    struct {
        std::string operator()(const PointForces& m) const {
            return "point(" + std::to_string(m.segments) + ")";
        }
        std::string operator()(const ContinuousImmersed& m) const {
            return "continuous(" + std::to_string(m.quadrature_order) + ")";
        }
        std::string operator()(const SmoothedGaussian& m) const { return "gaussian(" + fmt17(m.epsilon) + ")"; }
        std::string operator()(const SmoothedParticleGradient& m) const {
            return "particle-gradient(" + fmt17(m.epsilon) + ")";
        }
        std::string operator()(const HoleNeumann&) const { return "hole"; }
    } visitor;
    return std::visit(visitor, model);
}

void validate(const ForceModel& model, const Mesh& mesh) {
    const auto check_segments = [](std::size_t n) {
        if (n != 0 && n % 4 != 0) fail(ErrorKind::Config, "model.segments must be a multiple of 4");
    };
    const auto check_eps = [](double eps) {
        if (!(eps > 0.0)) fail(ErrorKind::Config, "model.epsilon must be positive");
    };
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PointForces>) check_segments(m.segments);
            if constexpr (std::is_same_v<T, ContinuousImmersed>)
                if (m.quadrature_order < 1) fail(ErrorKind::Config, "model.quadrature_order must be at least 1");
            if constexpr (std::is_same_v<T, SmoothedGaussian>) {
                check_eps(m.epsilon);
                check_segments(m.segments);
            }
            if constexpr (std::is_same_v<T, SmoothedParticleGradient>) check_eps(m.epsilon);
            if constexpr (std::is_same_v<T, HoleNeumann>)
                if (!mesh.has_hole()) fail(ErrorKind::Config, "hole model requires a mesh with the cell removed");
            if constexpr (!std::is_same_v<T, HoleNeumann>)
                if (mesh.has_hole()) fail(ErrorKind::Config, describe(m) + " model requires the full mesh");
        },
        model);
}

LoadVector build_load(const Mesh& mesh, const ForceModel& model, const Pressure& P, Warnings* warnings) {
    validate(model, mesh);
    const auto segments = [&](std::size_t n) { return n == 0 ? mesh_matched_segments(mesh) : n; };
    return std::visit(
        [&](const auto& m) -> LoadVector {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PointForces>)
                return rhs_point_forces(mesh, discretize_cell_boundary(mesh.cell(), segments(m.segments)), P);
            else if constexpr (std::is_same_v<T, ContinuousImmersed>)
                return rhs_continuous_immersed(mesh, mesh.cell(), P, m.quadrature_order);
            else if constexpr (std::is_same_v<T, SmoothedGaussian>)
                return rhs_smoothed_gaussian(mesh, discretize_cell_boundary(mesh.cell(), segments(m.segments)), P,
                                             m.epsilon, warnings);
            else if constexpr (std::is_same_v<T, SmoothedParticleGradient>)
                return rhs_smoothed_particle_gradient(mesh, mesh.cell().center, P(mesh.cell().center), m.epsilon,
                                                      mesh.cell().side, warnings);
            else
                return rhs_hole_neumann(mesh, P);
        },
        model);
}

Vec2 total_force(const LoadVector& load) {
    Vec2 sum{};
    for (std::size_t i = 0; i + 1 < load.size(); i += 2) {
        sum.x += load[i];
        sum.y += load[i + 1];
    }
    return sum;
}

}  // namespace cellforce
