#include "cellforce/analysis.hpp"

#include "cellforce/error.hpp"
#include "cellforce/quadrature.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace cellforce {

Solution solve_model(std::shared_ptr<const Mesh> mesh, const MaterialParams& params, OuterBc bc,
                     const ForceModel& model, const SolverOptions& options, SolveReport* report,
                     Warnings* warnings) {
    const StiffnessSystem system = assemble(*mesh, params, bc);
    if (warnings) warnings->insert(warnings->end(), system.warnings.begin(), system.warnings.end());
    const LoadVector f = build_load(*mesh, model, constant_pressure(params.P), warnings);
    SolveResult result = solve(system, f, options);
    if (report) *report = result.report;
    return Solution{std::move(mesh), std::move(result.u), bc};
}

// Norms ----------------------------------------------------------------------

namespace {

double l2_squared(const Mesh& mesh, std::span<const double> u) {
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        double local = 0.0;
        for (int c = 0; c < 2; ++c) {
            double sum = 0.0, sq = 0.0;
            for (const NodeId n : tri) {
                const double v = u[2 * n + c];
                sum += v;
                sq += v * v;
            }
            local += sq + sum * sum;
        }
        total += mesh.area(t) / 12.0 * local;
    }
    return total;
}

double gradient_squared(const Mesh& mesh, std::span<const double> u) {
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const auto g = basis_gradients(mesh.vertices(t));
        double local = 0.0;
        for (int c = 0; c < 2; ++c) {
            Vec2 grad{};
            for (int k = 0; k < 3; ++k) grad += u[2 * tri[k] + c] * g[k];
            local += dot(grad, grad);
        }
        total += mesh.area(t) * local;
    }
    return total;
}

void check_size(const Mesh& mesh, std::span<const double> u) {
    if (u.size() != mesh.num_dofs())
        fail(ErrorKind::Config, "displacement has " + std::to_string(u.size()) + " entries, mesh has " +
                                    std::to_string(mesh.num_dofs()) + " dofs");
}

}  // namespace

double l2_norm(const Mesh& mesh, std::span<const double> u) {
    check_size(mesh, u);
    return std::sqrt(l2_squared(mesh, u));
}

double l2_norm(const Solution& sol) { return l2_norm(*sol.mesh, sol.u); }

double h1_norm(const Mesh& mesh, std::span<const double> u) {
    check_size(mesh, u);
    return std::sqrt(l2_squared(mesh, u) + gradient_squared(mesh, u));
}

double h1_diff_norm(const Solution& a, const Solution& b) {
    if (a.mesh != b.mesh && !(a.mesh && b.mesh && a.mesh->nodes() == b.mesh->nodes() &&
                              a.mesh->triangles() == b.mesh->triangles()))
        fail(ErrorKind::Config, "h1_diff_norm: solutions live on different meshes");
    if (a.u.size() != b.u.size()) fail(ErrorKind::Config, "h1_diff_norm: displacement sizes differ");
    std::vector<double> d(a.u.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.u[i] - b.u[i];
    return h1_norm(*a.mesh, d);
}

// Area change ----------------------------------------------------------------

double shoelace_area(const std::vector<Vec2>& polygon) {
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
    return 0.5 * twice;
}

bool polygon_self_intersects(const std::vector<Vec2>& polygon) {
    const std::size_t n = polygon.size();
    const auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
        const double v = cross(b - a, c - a);
        return (v > 0.0) - (v < 0.0);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i], b = polygon[(i + 1) % n];
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
            const Vec2 c = polygon[j], d = polygon[(j + 1) % n];
            const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
            if (o1 * o2 < 0 && o3 * o4 < 0) return true;
        }
    }
    return false;
}

AreaReduction area_reduction(const Mesh& mesh, std::span<const double> u, const std::vector<NodeId>& loop) {
    check_size(mesh, u);
    std::vector<Vec2> before, after;
    before.reserve(loop.size());
    after.reserve(loop.size());
    for (const NodeId n : loop) {
        if (n >= mesh.num_nodes()) fail(ErrorKind::Geometry, "area_reduction: loop node out of range");
        before.push_back(mesh.nodes()[n]);
        after.push_back(mesh.nodes()[n] + Vec2{u[2 * n], u[2 * n + 1]});
    }
    const double a0 = shoelace_area(before);
    if (a0 == 0.0) fail(ErrorKind::Geometry, "area_reduction: polygon has zero area");
    return {100.0 * (a0 - shoelace_area(after)) / a0, polygon_self_intersects(after)};
}

// Convergence ----------------------------------------------------------------

double estimate_order(double n_h, double n_h2, double n_h4) {
    const double num = std::abs(n_h - n_h2);
    const double den = std::abs(n_h2 - n_h4);
    if (den == 0.0 || num == 0.0) fail(ErrorKind::Domain, "convergence order undefined: a difference is zero");
    return std::log2(num / den);
}

double estimate_order(const ConvergenceStudy& study) {
    if (study.levels.size() != 3)
        fail(ErrorKind::Domain, "estimate_order needs exactly 3 levels, got " + std::to_string(study.levels.size()));
    return estimate_order(study.levels[0].value, study.levels[1].value, study.levels[2].value);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::Domain, "loglog_slope needs matching samples, n >= 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) fail(ErrorKind::Domain, "loglog_slope needs positive samples");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) fail(ErrorKind::Domain, "loglog_slope: all abscissae equal");
    return sxy / sxx;
}

namespace {

double fit_order(ConvergenceStudy& study) {
    std::vector<double> x, y;
    for (const auto& l : study.levels) {
        x.push_back(l.parameter);
        y.push_back(l.value);
    }
    study.estimated_order = loglog_slope(x, y);
    return study.estimated_order;
}

}  // namespace

// Hole versus soft-cell consistency ------------------------------------------

BetaSweep beta_consistency_sweep(const Mesh& full_mesh, const MaterialParams& params, OuterBc bc,
                                 std::span<const double> betas, const SolverOptions& options) {
    if (full_mesh.has_hole()) fail(ErrorKind::Config, "beta sweep needs the full mesh");
    if (betas.empty()) fail(ErrorKind::Config, "beta sweep needs at least one beta");
    const Mesh hole = generate_mesh(full_mesh.domain(), full_mesh.h_target(), full_mesh.cell(), true);
    const std::vector<NodeId> map = match_nodes(hole, full_mesh);

    const LoadVector f_hole = rhs_hole_neumann(hole, constant_pressure(params.P));
    LoadVector f_full(full_mesh.num_dofs(), 0.0);
    for (std::size_t k = 0; k < map.size(); ++k) {
        f_full[2 * map[k]] = f_hole[2 * k];
        f_full[2 * map[k] + 1] = f_hole[2 * k + 1];
    }
    const std::vector<double> u_hole = solve(assemble(hole, params, bc), f_hole, options).u;

    BetaSweep out;
    for (const double beta : betas) {
        MaterialParams p = params;
        p.beta = beta;
        const std::vector<double> u_beta = solve(assemble(full_mesh, p, bc), f_full, options).u;
        std::vector<double> diff(hole.num_dofs());
        for (std::size_t k = 0; k < map.size(); ++k) {
            diff[2 * k] = u_beta[2 * map[k]] - u_hole[2 * k];
            diff[2 * k + 1] = u_beta[2 * map[k] + 1] - u_hole[2 * k + 1];
        }
        out.study.levels.push_back({beta, h1_norm(hole, diff)});
    }
    std::vector<StudyLevel> by_beta = out.study.levels;
    std::sort(by_beta.begin(), by_beta.end(), [](auto& a, auto& b) { return a.parameter > b.parameter; });
    for (std::size_t i = 1; i < by_beta.size(); ++i)
        if (by_beta[i].value > by_beta[i - 1].value) out.monotone = false;
    if (out.study.levels.size() >= 2) fit_order(out.study);
    return out;
}

// Momentum balance -----------------------------------------------------------

MomentumBalance momentum_balance(const Solution& sol, const MaterialParams& params, const CellSquare& cell,
                                 const Pressure& P) {
    if (sol.bc != OuterBc::Robin) fail(ErrorKind::Config, "momentum balance needs a Robin solution");
    const Mesh& mesh = *sol.mesh;
    MomentumBalance out;
    for (const auto& e : mesh.tagged_edges()) {
        if (e.tag != EdgeTag::OuterBoundary) continue;
        const double length = norm(mesh.nodes()[e.nodes[1]] - mesh.nodes()[e.nodes[0]]);
        out.lhs += (0.5 * params.kappa * length) * (sol.displacement(e.nodes[0]) + sol.displacement(e.nodes[1]));
    }
    const LineRule gl = gauss_legendre(8);
    const CellGeometry sides = discretize_cell_boundary(cell, 4);
    for (const auto& s : sides.segments) {
        // per-side sum first so that opposite sides cancel exactly for constant P
        double side = 0.0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q)
            side += 0.5 * gl.weights[q] * s.measure * P(s.start + (0.5 * (1.0 + gl.nodes[q])) * (s.end - s.start));
        out.rhs += side * s.normal;
    }
    out.gap = norm(out.lhs - out.rhs);
    return out;
}

// Surface quadrature ---------------------------------------------------------

ConvergenceStudy midpoint_quadrature_order_2d(const CellSquare& square, const Field2& f, std::size_t levels,
                                              std::size_t first_level) {
    if (levels < 2) fail(ErrorKind::Config, "quadrature study needs at least 2 levels");
    const LineRule gl = gauss_legendre(64);
    double reference = 0.0;
    for (const auto& side : discretize_cell_boundary(square, 4).segments)
        for (std::size_t q = 0; q < gl.nodes.size(); ++q)
            reference += 0.5 * gl.weights[q] * side.measure *
                         f(side.start + (0.5 * (1.0 + gl.nodes[q])) * (side.end - side.start));

    ConvergenceStudy study;
    for (std::size_t k = first_level; k < first_level + levels; ++k) {
        const CellGeometry cell = discretize_cell_boundary(square, std::size_t{4} << k);
        double sum = 0.0;
        for (const auto& s : cell.segments) sum += f(s.midpoint) * s.measure;
        study.levels.push_back({cell.segments.front().measure, std::abs(sum - reference)});
    }
    if (std::all_of(study.levels.begin(), study.levels.end(), [](auto& l) { return l.value > 0.0; }))
        fit_order(study);
    return study;
}

ConvergenceStudy midpoint_quadrature_order_3d(const std::array<double, 3>& center, double side, const Field3& f,
                                              std::size_t levels, std::size_t first_level) {
    if (levels < 2) fail(ErrorKind::Config, "quadrature study needs at least 2 levels");
    if (!(side > 0.0)) fail(ErrorKind::Geometry, "cube side must be positive");
    // face = fixed axis, fixed sign; (u, v) span the other two axes
    const auto point = [&](int axis, double sign, double s, double t) {
        std::array<double, 3> x{};
        x[axis] = center[axis] + 0.5 * sign * side;
        x[(axis + 1) % 3] = center[(axis + 1) % 3] + (s - 0.5) * side;
        x[(axis + 2) % 3] = center[(axis + 2) % 3] + (t - 0.5) * side;
        return x;
    };

    const LineRule gl = gauss_legendre(32);
    double reference = 0.0;
    for (int axis = 0; axis < 3; ++axis)
        for (const double sign : {-1.0, 1.0})
            for (std::size_t i = 0; i < gl.nodes.size(); ++i)
                for (std::size_t j = 0; j < gl.nodes.size(); ++j)
                    reference += 0.25 * gl.weights[i] * gl.weights[j] * side * side *
                                 f(point(axis, sign, 0.5 * (1.0 + gl.nodes[i]), 0.5 * (1.0 + gl.nodes[j])));

    ConvergenceStudy study;
    for (std::size_t k = first_level; k < first_level + levels; ++k) {
        const std::size_t m = std::size_t{1} << k;
        const double d = 1.0 / static_cast<double>(m);
        const double tri_area = 0.5 * d * d * side * side;
        double sum = 0.0;
        for (int axis = 0; axis < 3; ++axis)
            for (const double sign : {-1.0, 1.0})
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < m; ++j) {
                        const double s0 = static_cast<double>(i) * d, t0 = static_cast<double>(j) * d;
                        // lower and upper triangle of the square, split along its diagonal
                        sum += tri_area * f(point(axis, sign, s0 + 2.0 * d / 3.0, t0 + d / 3.0));
                        sum += tri_area * f(point(axis, sign, s0 + d / 3.0, t0 + 2.0 * d / 3.0));
                    }
        study.levels.push_back({std::sqrt(2.0) * d * side, std::abs(sum - reference)});
    }
    if (std::all_of(study.levels.begin(), study.levels.end(), [](auto& l) { return l.value > 0.0; }))
        fit_order(study);
    return study;
}

// Gaussian delta moments -----------------------------------------------------

std::array<double, 3> moment_test_center() { return {0.1, -0.2, 0.15}; }

double moment_test_function(std::span<const double> x) {
    double f = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = 0.5 + 0.25 * static_cast<double>(i);
        const double b = 0.7 - 0.2 * static_cast<double>(i);
        f += a * x[i] + b * x[i] * x[i];
    }
    if (x.size() >= 2) f += 0.4 * x[0] * x[1];
    return f;
}

GaussianMomentStudy gaussian_moment_study(int dimension, std::span<const double> epsilons) {
    if (dimension < 1 || dimension > 3) fail(ErrorKind::Domain, "moment study dimension must be 1, 2 or 3");
    const std::size_t n = static_cast<std::size_t>(dimension);
    const auto c3 = moment_test_center();
    const std::span<const double> center(c3.data(), n);
    constexpr std::size_t panels = 32;
    const LineRule gl = gauss_legendre(6);

    GaussianMomentStudy out;
    out.dimension = dimension;
    for (const double eps : epsilons) {
        // tensor rule over [-1, 1]^n restricted to 12 widths around x'; the rest is below 1e-30
        std::vector<std::vector<double>> xs(n), ws(n);
        for (std::size_t d = 0; d < n; ++d) {
            const double a = std::max(-1.0, center[d] - 12.0 * eps);
            const double b = std::min(1.0, center[d] + 12.0 * eps);
            const double width = (b - a) / panels;
            for (std::size_t p = 0; p < panels; ++p)
                for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                    xs[d].push_back(a + width * (static_cast<double>(p) + 0.5 * (1.0 + gl.nodes[q])));
                    ws[d].push_back(0.5 * width * gl.weights[q]);
                }
        }
        const std::size_t m = xs[0].size();
        std::size_t total = 1;
        for (std::size_t d = 0; d < n; ++d) total *= m;
        double mass = 0.0, moment = 0.0;
        std::array<double, 3> x{};
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t r = idx;
            double w = 1.0;
            for (std::size_t d = 0; d < n; ++d) {
                const std::size_t k = r % m;
                r /= m;
                x[d] = xs[d][k];
                w *= ws[d][k];
            }
            const std::span<const double> xv(x.data(), n);
            const double g = w * gaussian_delta(xv, center, eps);
            mass += g;
            moment += g * moment_test_function(xv);
        }
        out.epsilons.push_back(eps);
        out.moment_errors.push_back(std::abs(moment - moment_test_function(center)));
        out.mass_errors.push_back(std::abs(mass - 1.0));
    }
    if (out.epsilons.size() >= 2) out.moment_order = loglog_slope(out.epsilons, out.moment_errors);
    return out;
}

// Smoothed force consistency -------------------------------------------------

SmoothingSweep smoothing_consistency_sweep(std::shared_ptr<const Mesh> mesh, const MaterialParams& params,
                                           OuterBc bc, const SmoothingPlan& plan, const SolverOptions& options) {
    if (mesh->has_hole()) fail(ErrorKind::Config, "smoothing sweep needs the full mesh");
    MaterialParams homogeneous = params;
    homogeneous.beta = 1.0;
    const StiffnessSystem system = assemble(*mesh, homogeneous, bc);
    const Vec2 center = mesh->cell().center;
    const double P = params.P;

    SmoothingSweep out;
    const auto solve_load = [&](const LoadVector& f) { return solve(system, f, options).u; };
    const auto cell_of = [&](double dx) { return discretize_cell_boundary(CellSquare{center, dx}, 4); };
    const auto point_solution = [&](double dx) {
        return solve_load(rhs_point_forces(*mesh, cell_of(dx), constant_pressure(P)));
    };
    const auto gaussian_solution = [&](double dx, double eps) {
        return solve_load(rhs_smoothed_gaussian(*mesh, cell_of(dx), constant_pressure(P), eps, &out.warnings));
    };
    const auto particle_solution = [&](double dx, double eps) {
        return solve_load(rhs_smoothed_particle_gradient(*mesh, center, P, eps, dx, &out.warnings));
    };
    const auto h1_gap = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> d(a.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
        return h1_norm(*mesh, d);
    };

    out.fixed_dx = plan.fixed_dx;
    if (!plan.gap1_epsilons.empty()) {
        const std::vector<double> u = point_solution(plan.fixed_dx);
        for (const double eps : plan.gap1_epsilons)
            out.gap1.levels.push_back({eps, h1_gap(gaussian_solution(plan.fixed_dx, eps), u)});
        if (out.gap1.levels.size() >= 2) fit_order(out.gap1);
    }

    out.fixed_eps = plan.fixed_eps;
    for (const double dx : plan.gap2_dxs)
        out.gap2.levels.push_back(
            {dx, h1_gap(particle_solution(dx, plan.fixed_eps), gaussian_solution(dx, plan.fixed_eps)) / (dx * dx)});
    if (out.gap2.levels.size() >= 2) fit_order(out.gap2);

    for (const double dx : plan.combined_dxs)
        out.combined.levels.push_back({dx, h1_gap(point_solution(dx), particle_solution(dx, dx))});
    for (std::size_t i = 1; i < out.combined.levels.size(); ++i)
        if (out.combined.levels[i].value >= out.combined.levels[i - 1].value) out.combined_monotone = false;
    if (out.combined.levels.size() >= 2) fit_order(out.combined);
    return out;
}

// Output ---------------------------------------------------------------------

void write_svg(std::ostream& os, const Solution& sol, const SvgStyle& style) {
    const Mesh& mesh = *sol.mesh;
    constexpr double size = 1000.0, margin = 20.0;
    const double scale = (size - 2.0 * margin) / std::max(mesh.domain().width, mesh.domain().height);
    char buf[64];
    const auto coord = [&](Vec2 p) {
        std::snprintf(buf, sizeof buf, "%.3f,%.3f", margin + scale * p.x, size - margin - scale * p.y);
        return std::string(buf);
    };
    const auto position = [&](NodeId n, bool deformed) {
        return deformed ? mesh.nodes()[n] + style.displacement_scale * sol.displacement(n) : mesh.nodes()[n];
    };
    const auto triangles = [&](bool deformed, const char* colour) {
        os << "<g fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"0.5\">\n";
        for (const auto& tri : mesh.triangles())
            os << "<polygon points=\"" << coord(position(tri[0], deformed)) << ' '
               << coord(position(tri[1], deformed)) << ' ' << coord(position(tri[2], deformed)) << "\"/>\n";
        os << "</g>\n";
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n";
    os << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    if (style.draw_undeformed) triangles(false, "gray");
    triangles(true, "black");
    os << "<g stroke=\"blue\" stroke-width=\"2\">\n";
    for (const auto& e : mesh.tagged_edges()) {
        if (e.tag != EdgeTag::CellBoundary) continue;
        const std::string a = coord(position(e.nodes[0], true));
        const std::string b = coord(position(e.nodes[1], true));
        const auto comma_a = a.find(','), comma_b = b.find(',');
        os << "<line x1=\"" << a.substr(0, comma_a) << "\" y1=\"" << a.substr(comma_a + 1) << "\" x2=\""
           << b.substr(0, comma_b) << "\" y2=\"" << b.substr(comma_b + 1) << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
}

}  // namespace cellforce
