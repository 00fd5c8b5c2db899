#pragma once

#include "cellforce/elasticity.hpp"
#include "cellforce/forces.hpp"
#include "cellforce/geometry.hpp"
#include "cellforce/mesh.hpp"
#include "cellforce/solver.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cellforce {

/// Nodal displacement field on a mesh, interleaved (x, y) per node.
struct Solution {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> u;
    OuterBc bc = OuterBc::Dirichlet;

    Vec2 displacement(NodeId n) const { return {u[2 * n], u[2 * n + 1]}; }
};

/// Assemble, build the load and solve in one step.
Solution solve_model(std::shared_ptr<const Mesh> mesh, const MaterialParams& params, OuterBc bc,
                     const ForceModel& model, const SolverOptions& options = {}, SolveReport* report = nullptr,
                     Warnings* warnings = nullptr);

// Norms ----------------------------------------------------------------------

double l2_norm(const Mesh& mesh, std::span<const double> u);
double l2_norm(const Solution& sol);

/// Full H1 norm: L2 part plus the piecewise-constant gradient part.
double h1_norm(const Mesh& mesh, std::span<const double> u);
/// Throws ErrorKind::Config when the two solutions live on different meshes.
double h1_diff_norm(const Solution& a, const Solution& b);

// Area change ----------------------------------------------------------------

struct AreaReduction {
    double percent = 0.0;       ///< 100 (A0 - A) / A0
    bool self_intersecting = false;
};

/// Area change of the polygon through `loop` after moving every node by its displacement.
AreaReduction area_reduction(const Mesh& mesh, std::span<const double> u, const std::vector<NodeId>& loop);

double shoelace_area(const std::vector<Vec2>& polygon);
bool polygon_self_intersects(const std::vector<Vec2>& polygon);

// Convergence ----------------------------------------------------------------

struct StudyLevel {
    double parameter;  ///< mesh size, beta, epsilon, ...
    double value;
};

struct ConvergenceStudy {
    std::vector<StudyLevel> levels;
    double estimated_order = 0.0;
};

/// log2(|N_h - N_h/2| / |N_h/2 - N_h/4|). Throws ErrorKind::Domain if the
/// second difference vanishes.
double estimate_order(double n_h, double n_h2, double n_h4);
/// Requires exactly 3 levels.
double estimate_order(const ConvergenceStudy& study);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Hole versus soft-cell consistency ------------------------------------------

struct BetaSweep {
    ConvergenceStudy study;  ///< (beta, H1 difference over the substrate); order is the log-log slope
    bool monotone = true;    ///< difference non-increasing as beta decreases
};

/// For each beta, solves the full mesh with stiffness beta*E in the cell and the
/// hole mesh derived from it, both under the cavity-wall traction, and compares
/// them in H1 over the substrate.
BetaSweep beta_consistency_sweep(const Mesh& full_mesh, const MaterialParams& params, OuterBc bc,
                                 std::span<const double> betas, const SolverOptions& options = {});

// Momentum balance -----------------------------------------------------------

struct MomentumBalance {
    Vec2 lhs;     ///< integral of kappa u over the outer boundary
    Vec2 rhs;     ///< integral of P n over the cell boundary
    double gap = 0.0;
};

/// Throws ErrorKind::Config on a Dirichlet solution.
MomentumBalance momentum_balance(const Solution& sol, const MaterialParams& params, const CellSquare& cell,
                                 const Pressure& P);

// Surface quadrature ---------------------------------------------------------

using Field2 = std::function<double(Vec2)>;
using Field3 = std::function<double(const std::array<double, 3>&)>;

/// Midpoint-rule error on the square boundary with 4 * 2^k segments,
/// k = first_level .. first_level + levels - 1.
/// Levels hold (segment length, absolute error); order is the log-log slope.
ConvergenceStudy midpoint_quadrature_order_2d(const CellSquare& square, const Field2& f, std::size_t levels,
                                              std::size_t first_level = 0);

/// Centroid-rule error on the surface of a cube split into m x m x 2 triangles per
/// face, m = 2^k, k counted as in the 2D study. Levels hold (max triangle diameter, absolute error).
ConvergenceStudy midpoint_quadrature_order_3d(const std::array<double, 3>& center, double side, const Field3& f,
                                              std::size_t levels, std::size_t first_level = 0);

// Gaussian delta moments -----------------------------------------------------

struct GaussianMomentStudy {
    int dimension = 0;
    std::vector<double> epsilons;
    std::vector<double> moment_errors;  ///< |int delta_eps f - f(x')| for a quadratic f
    std::vector<double> mass_errors;    ///< |int delta_eps - 1|
    double moment_order = 0.0;
};

/// Integrates delta_eps against a fixed quadratic over [-1, 1]^n by tensor Gauss-Legendre.
GaussianMomentStudy gaussian_moment_study(int dimension, std::span<const double> epsilons);

/// The quadratic used by gaussian_moment_study and its evaluation point x'.
double moment_test_function(std::span<const double> x);
std::array<double, 3> moment_test_center();

// Smoothed force consistency -------------------------------------------------

struct SmoothingSweep {
    double fixed_dx = 0.0;
    ConvergenceStudy gap1;            ///< (eps, ||u_eps - u||_H1) at fixed dx
    double fixed_eps = 0.0;
    ConvergenceStudy gap2;            ///< (dx, ||u_S - u_eps||_H1 / dx^2) at fixed eps
    ConvergenceStudy combined;        ///< (dx, ||u - u_S||_H1) with eps = dx
    bool combined_monotone = true;
    Warnings warnings;
};

struct SmoothingPlan {
    double fixed_dx = 2.0;
    std::vector<double> gap1_epsilons;
    double fixed_eps = 1.0;
    std::vector<double> gap2_dxs;
    std::vector<double> combined_dxs;
};

/// Point, Gaussian-smoothed and gradient-of-Gaussian loads of a square cell of
/// side dx centered in the cell of `mesh`, solved on a homogeneous substrate.
SmoothingSweep smoothing_consistency_sweep(std::shared_ptr<const Mesh> mesh, const MaterialParams& params,
                                           OuterBc bc, const SmoothingPlan& plan,
                                           const SolverOptions& options = {});

// Output ---------------------------------------------------------------------

struct SvgStyle {
    double displacement_scale = 1.0;
    bool draw_undeformed = true;
};

/// 1000 x 1000 overlay: undeformed mesh gray, deformed mesh black, cell boundary blue.
void write_svg(std::ostream& os, const Solution& sol, const SvgStyle& style = {});

}  // namespace cellforce
