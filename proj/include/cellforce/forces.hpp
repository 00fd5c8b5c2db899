#pragma once

#include "cellforce/geometry.hpp"
#include "cellforce/mesh.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cellforce {

struct BoundarySegment {
    Vec2 start;
    Vec2 end;
    Vec2 midpoint;
    Vec2 normal;     ///< unit, pointing into the cell
    double measure;  ///< segment length
};

/// Square cell with its boundary split into equal segments, counterclockwise
/// from the lower-left corner.
struct CellGeometry {
    CellSquare square;
    std::vector<BoundarySegment> segments;
};

/// `segments` equal pieces, a multiple of 4 so that each side gets the same count.
CellGeometry discretize_cell_boundary(const CellSquare& square, std::size_t segments);

/// Traction magnitude per unit length as a function of position.
using Pressure = std::function<double(Vec2)>;
Pressure constant_pressure(double P);

/// Nodal load vector, interleaved (x, y) per node.
using LoadVector = std::vector<double>;
using Warnings = std::vector<std::string>;

/// sum_j P(x_j) n_j dGamma_j phi(x_j): point forces at segment midpoints.
LoadVector rhs_point_forces(const Mesh& mesh, const CellGeometry& cell, const Pressure& P);

/// Exact-in-the-limit line integral of P n phi over the cell boundary. Each side is
/// split where it crosses mesh edges and integrated with an `order`-point Gauss rule.
LoadVector rhs_continuous_immersed(const Mesh& mesh, const CellSquare& square, const Pressure& P,
                                   std::size_t quadrature_order);

/// Gaussian regularized delta (2 pi eps^2)^(-n/2) exp(-|x - x'|^2 / (2 eps^2)) in n = 1, 2 or 3
/// dimensions. Throws ErrorKind::Domain for eps <= 0 or an unsupported dimension.
double gaussian_delta(std::span<const double> x, std::span<const double> x_prime, double eps);
double gaussian_delta(Vec2 x, Vec2 x_prime, double eps);
Vec2 gaussian_delta_gradient(Vec2 x, Vec2 x_prime, double eps);

/// Each segment's point force spread as P(x_j) dGamma_j n_j delta_eps(x - x_j) and
/// integrated against the P1 basis.
LoadVector rhs_smoothed_gaussian(const Mesh& mesh, const CellGeometry& cell, const Pressure& P, double eps,
                                 Warnings* warnings = nullptr);

/// Vanishing-cell limit P dx^2 grad delta_eps(x - center).
LoadVector rhs_smoothed_particle_gradient(const Mesh& mesh, Vec2 center, double P, double eps, double dx,
                                          Warnings* warnings = nullptr);

/// Cavity-wall traction P n on every CellBoundary edge of a hole mesh.
LoadVector rhs_hole_neumann(const Mesh& mesh, const Pressure& P);

// Force model selection ------------------------------------------------------

/// segments == 0 selects one segment per mesh edge on the cell boundary.
struct PointForces { std::size_t segments = 0; };
struct ContinuousImmersed { std::size_t quadrature_order = 2; };
struct SmoothedGaussian { double epsilon = 0.5; std::size_t segments = 0; };
struct SmoothedParticleGradient { double epsilon = 0.5; };
struct HoleNeumann {};

using ForceModel =
    std::variant<PointForces, ContinuousImmersed, SmoothedGaussian, SmoothedParticleGradient, HoleNeumann>;

std::string describe(const ForceModel& model);

/// Throws ErrorKind::Config when the model is invalid for `mesh`.
void validate(const ForceModel& model, const Mesh& mesh);

LoadVector build_load(const Mesh& mesh, const ForceModel& model, const Pressure& P,
                      Warnings* warnings = nullptr);

/// Segment count that places one segment on every cell-boundary mesh edge.
std::size_t mesh_matched_segments(const Mesh& mesh);

/// Sum of the load over x dofs and over y dofs.
Vec2 total_force(const LoadVector& load);

}  // namespace cellforce
