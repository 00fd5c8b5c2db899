#pragma once

#include "cellforce/geometry.hpp"
#include "cellforce/mesh.hpp"
#include "cellforce/sparse.hpp"

#include <array>
#include <string>
#include <vector>

namespace cellforce {

/// Constitutive and boundary constants. Defaults are the reference configuration.
struct MaterialParams {
    double E = 1.0;       ///< substrate stiffness
    double nu = 0.48;     ///< Poisson's ratio, 0 < nu < 0.5
    double beta = 1e-5;   ///< cell stiffness as a fraction of E
    double kappa = 1.0;   ///< spring constant of the Robin outer boundary
    double P = 1.0;       ///< traction magnitude per unit boundary length

    /// Throws ErrorKind::Config naming the offending field.
    void validate() const;
};

enum class OuterBc { Dirichlet, Robin };

/// Row-major 6x6 element matrix over dofs (u0x, u0y, u1x, u1y, u2x, u2y).
using ElementMatrix = std::array<double, 36>;

/// Plane-strain constitutive matrix in Voigt form (xx, yy, engineering xy).
std::array<double, 9> plane_strain_matrix(double E, double nu);

/// Exact integral of sigma(phi_i) : eps(phi_j) over a P1 triangle.
/// Throws ErrorKind::Assembly for a degenerate or clockwise triangle.
ElementMatrix element_stiffness(const Triangle2& v, double E, double nu);

/// Gradients of the three barycentric basis functions (constant on the triangle).
std::array<Vec2, 3> basis_gradients(const Triangle2& v);

struct StiffnessSystem {
    SparseMatrix matrix;             ///< elastic stiffness plus Robin terms, no Dirichlet rows removed
    std::vector<char> constrained;   ///< per dof, 1 when fixed to zero
    OuterBc bc = OuterBc::Dirichlet;
    std::vector<std::string> warnings;

    std::size_t size() const { return matrix.size(); }
    /// Matrix with constrained rows and columns replaced by identity rows.
    SparseMatrix reduced() const { return matrix.eliminate(constrained); }
};

/// Elastic stiffness with E on exterior triangles and beta*E inside the cell.
SparseMatrix assemble_stiffness(const Mesh& mesh, double E, double nu, double beta);

/// kappa * integral over the outer boundary of phi_i phi_j, per displacement component.
SparseMatrix assemble_robin_mass(const Mesh& mesh, double kappa);

/// Galerkin system for the given outer boundary condition. On a hole mesh beta is unused.
StiffnessSystem assemble(const Mesh& mesh, const MaterialParams& params, OuterBc bc);

}  // namespace cellforce
