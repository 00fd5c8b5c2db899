#include "cellforce/elasticity.hpp"

#include "cellforce/error.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>

namespace cellforce {

void MaterialParams::validate() const {
    if (!(E > 0.0)) fail(ErrorKind::Config, "material.E must be positive, got " + fmt17(E));
    if (!(nu > 0.0 && nu < 0.5)) fail(ErrorKind::Config, "material.nu must lie in (0, 0.5), got " + fmt17(nu));
    if (!(beta >= 0.0)) fail(ErrorKind::Config, "material.beta must be non-negative, got " + fmt17(beta));
    if (!(kappa >= 0.0)) fail(ErrorKind::Config, "material.kappa must be non-negative, got " + fmt17(kappa));
    if (!std::isfinite(P)) fail(ErrorKind::Config, "material.P must be finite");
}

std::array<double, 9> plane_strain_matrix(double E, double nu) {
    const double mu = E / (2.0 * (1.0 + nu));
    const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    return {lambda + 2.0 * mu, lambda, 0.0,
            lambda, lambda + 2.0 * mu, 0.0,
            0.0, 0.0, mu};
}

std::array<Vec2, 3> basis_gradients(const Triangle2& v) {
    const double twice_area = 2.0 * signed_area(v[0], v[1], v[2]);
    return {Vec2{v[1].y - v[2].y, v[2].x - v[1].x} * (1.0 / twice_area),
            Vec2{v[2].y - v[0].y, v[0].x - v[2].x} * (1.0 / twice_area),
            Vec2{v[0].y - v[1].y, v[1].x - v[0].x} * (1.0 / twice_area)};
}

ElementMatrix element_stiffness(const Triangle2& v, double E, double nu) {
    const double area = signed_area(v[0], v[1], v[2]);
    const double scale = std::max({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
    if (!(area > 1e-14 * scale * scale)) fail(ErrorKind::Assembly, "degenerate or clockwise triangle");

    const auto g = basis_gradients(v);
    // strain-displacement matrix B (3 x 6)
    std::array<double, 18> B{};
    for (int a = 0; a < 3; ++a) {
        B[0 * 6 + 2 * a] = g[a].x;
        B[1 * 6 + 2 * a + 1] = g[a].y;
        B[2 * 6 + 2 * a] = g[a].y;
        B[2 * 6 + 2 * a + 1] = g[a].x;
    }
    const auto D = plane_strain_matrix(E, nu);
    std::array<double, 18> DB{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 6; ++c)
            for (int k = 0; k < 3; ++k) DB[r * 6 + c] += D[r * 3 + k] * B[k * 6 + c];
    ElementMatrix K{};
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += B[k * 6 + i] * DB[k * 6 + j];
            K[i * 6 + j] = area * s;
        }
    }
    // symmetrize against roundoff so assembled matrices are exactly symmetric
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) K[j * 6 + i] = K[i * 6 + j];
    return K;
}

SparseMatrix assemble_stiffness(const Mesh& mesh, double E, double nu, double beta) {
    std::vector<Triplet> triplets;
    triplets.reserve(36 * mesh.num_triangles());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const double local_E = mesh.regions()[t] == Region::CellInterior ? beta * E : E;
        const auto K = element_stiffness(mesh.vertices(t), local_E, nu);
        const auto& tri = mesh.triangles()[t];
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                triplets.push_back({2 * tri[i / 2] + i % 2, 2 * tri[j / 2] + j % 2, K[i * 6 + j]});
    }
    return SparseMatrix::from_triplets(mesh.num_dofs(), std::move(triplets));
}

SparseMatrix assemble_robin_mass(const Mesh& mesh, double kappa) {
    std::vector<Triplet> triplets;
    for (const auto& e : mesh.tagged_edges()) {
        if (e.tag != EdgeTag::OuterBoundary) continue;
        const double length = norm(mesh.nodes()[e.nodes[1]] - mesh.nodes()[e.nodes[0]]);
        const double m[2][2] = {{2.0, 1.0}, {1.0, 2.0}};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (std::size_t c = 0; c < 2; ++c)
                    triplets.push_back({2 * e.nodes[a] + c, 2 * e.nodes[b] + c, kappa * length / 6.0 * m[a][b]});
    }
    return SparseMatrix::from_triplets(mesh.num_dofs(), std::move(triplets));
}

StiffnessSystem assemble(const Mesh& mesh, const MaterialParams& params, OuterBc bc) {
    params.validate();
    StiffnessSystem sys;
    sys.bc = bc;
    const double beta = mesh.has_hole() ? 1.0 : params.beta;
    if (!mesh.has_hole() && params.beta == 0.0)
        sys.warnings.push_back("beta = 0 on a full mesh leaves the cell interior without stiffness; "
                               "the system is singular");

    SparseMatrix K = assemble_stiffness(mesh, params.E, params.nu, beta);
    sys.constrained.assign(mesh.num_dofs(), 0);
    if (bc == OuterBc::Dirichlet) {
        for (const NodeId n : mesh.outer_boundary_nodes()) sys.constrained[2 * n] = sys.constrained[2 * n + 1] = 1;
        sys.matrix = std::move(K);
        return sys;
    }

    if (!(params.kappa > 0.0)) fail(ErrorKind::Config, "material.kappa must be positive for a Robin boundary");
    const SparseMatrix M = assemble_robin_mass(mesh, params.kappa);
    std::vector<Triplet> triplets;
    triplets.reserve(K.nnz() + M.nnz());
    for (const SparseMatrix* part : {static_cast<const SparseMatrix*>(&K), &M})
        for (std::size_t i = 0; i < part->size(); ++i)
            for (std::size_t k = part->row_ptr()[i]; k < part->row_ptr()[i + 1]; ++k)
                triplets.push_back({i, part->cols()[k], part->values()[k]});
    sys.matrix = SparseMatrix::from_triplets(mesh.num_dofs(), std::move(triplets));
    return sys;
}

}  // namespace cellforce
