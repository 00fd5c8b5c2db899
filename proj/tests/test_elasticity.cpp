#include "cellforce/elasticity.hpp"
#include "cellforce/error.hpp"
#include "cellforce/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cellforce;

namespace {

// 7-point degree-5 rule on the reference triangle (weights sum to 1).
struct RefPoint {
    double a, b, w;
};
const RefPoint kSevenPoint[] = {
    {1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.0597158717, 0.4701420641, 0.1323941527},
    {0.4701420641, 0.0597158717, 0.1323941527},
    {0.4701420641, 0.4701420641, 0.1323941527},
    {0.7974269853, 0.1012865073, 0.1259391805},
    {0.1012865073, 0.7974269853, 0.1259391805},
    {0.1012865073, 0.1012865073, 0.1259391805},
};

// Brute-force element matrix: at each quadrature point build the strain of every
// basis field by finite differences of the basis functions themselves and sum
// sigma : eps with the full plane-strain Hooke law.
ElementMatrix oracle_element(const Triangle2& v, double E, double nu) {
    const double lambda = E * nu / ((1 + nu) * (1 - 2 * nu));
    const double mu = E / (2 * (1 + nu));
    const double area = 0.5 * std::abs((v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y));
    const auto phi = [&](int k, double x, double y) {
        // barycentric coordinate k at (x, y) via Cramer's rule
        const auto sa = [](Vec2 a, Vec2 b, Vec2 c) { return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)); };
        const Vec2 p{x, y};
        const double full = sa(v[0], v[1], v[2]);
        if (k == 0) return sa(p, v[1], v[2]) / full;
        if (k == 1) return sa(v[0], p, v[2]) / full;
        return sa(v[0], v[1], p) / full;
    };
    ElementMatrix K{};
    const double d = 1e-4;
    for (const auto& q : kSevenPoint) {
        const double x = v[0].x + q.a * (v[1].x - v[0].x) + q.b * (v[2].x - v[0].x);
        const double y = v[0].y + q.a * (v[1].y - v[0].y) + q.b * (v[2].y - v[0].y);
        double grad[3][2];
        for (int k = 0; k < 3; ++k) {
            grad[k][0] = (phi(k, x + d, y) - phi(k, x - d, y)) / (2 * d);
            grad[k][1] = (phi(k, x, y + d) - phi(k, x, y - d)) / (2 * d);
        }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                // displacement gradient of basis field i: component (i % 2) times grad phi_(i / 2)
                double gi[2][2] = {}, gj[2][2] = {};
                for (int c = 0; c < 2; ++c) {
                    gi[i % 2][c] = grad[i / 2][c];
                    gj[j % 2][c] = grad[j / 2][c];
                }
                double ei[2][2], ej[2][2];
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) {
                        ei[r][c] = 0.5 * (gi[r][c] + gi[c][r]);
                        ej[r][c] = 0.5 * (gj[r][c] + gj[c][r]);
                    }
                const double tr = ei[0][0] + ei[1][1];
                double s = 0.0;
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) s += (2 * mu * ei[r][c] + (r == c ? lambda * tr : 0.0)) * ej[r][c];
                K[6 * i + j] += q.w * area * s;
            }
    }
    return K;
}

std::vector<double> translation(std::size_t nodes, double tx, double ty) {
    std::vector<double> t(2 * nodes);
    for (std::size_t n = 0; n < nodes; ++n) {
        t[2 * n] = tx;
        t[2 * n + 1] = ty;
    }
    return t;
}

std::vector<double> rotation(const Mesh& m) {
    std::vector<double> r(m.num_dofs());
    for (std::size_t n = 0; n < m.num_nodes(); ++n) {
        r[2 * n] = -m.nodes()[n].y;
        r[2 * n + 1] = m.nodes()[n].x;
    }
    return r;
}

}  // namespace

TEST(Elasticity, PlaneStrainMatrixEntries) {
    const auto D = plane_strain_matrix(1.0, 0.25);
    const double lambda = 0.25 / (1.25 * 0.5), mu = 1.0 / 2.5;
    EXPECT_NEAR(D[0], lambda + 2 * mu, 1e-15);
    EXPECT_NEAR(D[1], lambda, 1e-15);
    EXPECT_NEAR(D[4], lambda + 2 * mu, 1e-15);
    EXPECT_NEAR(D[8], mu, 1e-15);
    EXPECT_EQ(D[2], 0.0);
}

TEST(Elasticity, UnitRightTriangleMatchesQuadratureOracle) {
    const Triangle2 v{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
    const ElementMatrix K = element_stiffness(v, 1.0, 0.0);
    const ElementMatrix O = oracle_element(v, 1.0, 0.0);
    // the oracle's only error is the finite-difference gradient of a linear function
    for (int i = 0; i < 36; ++i) EXPECT_NEAR(K[i], O[i], 1e-9) << "entry " << i;
    // hand values: E = 1, nu = 0 gives lambda = 0, mu = 1/2
    EXPECT_NEAR(K[0], 0.75, 1e-15);   // u0x,u0x = 0.5*(1) + 0.25*(1)
    EXPECT_NEAR(K[1], 0.25, 1e-15);   // u0x,u0y
    EXPECT_NEAR(K[2], -0.5, 1e-15);   // u0x,u1x
    EXPECT_NEAR(K[14], 0.5, 1e-15);   // u1x,u1x
}

TEST(Elasticity, GeneralTriangleMatchesOracle) {
    const Triangle2 v{Vec2{0.3, -0.2}, Vec2{2.1, 0.4}, Vec2{0.9, 1.7}};
    const ElementMatrix K = element_stiffness(v, 2.5, 0.3);
    const ElementMatrix O = oracle_element(v, 2.5, 0.3);
    for (int i = 0; i < 36; ++i) EXPECT_NEAR(K[i], O[i], 1e-8);
}

TEST(Elasticity, ElementRigidModesAndRank) {
    const Triangle2 v{Vec2{0.3, -0.2}, Vec2{2.1, 0.4}, Vec2{0.9, 1.7}};
    const ElementMatrix K = element_stiffness(v, 1.0, 0.48);
    const double modes[3][6] = {{1, 0, 1, 0, 1, 0},
                                {0, 1, 0, 1, 0, 1},
                                {-v[0].y, v[0].x, -v[1].y, v[1].x, -v[2].y, v[2].x}};
    double maxk = 0.0;
    for (const double k : K) maxk = std::max(maxk, std::abs(k));
    for (const auto& m : modes)
        for (int i = 0; i < 6; ++i) {
            double s = 0.0;
            for (int j = 0; j < 6; ++j) s += K[6 * i + j] * m[j];
            EXPECT_NEAR(s, 0.0, 1e-12 * maxk);
        }
    // symmetric and positive on the three pure strain modes
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) EXPECT_EQ(K[6 * i + j], K[6 * j + i]);
    const double strains[3][2][2] = {{{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}, {{0, 1}, {1, 0}}};
    for (const auto& e : strains) {
        double x[6];
        for (int k = 0; k < 3; ++k) {
            x[2 * k] = e[0][0] * v[k].x + e[0][1] * v[k].y;
            x[2 * k + 1] = e[1][0] * v[k].x + e[1][1] * v[k].y;
        }
        double q = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) q += x[i] * K[6 * i + j] * x[j];
        EXPECT_GT(q, 0.0);
    }
}

TEST(Elasticity, ElementLinearInStiffness) {
    const Triangle2 v{Vec2{0, 0}, Vec2{1, 0.2}, Vec2{0.1, 1}};
    const ElementMatrix a = element_stiffness(v, 1.0, 0.3);
    const ElementMatrix b = element_stiffness(v, 10.0, 0.3);
    for (int i = 0; i < 36; ++i) EXPECT_NEAR(b[i], 10.0 * a[i], 1e-13 * std::abs(b[i]) + 1e-15);
}

TEST(Elasticity, DegenerateTriangleIsAssemblyError) {
    try {
        element_stiffness({Vec2{0, 0}, Vec2{1, 1}, Vec2{2, 2}}, 1.0, 0.3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Assembly);
    }
    EXPECT_THROW(element_stiffness({Vec2{0, 0}, Vec2{0, 1}, Vec2{1, 0}}, 1.0, 0.3), Error);
}

TEST(Elasticity, MaterialValidation) {
    MaterialParams p;
    EXPECT_NO_THROW(p.validate());
    for (const double nu : {0.0, 0.5, -0.1}) {
        p = MaterialParams{};
        p.nu = nu;
        EXPECT_THROW(p.validate(), Error) << nu;
    }
    p = MaterialParams{};
    p.E = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p = MaterialParams{};
    p.beta = -1e-5;
    EXPECT_THROW(p.validate(), Error);
    p = MaterialParams{};
    p.kappa = -1.0;
    EXPECT_THROW(p.validate(), Error);
}

TEST(Elasticity, UnitBetaEqualsUniformAssembly) {
    const Mesh m = generate_mesh({20, 20}, 1.0, CellSquare{}, false);
    MaterialParams p;
    p.beta = 1.0;
    const SparseMatrix a = assemble(m, p, OuterBc::Dirichlet).matrix;
    const SparseMatrix b = assemble_stiffness(m, p.E, p.nu, 1.0);
    ASSERT_EQ(a.nnz(), b.nnz());
    for (std::size_t k = 0; k < a.nnz(); ++k) EXPECT_EQ(a.values()[k], b.values()[k]);
}

TEST(Elasticity, StructuralInvariantsOnEveryLevel) {
    Mesh m = generate_mesh({20, 20}, 1.0, CellSquare{}, false);
    for (int level = 0; level < 3; ++level) {
        const SparseMatrix K = assemble_stiffness(m, 1.0, 0.48, 1e-5);
        const double maxk = K.max_abs();
        EXPECT_LE(K.asymmetry(), 1e-12 * maxk);
        for (const auto& mode : {translation(m.num_nodes(), 1, 0), translation(m.num_nodes(), 0, 1), rotation(m)}) {
            const auto Kt = K.multiply(mode);
            EXPECT_LE(norm_inf(Kt), 1e-10 * maxk * std::max(1.0, norm_inf(mode)));
        }
        m = refine(m);
    }
}

TEST(Elasticity, DiscreteKornRandomVectors) {
    const Mesh m = generate_mesh({20, 20}, 1.0, CellSquare{}, false);
    for (const OuterBc bc : {OuterBc::Dirichlet, OuterBc::Robin}) {
        const StiffnessSystem sys = assemble(m, MaterialParams{}, bc);
        const SparseMatrix A = sys.reduced();
        std::mt19937_64 rng(42);
        std::normal_distribution<double> g;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> v(sys.size(), 0.0);
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!sys.constrained[i]) v[i] = g(rng);
            EXPECT_GT(A.quadratic_form(v), 0.0);
        }
    }
}

TEST(Elasticity, HoleRobinIsPositiveDefinite) {
    const Mesh hole = generate_mesh({20, 20}, 1.0, CellSquare{}, true);
    MaterialParams p;
    p.kappa = 1.0;
    const StiffnessSystem sys = assemble(hole, p, OuterBc::Robin);
    EXPECT_NO_THROW(SkylineCholesky{sys.reduced()});
}

TEST(Elasticity, SoftCellDirichletIsPositiveDefinite) {
    const Mesh m = generate_mesh({20, 20}, 0.5, CellSquare{}, false);
    const StiffnessSystem sys = assemble(m, MaterialParams{}, OuterBc::Dirichlet);
    EXPECT_TRUE(sys.warnings.empty());
    EXPECT_NO_THROW(SkylineCholesky{sys.reduced()});
}

TEST(Elasticity, ZeroBetaFullMeshWarns) {
    const Mesh m = generate_mesh({20, 20}, 1.0, CellSquare{}, false);
    MaterialParams p;
    p.beta = 0.0;
    const StiffnessSystem sys = assemble(m, p, OuterBc::Dirichlet);
    ASSERT_EQ(sys.warnings.size(), 1u);
    EXPECT_NE(sys.warnings[0].find("singular"), std::string::npos);
}

TEST(Elasticity, RobinNeedsPositiveKappa) {
    const Mesh m = generate_mesh({20, 20}, 1.0, CellSquare{}, false);
    MaterialParams p;
    p.kappa = 0.0;
    try {
        assemble(m, p, OuterBc::Robin);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
}

TEST(Elasticity, RobinMassIntegratesConstantsExactly) {
    const Mesh m = generate_mesh({20, 20}, 1.0, CellSquare{}, false);
    const double kappa = 0.7;
    const SparseMatrix M = assemble_robin_mass(m, kappa);
    // 1^T M 1 per component = kappa * perimeter
    const auto one_x = translation(m.num_nodes(), 1, 0);
    EXPECT_NEAR(M.quadratic_form(one_x), kappa * 80.0, 1e-12);
    // single edge pattern |e|/6 [2 1; 1 2]
    const NodeId a = m.tagged_edges()[0].nodes[0], b = m.tagged_edges()[0].nodes[1];
    EXPECT_NEAR(M.at(2 * a, 2 * b), kappa * 1.0 / 6.0, 1e-15);
    EXPECT_EQ(M.at(2 * a, 2 * b + 1), 0.0);
}

TEST(Elasticity, DirichletConstrainsOuterNodes) {
    const Mesh m = generate_mesh({20, 20}, 1.0, CellSquare{}, false);
    const StiffnessSystem sys = assemble(m, MaterialParams{}, OuterBc::Dirichlet);
    std::size_t fixed = 0;
    for (const char c : sys.constrained) fixed += c;
    EXPECT_EQ(fixed, 160u);
    const SparseMatrix A = sys.reduced();
    const NodeId corner = 0;
    EXPECT_EQ(A.at(2 * corner, 2 * corner), 1.0);
    EXPECT_EQ(A.at(2 * corner, 2 * corner + 2), 0.0);
    EXPECT_EQ(A.at(2 * corner + 2, 2 * corner), 0.0);
}
