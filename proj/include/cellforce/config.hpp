#pragma once

#include "cellforce/elasticity.hpp"
#include "cellforce/forces.hpp"
#include "cellforce/geometry.hpp"
#include "cellforce/mesh.hpp"
#include "cellforce/solver.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cellforce {

/// Every setting an experiment reads. Keys are `section.key` as listed in
/// `config_keys()`; defaults are the reference configuration.
struct ExperimentConfig {
    // geometry
    DomainSize domain{20.0, 20.0};
    double cell_side = 6.0;
    double center_x = -1.0;  ///< negative means the domain center
    double center_y = -1.0;
    double vicinity_width = 10.0;
    double vicinity_height = 10.0;

    MaterialParams material;
    OuterBc outer_bc = OuterBc::Dirichlet;

    // model used for single solves and dumps
    std::string model = "immersed";
    double epsilon = 0.5;
    std::size_t segments = 0;
    std::size_t quadrature_order = 2;

    // discretization
    double h = 0.5;
    double coarse_h = 1.0;
    std::size_t levels = 3;

    SolverOptions solver;

    // sweeps
    std::vector<double> betas{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    double beta_h = 0.5;
    double smoothing_h = 0.25;
    double fixed_dx = 2.0;
    std::vector<double> gap1_epsilons{0.125, 0.0625, 0.03125};
    double fixed_eps = 1.0;
    std::vector<double> gap2_dxs{1.0, 0.5, 0.25};
    std::vector<double> combined_dxs{2.0, 1.0, 0.5};
    std::vector<double> moment_epsilons{0.1, 0.05, 0.025, 0.0125};
    std::size_t quadrature_levels = 5;

    // one-dimensional check
    double bar_length = 20.0;
    double bar_center = 10.0;
    double bar_cell = 6.0;
    std::size_t bar_nodes = 161;

    // output
    std::string csv_path;
    std::string svg_path;
    std::string dump_prefix = "cellforce_";
    double svg_scale = 1.0;
    bool dump_mesh = false;
    bool dump_matrix = false;
    bool dump_rhs = false;

    std::uint64_t seed = 42;

    CellSquare cell() const;
    /// Wound rectangle centered with the cell.
    std::pair<Vec2, Vec2> vicinity() const;
    /// Force model named by `model` with the model.* settings.
    ForceModel force_model() const;

    /// Sets one `section.key`; throws ErrorKind::Config naming the key on an
    /// unknown key or malformed value.
    void set(const std::string& key, const std::string& value);
    /// Applies `section.key=value`.
    void set_assignment(const std::string& assignment);
    /// Reads an INI file of [section] headers and key = value lines.
    void load_file(const std::string& path);
    /// Throws ErrorKind::Config naming the first invalid key.
    void validate() const;
};

/// All recognised keys in `section.key` form.
const std::vector<std::string>& config_keys();

}  // namespace cellforce
