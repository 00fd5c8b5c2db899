#include "cellforce/config.hpp"

#include "cellforce/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace cellforce {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) fail(ErrorKind::Config, key + ": expected a number, got '" + text + "'");
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
        fail(ErrorKind::Config, key + ": expected a non-negative integer, got '" + text + "'");
    return static_cast<std::size_t>(std::stoull(t));
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    fail(ErrorKind::Config, key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) fail(ErrorKind::Config, key + ": expected a comma-separated list of numbers");
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

Setter number(double ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); };
}
Setter material(double MaterialParams::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.material.*field = parse_double(k, v);
    };
}
Setter count(std::size_t ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*field = parse_count(k, v); };
}
Setter list(std::vector<double> ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*field = parse_list(k, v); };
}
Setter text(std::string ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string&, const std::string& v) { c.*field = trim(v); };
}
Setter flag(bool ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*field = parse_bool(k, v); };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"geometry.x0", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.domain.width = parse_double(k, v);
         }},
        {"geometry.y0", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.domain.height = parse_double(k, v);
         }},
        {"geometry.R", number(&ExperimentConfig::cell_side)},
        {"geometry.center_x", number(&ExperimentConfig::center_x)},
        {"geometry.center_y", number(&ExperimentConfig::center_y)},
        {"geometry.wx", number(&ExperimentConfig::vicinity_width)},
        {"geometry.wy", number(&ExperimentConfig::vicinity_height)},
        {"material.E", material(&MaterialParams::E)},
        {"material.nu", material(&MaterialParams::nu)},
        {"material.beta", material(&MaterialParams::beta)},
        {"material.kappa", material(&MaterialParams::kappa)},
        {"material.P", material(&MaterialParams::P)},
        {"boundary.outer", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             const std::string t = trim(v);
             if (t == "dirichlet") c.outer_bc = OuterBc::Dirichlet;
             else if (t == "robin") c.outer_bc = OuterBc::Robin;
             else fail(ErrorKind::Config, k + ": expected dirichlet or robin, got '" + v + "'");
         }},
        {"model.type", text(&ExperimentConfig::model)},
        {"model.epsilon", number(&ExperimentConfig::epsilon)},
        {"model.segments", count(&ExperimentConfig::segments)},
        {"model.quadrature_order", count(&ExperimentConfig::quadrature_order)},
        {"discretization.h", number(&ExperimentConfig::h)},
        {"discretization.coarse_h", number(&ExperimentConfig::coarse_h)},
        {"discretization.levels", count(&ExperimentConfig::levels)},
        {"solver.method", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             const std::string t = trim(v);
             if (t == "cg") c.solver.method = SolverMethod::CgJacobi;
             else if (t == "cholesky") c.solver.method = SolverMethod::Cholesky;
             else fail(ErrorKind::Config, k + ": expected cg or cholesky, got '" + v + "'");
         }},
        {"solver.tolerance", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.tolerance = parse_double(k, v);
         }},
        {"solver.max_iterations", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.max_iterations = parse_count(k, v);
         }},
        {"sweep.betas", list(&ExperimentConfig::betas)},
        {"sweep.beta_h", number(&ExperimentConfig::beta_h)},
        {"sweep.smoothing_h", number(&ExperimentConfig::smoothing_h)},
        {"sweep.fixed_dx", number(&ExperimentConfig::fixed_dx)},
        {"sweep.gap1_epsilons", list(&ExperimentConfig::gap1_epsilons)},
        {"sweep.fixed_eps", number(&ExperimentConfig::fixed_eps)},
        {"sweep.gap2_dxs", list(&ExperimentConfig::gap2_dxs)},
        {"sweep.combined_dxs", list(&ExperimentConfig::combined_dxs)},
        {"sweep.moment_epsilons", list(&ExperimentConfig::moment_epsilons)},
        {"sweep.quadrature_levels", count(&ExperimentConfig::quadrature_levels)},
        {"verify1d.L", number(&ExperimentConfig::bar_length)},
        {"verify1d.c", number(&ExperimentConfig::bar_center)},
        {"verify1d.h", number(&ExperimentConfig::bar_cell)},
        {"verify1d.nodes", count(&ExperimentConfig::bar_nodes)},
        {"output.csv", text(&ExperimentConfig::csv_path)},
        {"output.svg", text(&ExperimentConfig::svg_path)},
        {"output.prefix", text(&ExperimentConfig::dump_prefix)},
        {"output.svg_scale", number(&ExperimentConfig::svg_scale)},
        {"output.dump_mesh", flag(&ExperimentConfig::dump_mesh)},
        {"output.dump_matrix", flag(&ExperimentConfig::dump_matrix)},
        {"output.dump_rhs", flag(&ExperimentConfig::dump_rhs)},
        {"run.seed", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.seed = parse_count(k, v);
         }},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

CellSquare ExperimentConfig::cell() const {
    return CellSquare{{center_x < 0.0 ? 0.5 * domain.width : center_x, center_y < 0.0 ? 0.5 * domain.height : center_y},
                      cell_side};
}

std::pair<Vec2, Vec2> ExperimentConfig::vicinity() const {
    const Vec2 c = cell().center;
    return {{c.x - 0.5 * vicinity_width, c.y - 0.5 * vicinity_height},
            {c.x + 0.5 * vicinity_width, c.y + 0.5 * vicinity_height}};
}

ForceModel ExperimentConfig::force_model() const {
    if (model == "immersed") return PointForces{segments};
    if (model == "continuous") return ContinuousImmersed{quadrature_order};
    if (model == "smoothed") return SmoothedGaussian{epsilon, segments};
    if (model == "particle") return SmoothedParticleGradient{epsilon};
    if (model == "hole") return HoleNeumann{};
    fail(ErrorKind::Config, "model.type: expected immersed, continuous, smoothed, particle or hole, got '" + model +
                                "'");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    const auto it = setters().find(trim(key));
    if (it == setters().end()) fail(ErrorKind::Config, "unknown configuration key '" + key + "'");
    it->second(*this, it->first, value);
}

void ExperimentConfig::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, "expected section.key=value, got '" + assignment + "'");
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void ExperimentConfig::load_file(const std::string& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        fail(ErrorKind::Io, "cannot read config '" + path + "': " + e.message() + " (line " +
                                std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) fail(ErrorKind::Config, "key '" + section + "' is outside any [section]");
        for (const auto& [key, value] : body) set(section + "." + key, value.data());
    }
}

void ExperimentConfig::validate() const {
    const auto require = [](bool ok, const char* key, const std::string& why) {
        if (!ok) fail(ErrorKind::Config, std::string(key) + ": " + why);
    };
    try {
        material.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, e.what());
    }
    require(domain.width > 0.0, "geometry.x0", "must be positive");
    require(domain.height > 0.0, "geometry.y0", "must be positive");
    require(cell_side > 0.0, "geometry.R", "must be positive");
    require(vicinity_width > 0.0, "geometry.wx", "must be positive");
    require(vicinity_height > 0.0, "geometry.wy", "must be positive");
    require(epsilon > 0.0, "model.epsilon", "must be positive");
    require(segments % 4 == 0, "model.segments", "must be 0 or a multiple of 4");
    require(quadrature_order >= 1, "model.quadrature_order", "must be at least 1");
    require(h > 0.0, "discretization.h", "must be positive");
    require(coarse_h > 0.0, "discretization.coarse_h", "must be positive");
    require(levels >= 3, "discretization.levels", "at least 3 levels are needed for a rate");
    require(solver.tolerance > 0.0, "solver.tolerance", "must be positive");
    require(beta_h > 0.0, "sweep.beta_h", "must be positive");
    require(smoothing_h > 0.0, "sweep.smoothing_h", "must be positive");
    require(fixed_dx > 0.0 && fixed_eps > 0.0, "sweep.fixed_dx", "fixed_dx and fixed_eps must be positive");
    for (const auto* l : {&betas, &gap1_epsilons, &gap2_dxs, &combined_dxs, &moment_epsilons})
        for (const double v : *l) require(v > 0.0, "sweep", "list entries must be positive");
    require(quadrature_levels >= 2, "sweep.quadrature_levels", "must be at least 2");
    require(bar_nodes >= 3, "verify1d.nodes", "must be at least 3");
    require(svg_scale > 0.0, "output.svg_scale", "must be positive");
    (void)force_model();
}

}  // namespace cellforce
