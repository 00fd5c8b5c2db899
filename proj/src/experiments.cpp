#include "cellforce/experiments.hpp"

#include "cellforce/analysis.hpp"
#include "cellforce/error.hpp"
#include "cellforce/verify1d.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>

namespace cellforce {

std::string ExperimentResult::summary_text() const {
    std::string out;
    for (const auto& [k, v] : summary) out += k + " = " + v + "\n";
    for (const auto& w : warnings) out += "warning = " + w + "\n";
    for (const auto& v : violations) out += "violation = " + v + "\n";
    out += std::string("status = ") + (ok() ? "ok" : "failed") + "\n";
    return out;
}

std::string ExperimentResult::get(const std::string& key) const {
    for (const auto& [k, v] : summary)
        if (k == key) return v;
    return {};
}

namespace {

using MeshPtr = std::shared_ptr<const Mesh>;

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(const std::vector<double>& row) { rows_.push_back(row); }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
        out += "\n";
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt17(row[i]);
            out += "\n";
        }
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

class Run {
public:
    explicit Run(const ExperimentConfig& config) : cfg(config) {}

    const ExperimentConfig& cfg;
    ExperimentResult result;

    void put(const std::string& key, double v) { result.summary.emplace_back(key, fmt17(v)); }
    void put(const std::string& key, const std::string& v) { result.summary.emplace_back(key, v); }
    void put_flag(const std::string& key, bool v) { put(key, v ? "true" : "false"); }
    void violation(const std::string& what) { result.violations.push_back(what); }

    MeshPtr mesh(double h, bool hole) {
        auto m = std::make_shared<const Mesh>(generate_mesh(cfg.domain, h, cfg.cell(), hole));
        check_mesh(*m);
        return m;
    }

    MeshPtr refined(const Mesh& m) {
        auto r = std::make_shared<const Mesh>(refine(m));
        check_mesh(*r);
        return r;
    }

    void check_mesh(const Mesh& m) {
        for (const auto& v : m.check_invariants()) violation("mesh h=" + fmt17(m.h_target()) + ": " + v);
    }

    StiffnessSystem system(const Mesh& m, const MaterialParams& params, OuterBc bc) {
        StiffnessSystem sys = assemble(m, params, bc);
        for (const auto& w : sys.warnings) result.warnings.push_back(w);
        const double asym = sys.matrix.asymmetry();
        if (asym > 1e-12 * sys.matrix.max_abs())
            violation("stiffness asymmetry " + fmt17(asym) + " on mesh h=" + fmt17(m.h_target()));
        return sys;
    }

    LoadVector load(const Mesh& m, const ForceModel& model, const Pressure& P, bool closed = true) {
        LoadVector f = build_load(m, model, P, &result.warnings);
        if (closed) {
            const Vec2 total = total_force(f);
            const double bound = 1e-10 * std::max(norm_inf(f), 1e-300);
            if (std::abs(total.x) > bound || std::abs(total.y) > bound)
                violation(describe(model) + " load is not self-equilibrated on mesh h=" + fmt17(m.h_target()));
        }
        return f;
    }

    Solution solve_model(const MeshPtr& m, const ForceModel& model, OuterBc bc, SolveReport* report = nullptr,
                         const MaterialParams* params = nullptr) {
        const MaterialParams& p = params ? *params : cfg.material;
        const StiffnessSystem sys = system(*m, p, bc);
        const LoadVector f = load(*m, model, constant_pressure(p.P));
        SolveResult r = solve(sys, f, cfg.solver);
        if (report) *report = r.report;
        return Solution{m, std::move(r.u), bc};
    }

    void write_outputs() {
        if (!cfg.csv_path.empty()) write_file(cfg.csv_path, result.csv);
    }

    void write_file(const std::string& path, const std::string& content) {
        std::ofstream os(path, std::ios::binary);
        if (!os) fail(ErrorKind::Io, "cannot write '" + path + "'");
        os << content;
        if (!os) fail(ErrorKind::Io, "failed writing '" + path + "'");
    }

    void write_svg_for(const Solution& sol, const std::string& tag) {
        if (cfg.svg_path.empty()) return;
        std::string path = cfg.svg_path;
        const auto dot = path.rfind(".svg");
        path = (dot == std::string::npos ? path : path.substr(0, dot)) + "-" + tag + ".svg";
        std::ostringstream os;
        write_svg(os, sol, SvgStyle{cfg.svg_scale, true});
        write_file(path, os.str());
        put("svg." + tag, path);
    }
};

std::vector<NodeId> loop_of(const Mesh& m, std::pair<Vec2, Vec2> box) { return m.rectangle_loop(box.first, box.second); }

// Presets ---------------------------------------------------------------------

struct Approach {
    const char* name;
    double code;
    bool hole;
    ForceModel model;
};

std::vector<Approach> approaches(const ExperimentConfig& cfg) {
    return {{"immersed", 0.0, false, PointForces{cfg.segments}},
            {"hole", 1.0, true, HoleNeumann{}},
            {"smoothed", 2.0, false, SmoothedGaussian{cfg.epsilon, cfg.segments}}};
}

void manufactured_check(Run& run, const Mesh& m) {
    const StiffnessSystem sys = run.system(m, run.cfg.material, run.cfg.outer_bc);
    std::mt19937_64 rng(run.cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> w(sys.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!sys.constrained[i]) w[i] = dist(rng);
    const std::vector<double> f = sys.reduced().multiply(w);
    const std::vector<double> u = solve(sys, f, run.cfg.solver).u;
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - w[i]));
    run.put("solver.manufactured_error", err / norm_inf(w));
}

void compare_approaches(Run& run) {
    const auto& cfg = run.cfg;
    Csv csv({"approach", "h", "cell_reduction", "vicinity_reduction", "l2_norm", "self_intersecting"});
    run.put("h", cfg.h);
    run.put("solver.method", to_string(cfg.solver.method));
    std::vector<double> cells;
    const MeshPtr full = run.mesh(cfg.h, false);
    const MeshPtr hole = run.mesh(cfg.h, true);
    for (const Approach& a : approaches(cfg)) {
        SolveReport report;
        const Solution sol = run.solve_model(a.hole ? hole : full, a.model, cfg.outer_bc, &report);
        const AreaReduction cell = area_reduction(*sol.mesh, sol.u, loop_of(*sol.mesh, {cfg.cell().lower(), cfg.cell().upper()}));
        const AreaReduction vic = area_reduction(*sol.mesh, sol.u, loop_of(*sol.mesh, cfg.vicinity()));
        const double l2 = l2_norm(sol);
        const std::string p = a.name;
        run.put(p + ".model", describe(a.model));
        run.put(p + ".cell_reduction", cell.percent);
        run.put(p + ".vicinity_reduction", vic.percent);
        run.put(p + ".l2_norm", l2);
        run.put_flag(p + ".self_intersecting", cell.self_intersecting || vic.self_intersecting);
        run.put(p + ".iterations", static_cast<double>(report.iterations));
        run.put(p + ".relative_residual", report.relative_residual);
        run.put(p + ".wall_time", report.wall_time);
        if (cell.self_intersecting || vic.self_intersecting)
            run.result.warnings.push_back(p + ": deformed polygon intersects itself");
        csv.add({a.code, cfg.h, cell.percent, vic.percent, l2, (cell.self_intersecting || vic.self_intersecting) ? 1.0 : 0.0});
        cells.push_back(cell.percent);
        run.write_svg_for(sol, a.name);
    }
    run.put("max_pairwise_cell_difference", *std::max_element(cells.begin(), cells.end()) -
                                                *std::min_element(cells.begin(), cells.end()));
    manufactured_check(run, *full);
    run.result.csv = csv.str();
}

void convergence_table(Run& run) {
    const auto& cfg = run.cfg;
    Csv csv({"approach", "level", "h", "l2_norm", "rate"});
    run.put("solver.method", to_string(cfg.solver.method));
    for (const Approach& a : approaches(cfg)) {
        std::vector<double> hs, norms;
        MeshPtr m = run.mesh(cfg.coarse_h, a.hole);
        for (std::size_t level = 0; level < cfg.levels; ++level) {
            if (level > 0) m = run.refined(*m);
            const Solution sol = run.solve_model(m, a.model, cfg.outer_bc);
            hs.push_back(m->h_target());
            norms.push_back(l2_norm(sol));
            run.put(std::string(a.name) + ".level" + std::to_string(level) + ".h", hs.back());
            run.put(std::string(a.name) + ".level" + std::to_string(level) + ".l2_norm", norms.back());
        }
        const std::size_t n = norms.size();
        const double rate = estimate_order(norms[n - 3], norms[n - 2], norms[n - 1]);
        run.put(std::string(a.name) + ".rate", rate);
        for (std::size_t level = 0; level < n; ++level)
            csv.add({a.code, static_cast<double>(level), hs[level], norms[level], rate});
    }
    run.result.csv = csv.str();
}

void beta_sweep(Run& run) {
    const auto& cfg = run.cfg;
    const MeshPtr full = run.mesh(cfg.beta_h, false);
    const BetaSweep sweep = beta_consistency_sweep(*full, cfg.material, cfg.outer_bc, cfg.betas, cfg.solver);
    Csv csv({"beta", "h1_difference"});
    run.put("h", cfg.beta_h);
    for (std::size_t i = 0; i < sweep.study.levels.size(); ++i) {
        const auto& l = sweep.study.levels[i];
        run.put("level" + std::to_string(i) + ".beta", l.parameter);
        run.put("level" + std::to_string(i) + ".h1_difference", l.value);
        csv.add({l.parameter, l.value});
    }
    run.put("slope", sweep.study.estimated_order);
    run.put_flag("monotone", sweep.monotone);
    if (!sweep.monotone) run.result.warnings.push_back("beta sweep: difference is not monotone in beta");
    run.result.csv = csv.str();
}

void epsilon_sweep(Run& run) {
    const auto& cfg = run.cfg;
    const MeshPtr m = run.mesh(cfg.smoothing_h, false);
    const SmoothingPlan plan{cfg.fixed_dx, cfg.gap1_epsilons, cfg.fixed_eps, cfg.gap2_dxs, cfg.combined_dxs};
    SmoothingSweep sweep = smoothing_consistency_sweep(m, cfg.material, cfg.outer_bc, plan, cfg.solver);
    run.result.warnings.insert(run.result.warnings.end(), sweep.warnings.begin(), sweep.warnings.end());

    // study: 1 gap1 (eps), 2 gap2 / dx^2 (dx), 3 combined (dx), 10 + n Gaussian moment error (eps)
    Csv csv({"study", "parameter", "value"});
    run.put("h", cfg.smoothing_h);
    run.put("gap1.dx", sweep.fixed_dx);
    const auto emit = [&](const std::string& name, double code, const ConvergenceStudy& s, const char* param) {
        for (std::size_t i = 0; i < s.levels.size(); ++i) {
            run.put(name + ".level" + std::to_string(i) + "." + param, s.levels[i].parameter);
            run.put(name + ".level" + std::to_string(i) + ".value", s.levels[i].value);
            csv.add({code, s.levels[i].parameter, s.levels[i].value});
        }
        if (s.levels.size() >= 2) run.put(name + ".order", s.estimated_order);
    };
    emit("gap1", 1.0, sweep.gap1, "epsilon");
    run.put("gap2.epsilon", sweep.fixed_eps);
    emit("gap2", 2.0, sweep.gap2, "dx");
    emit("combined", 3.0, sweep.combined, "dx");
    run.put_flag("combined.monotone", sweep.combined_monotone);

    for (int n = 1; n <= 3; ++n) {
        const GaussianMomentStudy s = gaussian_moment_study(n, cfg.moment_epsilons);
        const std::string p = "moments.n" + std::to_string(n);
        bool mass_ok = true;
        double max_mass = 0.0;
        for (std::size_t i = 0; i < s.epsilons.size(); ++i) {
            csv.add({10.0 + n, s.epsilons[i], s.moment_errors[i]});
            max_mass = std::max(max_mass, s.mass_errors[i]);
            if (s.mass_errors[i] > s.epsilons[i] * s.epsilons[i]) mass_ok = false;
        }
        run.put(p + ".order", s.moment_order);
        run.put(p + ".max_mass_error", max_mass);
        run.put_flag(p + ".mass_within_eps2", mass_ok);
    }
    run.result.csv = csv.str();
}

void quadrature_order(Run& run) {
    const auto& cfg = run.cfg;
    const CellSquare square = cfg.cell();
    const auto f2 = [](Vec2 x) { return std::exp(0.1 * x.x + 0.05 * x.y); };
    const auto f3 = [](const std::array<double, 3>& x) { return std::exp(0.1 * x[0] + 0.05 * x[1] - 0.08 * x[2]); };
    const ConvergenceStudy s2 = midpoint_quadrature_order_2d(square, f2, cfg.quadrature_levels);
    const ConvergenceStudy s3 = midpoint_quadrature_order_3d({square.center.x, square.center.y, square.center.x},
                                                             square.side, f3, cfg.quadrature_levels);
    Csv csv({"dimension", "element_size", "error"});
    for (const auto& l : s2.levels) csv.add({2.0, l.parameter, l.value});
    for (const auto& l : s3.levels) csv.add({3.0, l.parameter, l.value});
    run.put("2d.order", s2.estimated_order);
    run.put("3d.order", s3.estimated_order);
    run.put("levels", static_cast<double>(cfg.quadrature_levels));
    run.result.csv = csv.str();
}

void verify_1d(Run& run) {
    const auto& cfg = run.cfg;
    const Cell1D cell{cfg.bar_length, cfg.bar_center, cfg.bar_cell};
    const Solution1D sol = solve_1d(cell, cfg.bar_nodes, true);
    const double err = max_nodal_error(cell, sol);
    run.put("nodes", static_cast<double>(cfg.bar_nodes));
    run.put("max_nodal_error", err);
    if (!(err <= 1e-12)) run.violation("1D nodal error " + fmt17(err) + " exceeds 1e-12");

    // misaligned meshes: force points strictly between nodes
    Csv csv({"nodes", "aligned", "max_nodal_error", "l2_error"});
    csv.add({static_cast<double>(cfg.bar_nodes), 1.0, err, l2_error(cell, sol)});
    std::vector<double> dxs, errs;
    for (const std::size_t n : {std::size_t{8}, std::size_t{16}, std::size_t{32}, std::size_t{64}}) {
        const std::size_t nodes = n * 7 + 1;  // spacing L / (7n) keeps c +- h/2 off the grid for the defaults
        bool aligned = true;
        try {
            (void)solve_1d(cell, nodes, true);
        } catch (const Error&) {
            aligned = false;
        }
        const Solution1D s = solve_1d(cell, nodes, false);
        const double e2 = l2_error(cell, s);
        csv.add({static_cast<double>(nodes), aligned ? 1.0 : 0.0, max_nodal_error(cell, s), e2});
        dxs.push_back(cfg.bar_length / static_cast<double>(nodes - 1));
        errs.push_back(e2);
    }
    run.put("misaligned.l2_order", loglog_slope(dxs, errs));
    run.result.csv = csv.str();
}

void momentum_check(Run& run) {
    const auto& cfg = run.cfg;
    Csv csv({"variant", "lhs_x", "lhs_y", "rhs_x", "rhs_y", "gap", "bound"});
    const MeshPtr full = run.mesh(cfg.h, false);
    const MeshPtr hole = run.mesh(cfg.h, true);
    const CellSquare cell = cfg.cell();
    const double perimeter = 2.0 * (cfg.domain.width + cfg.domain.height);

    const auto check = [&](const char* name, double code, const Solution& sol, const Pressure& P) {
        const MomentumBalance mb = momentum_balance(sol, cfg.material, cell, P);
        double umax = 0.0;
        for (NodeId n = 0; n < sol.mesh->num_nodes(); ++n) umax = std::max(umax, norm(sol.displacement(n)));
        const double bound = 1e-6 * cfg.material.kappa * perimeter * umax;
        const std::string p = name;
        run.put(p + ".lhs_x", mb.lhs.x);
        run.put(p + ".lhs_y", mb.lhs.y);
        run.put(p + ".rhs_x", mb.rhs.x);
        run.put(p + ".rhs_y", mb.rhs.y);
        run.put(p + ".gap", mb.gap);
        run.put(p + ".bound", bound);
        if (!(mb.gap <= bound)) run.violation(p + ": momentum gap " + fmt17(mb.gap) + " exceeds " + fmt17(bound));
        csv.add({code, mb.lhs.x, mb.lhs.y, mb.rhs.x, mb.rhs.y, mb.gap, bound});
    };

    const Solution immersed = run.solve_model(full, PointForces{cfg.segments}, OuterBc::Robin);
    check("immersed", 0.0, immersed, constant_pressure(cfg.material.P));
    const Solution holed = run.solve_model(hole, HoleNeumann{}, OuterBc::Robin);
    check("hole", 1.0, holed, constant_pressure(cfg.material.P));
    run.write_svg_for(immersed, "immersed");

    // only the left face pulls: the net force no longer vanishes
    const double left = cell.lower().x;
    const double P = cfg.material.P;
    const Pressure one_sided = [left, P](Vec2 x) { return std::abs(x.x - left) <= 1e-12 ? P : 0.0; };
    const StiffnessSystem sys = run.system(*full, cfg.material, OuterBc::Robin);
    const LoadVector f = run.load(*full, ContinuousImmersed{cfg.quadrature_order}, one_sided, false);
    const Solution lopsided{full, solve(sys, f, cfg.solver).u, OuterBc::Robin};
    check("one_sided", 2.0, lopsided, one_sided);
    run.result.csv = csv.str();
}

void write_dumps(Run& run) {
    const auto& cfg = run.cfg;
    if (!cfg.dump_mesh && !cfg.dump_matrix && !cfg.dump_rhs) return;
    const ForceModel model = cfg.force_model();
    const bool hole = std::holds_alternative<HoleNeumann>(model);
    const Mesh m = generate_mesh(cfg.domain, cfg.h, cfg.cell(), hole);
    if (cfg.dump_mesh) {
        std::ostringstream os;
        m.write_text(os);
        run.write_file(cfg.dump_prefix + "mesh.txt", os.str());
        run.put("dump.mesh", cfg.dump_prefix + "mesh.txt");
    }
    if (cfg.dump_matrix) {
        std::ostringstream os;
        assemble(m, cfg.material, cfg.outer_bc).reduced().write_coordinate(os);
        run.write_file(cfg.dump_prefix + "matrix.txt", os.str());
        run.put("dump.matrix", cfg.dump_prefix + "matrix.txt");
    }
    if (cfg.dump_rhs) {
        const LoadVector f = build_load(m, model, constant_pressure(cfg.material.P), &run.result.warnings);
        std::string out = "dof,value\n";
        for (std::size_t i = 0; i < f.size(); ++i) out += std::to_string(i) + "," + fmt17(f[i]) + "\n";
        run.write_file(cfg.dump_prefix + "rhs.csv", out);
        run.put("dump.rhs", cfg.dump_prefix + "rhs.csv");
    }
}

const std::map<std::string, std::function<void(Run&)>>& presets() {
    static const std::map<std::string, std::function<void(Run&)>> table = {
        {"compare-approaches", compare_approaches}, {"convergence-table", convergence_table},
        {"beta-sweep", beta_sweep},                 {"epsilon-sweep", epsilon_sweep},
        {"quadrature-order", quadrature_order},     {"verify-1d", verify_1d},
        {"momentum-check", momentum_check},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, _] : presets()) n.push_back(k);
        return n;
    }();
    return names;
}

ExperimentResult run_preset(const std::string& preset, const ExperimentConfig& config) {
    const auto it = presets().find(preset);
    if (it == presets().end()) fail(ErrorKind::Config, "unknown preset '" + preset + "'");
    config.validate();
    Run run(config);
    run.put("preset", preset);
    it->second(run);
    write_dumps(run);
    run.write_outputs();
    return std::move(run.result);
}

}  // namespace cellforce
