// Acceptance runner: one PASS/FAIL line per criterion.
#include "cellforce/analysis.hpp"
#include "cellforce/config.hpp"
#include "cellforce/elasticity.hpp"
#include "cellforce/experiments.hpp"
#include "cellforce/forces.hpp"
#include "cellforce/solver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

using namespace cellforce;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [FAILED]");
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double value(const ExperimentResult& r, const std::string& key) {
    const std::string v = r.get(key);
    if (v.empty()) throw std::runtime_error("summary has no key '" + key + "'");
    return std::stod(v);
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

// 1D exactness on the aligned 161-node bar.
Outcome criterion_1() {
    Outcome o;
    const ExperimentResult r = run_preset("verify-1d", ExperimentConfig{});
    const double err = value(r, "max_nodal_error");
    o.require(err <= 1e-12, "max nodal error " + num(err) + " <= 1e-12");
    return o;
}

// Rate formula applied to the published norms.
Outcome criterion_2() {
    Outcome o;
    const struct {
        const char* name;
        double a, b, c, rate;
    } columns[] = {
        {"immersed", 5.8833092, 5.9302898, 5.9484929, 1.36788},
        {"hole", 5.9256424, 5.952170, 5.9593735, 1.88060},
        {"smoothed", 5.8981846, 5.9324678, 5.9486686, 1.08102},
    };
    for (const auto& c : columns) {
        const double got = estimate_order(c.a, c.b, c.c);
        o.require(within(got, c.rate, 5e-6), std::string(c.name) + " " + num(got) + " vs " + num(c.rate));
    }
    return o;
}

// Cell area reductions at h = R/12.
Outcome criterion_3() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.h = cfg.cell_side / 12.0;
    const ExperimentResult r = run_preset("compare-approaches", cfg);
    const std::pair<const char*, double> targets[] = {{"immersed", 45.84}, {"hole", 45.71}, {"smoothed", 45.19}};
    std::vector<double> got;
    for (const auto& [name, target] : targets) {
        const double v = value(r, std::string(name) + ".cell_reduction");
        got.push_back(v);
        o.require(within(v, target, 3.0), std::string(name) + " " + num(v) + "% vs " + num(target) + " +- 3");
    }
    const double spread = *std::max_element(got.begin(), got.end()) - *std::min_element(got.begin(), got.end());
    o.require(spread <= 2.0, "spread " + num(spread) + " <= 2");
    return o;
}

// Convergence rates on three nested levels.
Outcome criterion_4() {
    Outcome o;
    const ExperimentResult r = run_preset("convergence-table", ExperimentConfig{});
    double hole = 0.0, smoothed = 0.0;
    for (const char* name : {"immersed", "hole", "smoothed"}) {
        const double rate = value(r, std::string(name) + ".rate");
        if (std::string(name) == "hole") hole = rate;
        if (std::string(name) == "smoothed") smoothed = rate;
        o.require(rate >= 1.0 && rate <= 2.3, std::string(name) + " rate " + num(rate) + " in [1, 2.3]");
    }
    o.require(hole >= smoothed, "hole " + num(hole) + " >= smoothed " + num(smoothed));
    return o;
}

// Soft-cell versus hole difference against beta.
Outcome criterion_5() {
    Outcome o;
    const ExperimentResult r = run_preset("beta-sweep", ExperimentConfig{});
    const double slope = value(r, "slope");
    o.require(within(slope, 0.5, 0.15), "slope " + num(slope) + " vs 0.5 +- 0.15");
    return o;
}

// Midpoint surface quadrature in 2D and 3D.
Outcome criterion_6() {
    Outcome o;
    const ExperimentResult r = run_preset("quadrature-order", ExperimentConfig{});
    for (const char* key : {"2d.order", "3d.order"}) {
        const double v = value(r, key);
        o.require(within(v, 2.0, 0.3), std::string(key) + " " + num(v));
    }
    return o;
}

// Gaussian moments and mass in 1, 2 and 3 dimensions.
Outcome criterion_7() {
    Outcome o;
    const ExperimentConfig cfg;
    for (int n = 1; n <= 3; ++n) {
        const GaussianMomentStudy s = gaussian_moment_study(n, cfg.moment_epsilons);
        o.require(within(s.moment_order, 2.0, 0.2), "n=" + std::to_string(n) + " order " + num(s.moment_order));
        bool mass = true;
        for (std::size_t i = 0; i < s.epsilons.size(); ++i)
            mass = mass && s.mass_errors[i] <= s.epsilons[i] * s.epsilons[i];
        o.require(mass, "n=" + std::to_string(n) + " mass error <= eps^2");
    }
    return o;
}

// Smoothed-force gaps.
Outcome criterion_8() {
    Outcome o;
    const ExperimentResult r = run_preset("epsilon-sweep", ExperimentConfig{});
    const double g1 = value(r, "gap1.order"), g2 = value(r, "gap2.order");
    o.require(within(g1, 1.0, 0.3), "gap1 exponent " + num(g1) + " vs 1 +- 0.3");
    o.require(within(g2, 2.0, 0.4), "gap2 exponent " + num(g2) + " vs 2 +- 0.4");
    o.require(r.get("combined.monotone") == "true", "combined gap monotone");
    return o;
}

// Robin momentum balance.
Outcome criterion_9() {
    Outcome o;
    const ExperimentResult r = run_preset("momentum-check", ExperimentConfig{});
    for (const char* name : {"immersed", "hole", "one_sided"}) {
        const double gap = value(r, std::string(name) + ".gap"), bound = value(r, std::string(name) + ".bound");
        o.require(gap <= bound, std::string(name) + " gap " + num(gap) + " <= " + num(bound));
    }
    return o;
}

// Structural properties on every mesh level used by the presets.
Outcome criterion_10() {
    Outcome o;
    const ExperimentConfig cfg;
    const MaterialParams params = cfg.material;
    std::size_t checked = 0;
    std::vector<std::string> failures;
    const auto check = [&](bool ok, const std::string& what) {
        ++checked;
        if (!ok) failures.push_back(what);
    };

    for (const double h : {1.0, 0.5, 0.25})
        for (const bool hole : {false, true}) {
            const auto mesh = std::make_shared<const Mesh>(generate_mesh(cfg.domain, h, cfg.cell(), hole));
            const std::string tag = "h=" + num(h) + (hole ? " hole" : " full");
            check(mesh->check_invariants().empty(), tag + " mesh invariants");

            const SparseMatrix K = assemble_stiffness(*mesh, params.E, params.nu, params.beta);
            const double kmax = K.max_abs();
            check(K.asymmetry() <= 1e-12 * kmax, tag + " symmetry");
            std::vector<double> tx(mesh->num_dofs()), ty(mesh->num_dofs()), rot(mesh->num_dofs());
            for (NodeId n = 0; n < mesh->num_nodes(); ++n) {
                tx[2 * n] = 1.0;
                ty[2 * n + 1] = 1.0;
                rot[2 * n] = -mesh->nodes()[n].y;
                rot[2 * n + 1] = mesh->nodes()[n].x;
            }
            check(norm_inf(K.multiply(tx)) <= 1e-10 * kmax, tag + " x translation in null space");
            check(norm_inf(K.multiply(ty)) <= 1e-10 * kmax, tag + " y translation in null space");
            check(norm_inf(K.multiply(rot)) <= 1e-10 * kmax * norm_inf(rot), tag + " rotation in null space");

            for (const OuterBc bc : {OuterBc::Dirichlet, OuterBc::Robin}) {
                const StiffnessSystem sys = assemble(*mesh, params, bc);
                bool spd = true;
                try {
                    SkylineCholesky chol(sys.reduced());
                } catch (const Error&) {
                    spd = false;
                }
                check(spd, tag + (bc == OuterBc::Robin ? " Robin" : " Dirichlet") + " SPD");
            }

            std::vector<ForceModel> models;
            if (hole)
                models = {HoleNeumann{}};
            else
                models = {PointForces{}, ContinuousImmersed{cfg.quadrature_order}, SmoothedGaussian{cfg.epsilon, 0}};
            for (const ForceModel& model : models) {
                const LoadVector f = build_load(*mesh, model, constant_pressure(params.P));
                const Vec2 total = total_force(f);
                const double scale = norm_inf(f);
                check(std::abs(total.x) <= 1e-10 * scale && std::abs(total.y) <= 1e-10 * scale,
                      tag + " " + describe(model) + " self-equilibrated");
                const double n1 = l2_norm(*mesh, f);
                std::vector<double> twice(f);
                for (double& v : twice) v *= -2.5;
                check(std::abs(l2_norm(*mesh, twice) - 2.5 * n1) <= 1e-12 * n1 &&
                          std::abs(h1_norm(*mesh, twice) - 2.5 * h1_norm(*mesh, f)) <= 1e-12 * h1_norm(*mesh, f),
                      tag + " " + describe(model) + " norm homogeneity");
            }
        }
    o.require(failures.empty(), std::to_string(checked - failures.size()) + "/" + std::to_string(checked) +
                                    " structural checks hold");
    for (const std::string& f : failures) o.detail += "; " + f + " [FAILED]";
    return o;
}

struct Criterion {
    std::function<Outcome()> run;
    double time_limit;  // seconds; 0 means none
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {criterion_1, 0.1},  {criterion_2, 0.0},   {criterion_3, 60.0}, {criterion_4, 300.0},
        {criterion_5, 120.0}, {criterion_6, 10.0}, {criterion_7, 10.0}, {criterion_8, 300.0},
        {criterion_9, 30.0}, {criterion_10, 0.0},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (only != 0 && only != id) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criteria[i].time_limit > 0.0) o.require(seconds < criteria[i].time_limit,
                                                    "runtime " + num(seconds) + " s < " + num(criteria[i].time_limit) + " s");
        std::printf("criterion %d: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
