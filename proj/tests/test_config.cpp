#include "cellforce/config.hpp"
#include "cellforce/error.hpp"
#include "cellforce/experiments.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <unistd.h>

using namespace cellforce;

namespace {

std::string temp_path(const std::string& name) {
    return ::testing::TempDir() + "cellforce_" + std::to_string(::getpid()) + "_" + name;
}

}  // namespace

TEST(Config, DefaultsAreTheReferenceConfiguration) {
    const ExperimentConfig c;
    EXPECT_EQ(c.material.E, 1.0);
    EXPECT_EQ(c.material.beta, 1e-5);
    EXPECT_EQ(c.material.nu, 0.48);
    EXPECT_EQ(c.material.P, 1.0);
    EXPECT_EQ(c.cell_side, 6.0);
    EXPECT_EQ(c.domain.width, 20.0);
    EXPECT_EQ(c.domain.height, 20.0);
    EXPECT_EQ(c.vicinity_width, 10.0);
    EXPECT_EQ(c.vicinity_height, 10.0);
    EXPECT_EQ(c.cell().center, (Vec2{10, 10}));
    EXPECT_EQ(c.seed, 42u);
    EXPECT_NO_THROW(c.validate());
    const auto [lo, hi] = c.vicinity();
    EXPECT_EQ(lo, (Vec2{5, 5}));
    EXPECT_EQ(hi, (Vec2{15, 15}));
}

TEST(Config, SetParsesEveryKeyKind) {
    ExperimentConfig c;
    c.set("material.beta", "1e-3");
    c.set("model.type", "smoothed");
    c.set("model.epsilon", "0.25");
    c.set("sweep.betas", "1e-1, 1e-2");
    c.set("boundary.outer", "robin");
    c.set("solver.method", "cholesky");
    c.set("output.dump_mesh", "true");
    c.set_assignment("discretization.h=0.25");
    EXPECT_EQ(c.material.beta, 1e-3);
    EXPECT_EQ(c.betas, (std::vector<double>{0.1, 0.01}));
    EXPECT_EQ(c.outer_bc, OuterBc::Robin);
    EXPECT_EQ(c.solver.method, SolverMethod::Cholesky);
    EXPECT_TRUE(c.dump_mesh);
    EXPECT_EQ(c.h, 0.25);
    ASSERT_TRUE(std::holds_alternative<SmoothedGaussian>(c.force_model()));
    EXPECT_EQ(std::get<SmoothedGaussian>(c.force_model()).epsilon, 0.25);
}

TEST(Config, UnknownKeyNamesTheKey) {
    ExperimentConfig c;
    try {
        c.set("material.youngs", "2");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
        EXPECT_NE(std::string(e.what()).find("material.youngs"), std::string::npos);
    }
}

TEST(Config, MalformedValuesAreRejected) {
    ExperimentConfig c;
    EXPECT_THROW(c.set("material.E", "stiff"), Error);
    EXPECT_THROW(c.set("model.segments", "-4"), Error);
    EXPECT_THROW(c.set("boundary.outer", "neumann"), Error);
    EXPECT_THROW(c.set("output.dump_rhs", "maybe"), Error);
    EXPECT_THROW(c.set_assignment("material.E"), Error);
    c.set("material.nu", "0.5");
    try {
        c.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
}

TEST(Config, EveryListedKeyIsSettable) {
    for (const std::string& key : config_keys()) {
        ExperimentConfig c;
        EXPECT_NO_THROW({
            try {
                c.set(key, "1");
            } catch (const Error& e) {
                // keys with enumerated values reject "1" but must still be recognised
                EXPECT_EQ(std::string(e.what()).find("unknown configuration key"), std::string::npos) << key;
            }
        });
    }
}

TEST(Config, LoadsIniFile) {
    const std::string path = temp_path("config.ini");
    {
        std::ofstream os(path);
        os << "[material]\nbeta = 1e-4\nkappa = 2\n\n[discretization]\nh = 1\n[model]\ntype = hole\n";
    }
    ExperimentConfig c;
    c.load_file(path);
    EXPECT_EQ(c.material.beta, 1e-4);
    EXPECT_EQ(c.material.kappa, 2.0);
    EXPECT_EQ(c.h, 1.0);
    EXPECT_TRUE(std::holds_alternative<HoleNeumann>(c.force_model()));
    std::remove(path.c_str());

    try {
        c.load_file(temp_path("missing.ini"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}

TEST(Config, UnknownPresetIsConfigError) {
    try {
        run_preset("table-4", ExperimentConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
    }
}

TEST(Config, PresetsAreDeterministic) {
    ExperimentConfig c;
    c.h = 1.0;
    c.coarse_h = 1.0;
    for (const std::string preset : {"compare-approaches", "convergence-table", "verify-1d", "momentum-check"}) {
        const ExperimentResult a = run_preset(preset, c);
        const ExperimentResult b = run_preset(preset, c);
        EXPECT_FALSE(a.csv.empty()) << preset;
        EXPECT_EQ(a.csv, b.csv) << preset;
    }
}

TEST(Config, CsvIsWrittenWhenRequested) {
    ExperimentConfig c;
    c.csv_path = temp_path("out.csv");
    const ExperimentResult r = run_preset("verify-1d", c);
    std::ifstream is(c.csv_path);
    const std::string contents((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    EXPECT_EQ(contents, r.csv);
    std::remove(c.csv_path.c_str());
}
