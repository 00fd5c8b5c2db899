#include "cellforce/cellforce.h"

#include "cellforce/analysis.hpp"
#include "cellforce/config.hpp"
#include "cellforce/experiments.hpp"
#include "cellforce/forces.hpp"
#include "cellforce/mesh.hpp"
#include "cellforce/verify1d.hpp"

#include <algorithm>
#include <fstream>
#include <new>
#include <string>

struct cf_config {
    cellforce::ExperimentConfig config;
};

struct cf_result {
    cellforce::ExperimentResult result;
    std::string summary;
    std::string lookup;
};

struct cf_mesh {
    cellforce::Mesh mesh;
};

namespace {

thread_local std::string last_error;

cf_status status_of(cellforce::ErrorKind kind) {
    using cellforce::ErrorKind;
    switch (kind) {
        case ErrorKind::Config: return CF_ERR_CONFIG;
        case ErrorKind::Geometry: return CF_ERR_GEOMETRY;
        case ErrorKind::Location: return CF_ERR_LOCATION;
        case ErrorKind::Assembly: return CF_ERR_ASSEMBLY;
        case ErrorKind::Solver: return CF_ERR_SOLVER;
        case ErrorKind::SpdViolation: return CF_ERR_SPD_VIOLATION;
        case ErrorKind::Domain: return CF_ERR_DOMAIN;
        case ErrorKind::Io: return CF_ERR_IO;
    }
    return CF_ERR_INTERNAL;
}

template <class F>
cf_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return CF_OK;
    } catch (const cellforce::Error& e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return CF_ERR_INTERNAL;
}

cf_status invalid(const char* what) {
    last_error = what;
    return CF_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "1.0.0"; }

const char* cf_status_string(cf_status status) {
    switch (status) {
        case CF_OK: return "ok";
        case CF_ERR_CONFIG: return "configuration error";
        case CF_ERR_GEOMETRY: return "geometry error";
        case CF_ERR_LOCATION: return "location error";
        case CF_ERR_ASSEMBLY: return "assembly error";
        case CF_ERR_SOLVER: return "solver error";
        case CF_ERR_SPD_VIOLATION: return "SPD violation";
        case CF_ERR_DOMAIN: return "domain error";
        case CF_ERR_IO: return "I/O error";
        case CF_ERR_INVALID_ARGUMENT: return "invalid argument";
        case CF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cf_last_error(void) { return last_error.c_str(); }

cf_status cf_config_create(cf_config** out) {
    if (!out) return invalid("cf_config_create: out is NULL");
    return guarded([&] { *out = new cf_config{}; });
}

void cf_config_destroy(cf_config* config) { delete config; }

cf_status cf_config_load_file(cf_config* config, const char* path) {
    if (!config || !path) return invalid("cf_config_load_file: NULL argument");
    return guarded([&] { config->config.load_file(path); });
}

cf_status cf_config_set(cf_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return invalid("cf_config_set: NULL argument");
    return guarded([&] { config->config.set(key, value); });
}

size_t cf_preset_count(void) { return cellforce::preset_names().size(); }

const char* cf_preset_name(size_t index) {
    const auto& names = cellforce::preset_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

cf_status cf_run(const char* preset, const cf_config* config, cf_result** out) {
    if (!preset || !out) return invalid("cf_run: NULL argument");
    return guarded([&] {
        const cellforce::ExperimentConfig defaults;
        auto* r = new cf_result{};
        try {
            r->result = cellforce::run_preset(preset, config ? config->config : defaults);
        } catch (...) {
            delete r;
            throw;
        }
        r->summary = r->result.summary_text();
        *out = r;
    });
}

void cf_result_destroy(cf_result* result) { delete result; }

int cf_result_ok(const cf_result* result) { return result && result->result.ok() ? 1 : 0; }

const char* cf_result_summary(const cf_result* result) { return result ? result->summary.c_str() : ""; }

const char* cf_result_csv(const cf_result* result) { return result ? result->result.csv.c_str() : ""; }

const char* cf_result_get(const cf_result* result, const char* key) {
    if (!result || !key) return nullptr;
    for (const auto& [k, v] : result->result.summary)
        if (k == key) return v.c_str();
    return nullptr;
}

size_t cf_result_warning_count(const cf_result* result) { return result ? result->result.warnings.size() : 0; }

const char* cf_result_warning(const cf_result* result, size_t index) {
    if (!result || index >= result->result.warnings.size()) return nullptr;
    return result->result.warnings[index].c_str();
}

cf_status cf_mesh_generate(double width, double height, double h, double cx, double cy, double cell_side,
                           int exclude_cell, cf_mesh** out) {
    if (!out) return invalid("cf_mesh_generate: out is NULL");
    return guarded([&] {
        *out = new cf_mesh{cellforce::generate_mesh({width, height}, h, cellforce::CellSquare{{cx, cy}, cell_side},
                                                    exclude_cell != 0)};
    });
}

cf_status cf_mesh_refine(const cf_mesh* mesh, cf_mesh** out) {
    if (!mesh || !out) return invalid("cf_mesh_refine: NULL argument");
    return guarded([&] { *out = new cf_mesh{cellforce::refine(mesh->mesh)}; });
}

void cf_mesh_destroy(cf_mesh* mesh) { delete mesh; }

size_t cf_mesh_num_nodes(const cf_mesh* mesh) { return mesh ? mesh->mesh.num_nodes() : 0; }

size_t cf_mesh_num_triangles(const cf_mesh* mesh) { return mesh ? mesh->mesh.num_triangles() : 0; }

size_t cf_mesh_num_cell_triangles(const cf_mesh* mesh) {
    if (!mesh) return 0;
    const auto& r = mesh->mesh.regions();
    return static_cast<size_t>(std::count(r.begin(), r.end(), cellforce::Region::CellInterior));
}

cf_status cf_mesh_locate(const cf_mesh* mesh, double x, double y, size_t* triangle, double bary[3]) {
    if (!mesh || !triangle) return invalid("cf_mesh_locate: NULL argument");
    return guarded([&] {
        const auto loc = mesh->mesh.locate({x, y});
        *triangle = loc.triangle;
        if (bary) std::copy(loc.barycentric.begin(), loc.barycentric.end(), bary);
    });
}

cf_status cf_mesh_write(const cf_mesh* mesh, const char* path) {
    if (!mesh || !path) return invalid("cf_mesh_write: NULL argument");
    return guarded([&] {
        std::ofstream os(path);
        if (!os) cellforce::fail(cellforce::ErrorKind::Io, std::string("cannot write '") + path + "'");
        mesh->mesh.write_text(os);
    });
}

cf_status cf_estimate_order(double a, double b, double c, double* order) {
    if (!order) return invalid("cf_estimate_order: order is NULL");
    return guarded([&] { *order = cellforce::estimate_order(a, b, c); });
}

cf_status cf_gaussian_delta(const double* x, const double* x_prime, int n, double eps, double* value) {
    if (!x || !x_prime || !value) return invalid("cf_gaussian_delta: NULL argument");
    if (n < 1 || n > 3) return invalid("cf_gaussian_delta: n must be 1, 2 or 3");
    return guarded([&] {
        const auto d = static_cast<std::size_t>(n);
        *value = cellforce::gaussian_delta(std::span<const double>(x, d), std::span<const double>(x_prime, d), eps);
    });
}

cf_status cf_verify1d(double length, double center, double cell, size_t nodes, int align, double* max_error) {
    if (!max_error) return invalid("cf_verify1d: max_error is NULL");
    return guarded([&] {
        const cellforce::Cell1D c{length, center, cell};
        *max_error = cellforce::max_nodal_error(c, cellforce::solve_1d(c, nodes, align != 0));
    });
}

}  // extern "C"
