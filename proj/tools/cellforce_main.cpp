// Command-line experiment runner built on the C interface.
#include "cellforce/cellforce.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

int report(cf_status status) {
    std::fprintf(stderr, "cellforce: %s: %s\n", cf_status_string(status), cf_last_error());
    return status == CF_ERR_CONFIG || status == CF_ERR_INVALID_ARGUMENT ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> presets;
    for (size_t i = 0; i < cf_preset_count(); ++i) presets.emplace_back(cf_preset_name(i));

    CLI::App app{"Finite-element experiments for cellular traction forces on an elastic substrate"};
    std::string preset, config_file;
    std::vector<std::string> assignments;
    bool dump_mesh = false, dump_matrix = false, dump_rhs = false;
    app.add_option("preset", preset, "experiment to run")->required()->check(CLI::IsMember(presets));
    app.add_option("--config", config_file, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", assignments, "override one setting, section.key=value (repeatable)");
    app.add_flag("--dump-mesh", dump_mesh, "write the mesh tables");
    app.add_flag("--dump-matrix", dump_matrix, "write the constrained stiffness matrix");
    app.add_flag("--dump-rhs", dump_rhs, "write the load vector");
    app.set_version_flag("--version", cf_version());
    CLI11_PARSE(app, argc, argv);

    cf_config* raw = nullptr;
    if (const cf_status s = cf_config_create(&raw); s != CF_OK) return report(s);
    const std::unique_ptr<cf_config, decltype(&cf_config_destroy)> config(raw, cf_config_destroy);

    if (!config_file.empty())
        if (const cf_status s = cf_config_load_file(config.get(), config_file.c_str()); s != CF_OK) return report(s);
    for (const std::string& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "cellforce: --set expects section.key=value, got '%s'\n", a.c_str());
            return 2;
        }
        const std::string key = a.substr(0, eq), value = a.substr(eq + 1);
        if (const cf_status s = cf_config_set(config.get(), key.c_str(), value.c_str()); s != CF_OK) return report(s);
    }
    const std::pair<bool, const char*> dumps[] = {
        {dump_mesh, "output.dump_mesh"}, {dump_matrix, "output.dump_matrix"}, {dump_rhs, "output.dump_rhs"}};
    for (const auto& [on, key] : dumps)
        if (on) cf_config_set(config.get(), key, "true");

    cf_result* result = nullptr;
    if (const cf_status s = cf_run(preset.c_str(), config.get(), &result); s != CF_OK) return report(s);
    std::fputs(cf_result_summary(result), stdout);
    const int ok = cf_result_ok(result);
    cf_result_destroy(result);
    return ok ? 0 : 1;
}
