#include "hydresim/errors.hpp"
#include "hydresim/output.hpp"
#include "hydresim/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace hydresim;

int cmd_run(const std::string& config_path, const std::string& out_dir, bool quiet)
{
    const ScenarioConfig cfg = ScenarioConfig::load(config_path);
    const RunResult result = run_scenario(cfg, out_dir, quiet);
    if (!quiet)
        std::fprintf(stderr, "run finished: %d steps, %.1f s wall, outputs in %s\n",
                     result.stats.steps_accepted, result.stats.wall_seconds, out_dir.c_str());
    return 0;
}

int cmd_validate(const std::string& config_path)
{
    ScenarioConfig::load(config_path);
    std::printf("%s: OK\n", config_path.c_str());
    return 0;
}

int cmd_props(double T, double P, double salinity)
{
    MaterialDB db;
    std::printf("properties at T = %.4f K, P = %.6g Pa\n", T, P);
    std::printf("  k_c_g   = %.6g W/m/K\n", props::thermal_conductivity_gas(T));
    std::printf("  k_c_w   = %.6g W/m/K\n", props::thermal_conductivity_water(T));
    std::printf("  k_c_h   = %.6g W/m/K\n", db.k_c_h);
    std::printf("  k_c_s   = %.6g W/m/K\n", db.k_c_s);
    std::printf("  Cp_g    = %.6g J/kg/K\n", props::heat_capacity_gas_cp(T, db));
    std::printf("  Cv_g    = %.6g J/kg/K\n", props::heat_capacity_gas_cv(T, db));
    std::printf("  Cp_w    = %.6g J/kg/K\n", db.Cp_w);
    std::printf("  Cv_w    = %.6g J/kg/K\n", props::heat_capacity_water_cv(db));
    std::printf("  Cv_h    = %.6g J/kg/K\n", db.Cv_h);
    std::printf("  Cv_s    = %.6g J/kg/K\n", db.Cv_s);
    std::printf("  mu_g    = %.6g Pa.s\n", props::viscosity_gas(T));
    std::printf("  mu_w    = %.6g Pa.s\n", props::viscosity_water(T));
    std::printf("  z       = %.6g\n", props::pr_z_factor(P, T, db));
    std::printf("  rho_g   = %.6g kg/m3\n", props::gas_density(P, T, db));
    std::printf("  rho_w_v = %.6g kg/m3\n", props::water_vapor_density(P, T));
    std::printf("  P_sat   = %.6g Pa\n", props::water_saturation_pressure(T));
    std::printf("  P_e     = %.6g Pa (salinity %.4g)\n",
                props::equilibrium_pressure(T, salinity, db), salinity);
    std::printf("  dH      = %.6g J/mol\n", props::heat_of_reaction(T, db));
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& out_dir, bool quiet)
{
    const auto eq = param.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--param expects key=v1,v2,... got '" + param + "'");
    const std::string key = param.substr(0, eq);
    std::vector<std::string> values;
    {
        std::string rest = param.substr(eq + 1);
        size_t pos = 0;
        while (pos != std::string::npos) {
            const auto comma = rest.find(',', pos);
            values.push_back(rest.substr(pos, comma == std::string::npos ? comma : comma - pos));
            pos = comma == std::string::npos ? comma : comma + 1;
        }
    }
    if (values.empty()) throw ConfigError("--param has no values");

    const ScenarioConfig base = ScenarioConfig::load(config_path);
    std::vector<TimeSeries> all_series;
    std::vector<std::string> labels;
    for (const auto& v : values) {
        ScenarioConfig cfg = base;
        cfg.apply_override(key, v);
        cfg.validate();
        const std::string sub = out_dir + "/" + key + "=" + v;
        if (!quiet) std::fprintf(stderr, "sweep: %s = %s\n", key.c_str(), v.c_str());
        const RunResult result = run_scenario(cfg, sub, quiet);
        all_series.push_back(result.series);
        labels.push_back(v);
    }
    std::filesystem::create_directories(out_dir);
    write_sweep_eps_v(out_dir + "/sweep_eps_v.csv", labels, all_series);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"coupled hydrate-bearing sediment simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = "out", param;
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "error|info|debug")->capture_default_str();

    auto* run = app.add_subcommand("run", "run a scenario");
    run->add_option("config", config_path, "scenario file")->required();
    run->add_option("--output-dir", out_dir, "output directory")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario file");
    validate->add_option("config", config_path, "scenario file")->required();

    double props_T = 275.15, props_P = 10e6, props_sal = 0.0;
    auto* props_cmd = app.add_subcommand("props", "print material property evaluations");
    props_cmd->add_option("T", props_T, "temperature, K")->required();
    props_cmd->add_option("P", props_P, "gas pressure, Pa")->required();
    props_cmd->add_option("--salinity", props_sal, "salt mass fraction");

    auto* sweep = app.add_subcommand("sweep", "run a one-parameter sweep");
    sweep->add_option("config", config_path, "scenario file")->required();
    sweep->add_option("--param", param, "key=v1,v2,...")->required();
    sweep->add_option("--output-dir", out_dir, "output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    const bool quiet = log_level == "error";

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, quiet);
        if (validate->parsed()) return cmd_validate(config_path);
        if (props_cmd->parsed()) return cmd_props(props_T, props_P, props_sal);
        if (sweep->parsed()) return cmd_sweep(config_path, param, out_dir, quiet);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver abort: %s\n", e.what());
        return 2;
    }
    return 0;
}
