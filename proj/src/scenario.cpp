#include "hydresim/scenario.hpp"

#include "hydresim/errors.hpp"
#include "hydresim/units.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

namespace hydresim {

double PressureSchedule::at(double t, double before_first) const
{
    double value = before_first;
    for (size_t i = 0; i < times.size(); ++i) {
        if (t >= times[i] - 1e-12)
            value = pressures[i];
        else
            break;
    }
    return value;
}

void PressureSchedule::validate() const
{
    if (times.size() != pressures.size())
        throw ConfigError("bc.flow.schedule_times and bc.flow.schedule_pressures differ in length");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ConfigError("bc.flow.schedule_times must be strictly increasing");
    for (double p : pressures)
        if (!(p > 0.0)) throw ConfigError("schedule pressures must be positive");
}

double effective_stress_controller(double probe_P_g, double target_delta)
{
    return probe_P_g + target_delta;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& v, const std::string& key)
{
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

Side side_from_string(const std::string& s, const std::string& key)
{
    if (s == "top") return Side::top;
    if (s == "bottom") return Side::bottom;
    if (s == "outer") return Side::outer;
    throw ConfigError("key '" + key + "': unknown side '" + s + "'");
}

std::string side_to_string(Side s)
{
    switch (s) {
    case Side::top: return "top";
    case Side::bottom: return "bottom";
    case Side::outer: return "outer";
    default: return "interior";
    }
}

std::string fmt_num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct KeyDef {
    std::string key;
    bool required = false;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

std::vector<KeyDef> build_registry()
{
    std::vector<KeyDef> defs;

    auto qty = [&](const std::string& key, std::function<double&(ScenarioConfig&)> ref,
                   const std::string& unit_hint = "", bool required = false) {
        defs.push_back(
            {key, required,
             [ref, key](ScenarioConfig& c, const std::string& v) {
                 try {
                     ref(c) = units::parse_quantity(v);
                 } catch (const ConfigError& e) {
                     throw ConfigError("key '" + key + "': " + e.what());
                 }
             },
             [ref, unit_hint](const ScenarioConfig& c) {
                 return units::format_quantity(ref(const_cast<ScenarioConfig&>(c)), unit_hint);
             }});
    };
    auto integer = [&](const std::string& key, std::function<int&(ScenarioConfig&)> ref,
                       bool required = false) {
        defs.push_back({key, required,
                        [ref, key](ScenarioConfig& c, const std::string& v) {
                            try {
                                ref(c) = std::stoi(v);
                            } catch (...) {
                                throw ConfigError("key '" + key + "': expected integer, got '" + v +
                                                  "'");
                            }
                        },
                        [ref](const ScenarioConfig& c) {
                            return std::to_string(ref(const_cast<ScenarioConfig&>(c)));
                        }});
    };
    auto boolean = [&](const std::string& key, std::function<bool&(ScenarioConfig&)> ref) {
        defs.push_back({key, false,
                        [ref, key](ScenarioConfig& c, const std::string& v) {
                            ref(c) = parse_bool(v, key);
                        },
                        [ref](const ScenarioConfig& c) {
                            return ref(const_cast<ScenarioConfig&>(c)) ? std::string("true")
                                                                       : std::string("false");
                        }});
    };
    auto qty_list = [&](const std::string& key,
                        std::function<std::vector<double>&(ScenarioConfig&)> ref,
                        const std::string& unit_hint = "") {
        defs.push_back({key, false,
                        [ref, key](ScenarioConfig& c, const std::string& v) {
                            auto& vec = ref(c);
                            vec.clear();
                            for (const auto& item : split_list(v)) {
                                try {
                                    vec.push_back(units::parse_quantity(item));
                                } catch (const ConfigError& e) {
                                    throw ConfigError("key '" + key + "': " + e.what());
                                }
                            }
                        },
                        [ref, unit_hint](const ScenarioConfig& c) {
                            const auto& vec = ref(const_cast<ScenarioConfig&>(c));
                            std::string out;
                            for (size_t i = 0; i < vec.size(); ++i) {
                                if (i) out += ", ";
                                out += units::format_quantity(vec[i], unit_hint);
                            }
                            return out;
                        }});
    };

    // scenario
    defs.push_back({"scenario.regime", true,
                    [](ScenarioConfig& c, const std::string& v) { c.regime = regime_from_string(v); },
                    [](const ScenarioConfig& c) { return to_string(c.regime); }});

    // grid
    integer("grid.nz", [](ScenarioConfig& c) -> int& { return c.nz; }, true);
    integer("grid.nr", [](ScenarioConfig& c) -> int& { return c.nr; }, true);
    qty("grid.height", [](ScenarioConfig& c) -> double& { return c.height; }, "mm", true);
    qty("grid.radius", [](ScenarioConfig& c) -> double& { return c.radius; }, "mm", true);

    // initial fields
    qty("initial.P_g", [](ScenarioConfig& c) -> double& { return c.P_g0; }, "MPa", true);
    qty("initial.S_w", [](ScenarioConfig& c) -> double& { return c.S_w0; }, "", true);
    qty("initial.S_h", [](ScenarioConfig& c) -> double& { return c.S_h0; }, "");
    qty("initial.T", [](ScenarioConfig& c) -> double& { return c.T0; }, "K", true);
    qty("initial.phi", [](ScenarioConfig& c) -> double& { return c.phi0; }, "", true);
    qty("salinity", [](ScenarioConfig& c) -> double& { return c.salinity; }, "");

    // time
    qty("time.t_end", [](ScenarioConfig& c) -> double& { return c.t_end; }, "s", true);
    qty("time.dt_max", [](ScenarioConfig& c) -> double& { return c.dt_max; }, "s");
    qty("time.dt_min", [](ScenarioConfig& c) -> double& { return c.dt_min; }, "s");
    qty("time.dt_init", [](ScenarioConfig& c) -> double& { return c.dt_init; }, "s");

    // mechanical control
    defs.push_back({"bc.mech.mode", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        if (v == "effective_stress_follower")
                            c.mech_mode = MechControlMode::effective_stress_follower;
                        else if (v == "constant_total_stress")
                            c.mech_mode = MechControlMode::constant_total_stress;
                        else
                            throw ConfigError("key 'bc.mech.mode': unknown mode '" + v + "'");
                    },
                    [](const ScenarioConfig& c) {
                        return c.mech_mode == MechControlMode::effective_stress_follower
                                   ? "effective_stress_follower"
                                   : "constant_total_stress";
                    }});
    qty("bc.mech.delta_sigma", [](ScenarioConfig& c) -> double& { return c.delta_sigma; }, "MPa");
    qty("bc.mech.total_stress", [](ScenarioConfig& c) -> double& { return c.total_stress; }, "MPa");
    defs.push_back({"bc.mech.probe", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        c.mech_probe = side_from_string(v, "bc.mech.probe");
                    },
                    [](const ScenarioConfig& c) { return side_to_string(c.mech_probe); }});

    // flow boundary
    defs.push_back({"bc.flow.outlet", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        if (v == "none")
                            c.outlet.reset();
                        else
                            c.outlet = side_from_string(v, "bc.flow.outlet");
                    },
                    [](const ScenarioConfig& c) {
                        return c.outlet ? side_to_string(*c.outlet) : std::string("none");
                    }});
    qty("bc.flow.S_w_inflow", [](ScenarioConfig& c) -> double& { return c.outlet_S_w_inflow; }, "");
    qty_list("bc.flow.schedule_times",
             [](ScenarioConfig& c) -> std::vector<double>& { return c.schedule.times; }, "s");
    qty_list("bc.flow.schedule_pressures",
             [](ScenarioConfig& c) -> std::vector<double>& { return c.schedule.pressures; }, "MPa");

    // thermal boundary
    defs.push_back({"bc.thermal.mode", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        if (v == "dirichlet")
                            c.thermal_dirichlet = true;
                        else if (v == "adiabatic")
                            c.thermal_dirichlet = false;
                        else
                            throw ConfigError("key 'bc.thermal.mode': unknown mode '" + v + "'");
                    },
                    [](const ScenarioConfig& c) {
                        return c.thermal_dirichlet ? "dirichlet" : "adiabatic";
                    }});
    qty("bc.thermal.T", [](ScenarioConfig& c) -> double& { return c.T_boundary; }, "K");

    // physics switches
    boolean("physics.gravity", [](ScenarioConfig& c) -> bool& { return c.gravity; });
    boolean("physics.conduction", [](ScenarioConfig& c) -> bool& { return c.conduction; });
    qty("physics.diffusion_D", [](ScenarioConfig& c) -> double& { return c.diffusion_D; }, "");

    // solver
    qty("solver.newton_abs_tol", [](ScenarioConfig& c) -> double& { return c.newton.abs_tol; }, "");
    qty("solver.newton_rel_tol", [](ScenarioConfig& c) -> double& { return c.newton.rel_tol; }, "");
    integer("solver.newton_max_iter", [](ScenarioConfig& c) -> int& { return c.newton.max_iter; });
    qty("solver.outer_tol_phi",
        [](ScenarioConfig& c) -> double& { return c.coupling.outer_tol_phi; }, "");
    qty("solver.outer_tol_epsv",
        [](ScenarioConfig& c) -> double& { return c.coupling.outer_tol_epsv; }, "");
    integer("solver.max_outer", [](ScenarioConfig& c) -> int& { return c.coupling.max_outer; });
    qty("solver.omega", [](ScenarioConfig& c) -> double& { return c.coupling.omega; }, "");
    boolean("solver.mech_first", [](ScenarioConfig& c) -> bool& { return c.coupling.mech_first; });

    // output plan
    qty("output.series_interval", [](ScenarioConfig& c) -> double& { return c.series_interval; },
        "s");
    qty_list("output.snapshot_times",
             [](ScenarioConfig& c) -> std::vector<double>& { return c.snapshot_times; }, "s");
    defs.push_back({"output.plots", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        if (v == "none")
                            c.plots = PlotBundle::none;
                        else if (v == "auto")
                            c.plots = PlotBundle::automatic;
                        else if (v == "fig7")
                            c.plots = PlotBundle::fig7;
                        else if (v == "fig9")
                            c.plots = PlotBundle::fig9;
                        else
                            throw ConfigError("key 'output.plots': unknown bundle '" + v + "'");
                    },
                    [](const ScenarioConfig& c) {
                        switch (c.plots) {
                        case PlotBundle::none: return "none";
                        case PlotBundle::fig7: return "fig7";
                        case PlotBundle::fig9: return "fig9";
                        default: return "auto";
                        }
                    }});

    // material constants (flat Table-2 style names)
    auto mat = [&](const std::string& key, std::function<double&(MaterialDB&)> ref,
                   const std::string& unit_hint = "") {
        qty(key,
            [ref](ScenarioConfig& c) -> double& { return ref(c.materials); }, unit_hint);
    };
    mat("rho_h", [](MaterialDB& m) -> double& { return m.rho_h; }, "kg/m3");
    mat("rho_s", [](MaterialDB& m) -> double& { return m.rho_s; }, "kg/m3");
    mat("rho_w_liquid", [](MaterialDB& m) -> double& { return m.rho_w_liquid; }, "kg/m3");
    mat("k_c_h", [](MaterialDB& m) -> double& { return m.k_c_h; }, "W/m/K");
    mat("k_c_s", [](MaterialDB& m) -> double& { return m.k_c_s; }, "W/m/K");
    mat("Cp_w", [](MaterialDB& m) -> double& { return m.Cp_w; }, "J/kg/K");
    mat("Cv_h", [](MaterialDB& m) -> double& { return m.Cv_h; }, "J/kg/K");
    mat("Cv_s", [](MaterialDB& m) -> double& { return m.Cv_s; }, "J/kg/K");
    mat("cp_g_residual_factor", [](MaterialDB& m) -> double& { return m.cp_g_residual_factor; });
    mat("lambda_BC", [](MaterialDB& m) -> double& { return m.lambda_BC; });
    mat("P_entry", [](MaterialDB& m) -> double& { return m.P_entry; }, "kPa");
    mat("S_wr", [](MaterialDB& m) -> double& { return m.S_wr; });
    mat("K_0", [](MaterialDB& m) -> double& { return m.K_0; }, "m2");
    mat("phi_0", [](MaterialDB& m) -> double& { return m.phi_0; });
    mat("perm_exponent_n_h", [](MaterialDB& m) -> double& { return m.perm_exponent_n_h; });
    defs.push_back({"pc_scaling_on", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        c.materials.pc_scaling_on = parse_bool(v, "pc_scaling_on");
                    },
                    [](const ScenarioConfig& c) {
                        return c.materials.pc_scaling_on ? "true" : "false";
                    }});
    mat("pc_scaling_exponent", [](MaterialDB& m) -> double& { return m.pc_scaling_exponent; });
    mat("pc_swe_min", [](MaterialDB& m) -> double& { return m.pc_swe_min; });
    mat("pc_cap_factor", [](MaterialDB& m) -> double& { return m.pc_cap_factor; });
    mat("A_1", [](MaterialDB& m) -> double& { return m.A_1; });
    mat("A_2", [](MaterialDB& m) -> double& { return m.A_2; });
    mat("A_3", [](MaterialDB& m) -> double& { return m.A_3; }, "K");
    mat("P_e_scale", [](MaterialDB& m) -> double& { return m.P_e_scale; }, "Pa");
    mat("salinity_slope", [](MaterialDB& m) -> double& { return m.salinity_slope; });
    mat("B_1", [](MaterialDB& m) -> double& { return m.B_1; });
    mat("B_2", [](MaterialDB& m) -> double& { return m.B_2; });
    mat("N_hyd", [](MaterialDB& m) -> double& { return m.N_hyd; });
    mat("M_CH4", [](MaterialDB& m) -> double& { return m.M_CH4; }, "kg");
    mat("M_H2O", [](MaterialDB& m) -> double& { return m.M_H2O; }, "kg");
    mat("alpha_biot", [](MaterialDB& m) -> double& { return m.alpha_biot; });
    mat("nu_sh", [](MaterialDB& m) -> double& { return m.nu_sh; });
    mat("E_s_formation", [](MaterialDB& m) -> double& { return m.formation_law.E_s; }, "MPa");
    mat("E_h_formation", [](MaterialDB& m) -> double& { return m.formation_law.E_h; }, "MPa");
    mat("c_formation", [](MaterialDB& m) -> double& { return m.formation_law.c; });
    mat("E_s_dissociation", [](MaterialDB& m) -> double& { return m.dissociation_law.E_s; }, "MPa");
    mat("E_h_dissociation", [](MaterialDB& m) -> double& { return m.dissociation_law.E_h; }, "MPa");
    mat("c_dissociation", [](MaterialDB& m) -> double& { return m.dissociation_law.c; });
    mat("henry_ref", [](MaterialDB& m) -> double& { return m.henry_ref; }, "Pa");
    mat("henry_T_ref", [](MaterialDB& m) -> double& { return m.henry_T_ref; }, "K");
    mat("henry_C", [](MaterialDB& m) -> double& { return m.henry_C; }, "K");
    defs.push_back({"dissolution_on", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        c.materials.dissolution_on = parse_bool(v, "dissolution_on");
                    },
                    [](const ScenarioConfig& c) {
                        return c.materials.dissolution_on ? "true" : "false";
                    }});
    defs.push_back({"vapor_on", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        c.materials.vapor_on = parse_bool(v, "vapor_on");
                    },
                    [](const ScenarioConfig& c) { return c.materials.vapor_on ? "true" : "false"; }});
    mat("T_ref_energy", [](MaterialDB& m) -> double& { return m.T_ref_energy; }, "K");

    // kinetics
    qty("k_reac_formation",
        [](ScenarioConfig& c) -> double& { return c.kinetics.k_reac_formation; }, "mol/m2/Pa/s");
    qty("k_reac_dissociation",
        [](ScenarioConfig& c) -> double& { return c.kinetics.k_reac_dissociation; },
        "mol/m2/Pa/s");
    qty("gamma_surface", [](ScenarioConfig& c) -> double& { return c.kinetics.gamma_surface; },
        "m2/m3");
    defs.push_back({"surface_area_model", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        c.kinetics.surface_model = surface_area_model_from_string(v);
                    },
                    [](const ScenarioConfig& c) { return to_string(c.kinetics.surface_model); }});
    defs.push_back({"kinetics_enabled", false,
                    [](ScenarioConfig& c, const std::string& v) {
                        c.kinetics.enabled = parse_bool(v, "kinetics_enabled");
                    },
                    [](const ScenarioConfig& c) { return c.kinetics.enabled ? "true" : "false"; }});

    return defs;
}

const std::vector<KeyDef>& registry()
{
    static const std::vector<KeyDef> defs = build_registry();
    return defs;
}

const KeyDef* find_key(const std::string& key)
{
    for (const auto& d : registry())
        if (d.key == key) return &d;
    return nullptr;
}

} // namespace

ScenarioConfig ScenarioConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");

    ScenarioConfig cfg;
    std::map<std::string, bool> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const KeyDef* def = find_key(key);
        if (!def)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        try {
            def->set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        seen[key] = true;
    }
    for (const auto& d : registry())
        if (d.required && !seen.count(d.key))
            throw ConfigError(path + ": missing required key '" + d.key + "'");
    cfg.validate();
    return cfg;
}

void ScenarioConfig::save(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    for (const auto& d : registry()) out << d.key << " = " << d.get(*this) << "\n";
}

void ScenarioConfig::apply_override(const std::string& key, const std::string& value)
{
    const KeyDef* def = find_key(key);
    if (!def) throw ConfigError("unknown key '" + key + "'");
    def->set(*this, value);
}

void ScenarioConfig::validate() const
{
    if (nz < 1 || nr < 1) throw ConfigError("grid.nz and grid.nr must be at least 1");
    if (!(height > 0) || !(radius > 0)) throw ConfigError("grid dimensions must be positive");
    if (!(P_g0 > 0) || !(T0 > 0)) throw ConfigError("initial.P_g and initial.T must be positive");
    if (S_w0 < 0 || S_h0 < 0 || S_w0 + S_h0 > 1.0)
        throw ConfigError("initial saturations must satisfy S_w, S_h >= 0 and S_w + S_h <= 1");
    if (!(phi0 > 0) || !(phi0 < 1)) throw ConfigError("initial.phi must lie in (0,1)");
    if (salinity < 0 || salinity > 0.1) throw ConfigError("salinity must lie in [0, 0.1]");
    if (!(t_end > 0)) throw ConfigError("time.t_end must be positive");
    if (!(dt_min > 0) || dt_min > dt_max) throw ConfigError("need 0 < time.dt_min <= time.dt_max");
    schedule.validate();
    if (outlet && schedule.empty())
        throw ConfigError("an outlet needs bc.flow.schedule_times/pressures");
    materials.validate();
    kinetics.validate();
}

namespace {

struct ProgressLog {
    bool quiet;
    double t_end;
    double last_logged = -1e30;
    void tick(const SimulationState& s)
    {
        if (quiet || s.time - last_logged < t_end / 20.0) return;
        last_logged = s.time;
        std::fprintf(stderr, "  t = %10.0f s (%5.1f%%)\n", s.time, 100.0 * s.time / t_end);
    }
};

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir, bool quiet)
{
    namespace fs = std::filesystem;
    cfg.validate();

    const AxiGrid grid(cfg.nz, cfg.nr, cfg.height, cfg.radius);
    TransportOptions topts;
    topts.gravity = cfg.gravity;
    topts.conduction = cfg.conduction;
    topts.diffusion_D = cfg.diffusion_D;
    topts.newton = cfg.newton;

    CoupledStepper stepper(grid, cfg.materials, cfg.kinetics, topts, cfg.coupling, cfg.regime);
    stepper.transport().set_salinity(cfg.salinity);

    SimulationState state;
    state.fields = PrimaryState::uniform(grid, cfg.P_g0, cfg.S_w0, cfg.S_h0, cfg.T0, cfg.phi0);

    const Side outlet_side = cfg.outlet.value_or(Side::top);

    auto make_bcs = [&](double t_next) {
        TransportBCs bcs;
        ThermalBC thermal;
        thermal.kind = cfg.thermal_dirichlet ? ThermalBC::Kind::dirichlet : ThermalBC::Kind::adiabatic;
        thermal.T = cfg.T_boundary;
        bcs.bottom.thermal = bcs.top.thermal = bcs.outer.thermal = thermal;
        if (cfg.outlet) {
            FlowBC flow;
            flow.kind = FlowBC::Kind::dirichlet;
            flow.P_g = cfg.schedule.at(t_next, cfg.P_g0);
            flow.S_w_inflow = cfg.outlet_S_w_inflow;
            switch (*cfg.outlet) {
            case Side::top: bcs.top.flow = flow; break;
            case Side::bottom: bcs.bottom.flow = flow; break;
            default: bcs.outer.flow = flow; break;
            }
        }
        return bcs;
    };

    const int probe_cell = cfg.mech_probe == Side::bottom ? grid.cell_index(0, 0)
                                                          : grid.cell_index(grid.nz() - 1, 0);
    auto mech_loads = [&](const SimulationState& s) {
        MechLoads loads;
        loads.gravity = cfg.gravity;
        const double sigma =
            cfg.mech_mode == MechControlMode::effective_stress_follower
                ? effective_stress_controller(s.fields.P_g[probe_cell], cfg.delta_sigma)
                : cfg.total_stress;
        loads.sigma_top = sigma;
        loads.sigma_outer = sigma;
        return loads;
    };

    stepper.initialize(state, make_bcs(0.0), mech_loads(state));

    RunResult result;
    result.initial_hydrate_mol =
        state.inventory.hydrate / cfg.materials.molar_mass_hydrate();
    result.series.rows.push_back(sample_observables(stepper, state, outlet_side));

    const bool want_dir = !out_dir.empty();
    if (want_dir) fs::create_directories(out_dir);

    size_t next_snapshot = 0;
    std::vector<double> snap_times = cfg.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    while (want_dir && next_snapshot < snap_times.size() && snap_times[next_snapshot] <= 0.0) {
        write_vtk(out_dir + "/snapshot_0000000000s.vtk", grid, build_snapshot(stepper, state));
        ++next_snapshot;
    }
    double last_series_t = 0.0;
    ProgressLog progress{quiet, cfg.t_end};

    TimeLoopCallbacks callbacks;
    callbacks.mech_loads = mech_loads;
    callbacks.flow_bcs = make_bcs;
    callbacks.on_step = [&](const SimulationState& s, const StepReport& rep) {
        result.steps.push_back(rep);

        // activation and sub-cooling trackers
        double t_min = s.fields.T[0];
        for (double T : s.fields.T) t_min = std::min(t_min, T);
        result.max_subcooling = std::max(result.max_subcooling, cfg.T0 - t_min);
        if (result.first_dissociation_time < 0.0) {
            const Vector x = TransportSystem::pack(s.fields);
            for (int c = 0; c < grid.num_cells(); ++c) {
                if (stepper.transport().cell_kinetics(x, c).n_dot > 1e-30) {
                    result.first_dissociation_time = s.time;
                    break;
                }
            }
        }

        if (cfg.series_interval <= 0.0 || s.time - last_series_t >= cfg.series_interval * (1 - 1e-9) ||
            s.time >= cfg.t_end * (1 - 1e-12)) {
            result.series.rows.push_back(sample_observables(stepper, s, outlet_side));
            last_series_t = s.time;
        }
        if (want_dir) {
            while (next_snapshot < snap_times.size() && s.time >= snap_times[next_snapshot] - 1e-9) {
                char name[64];
                std::snprintf(name, sizeof(name), "snapshot_%010.0fs.vtk",
                              snap_times[next_snapshot]);
                write_vtk(out_dir + "/" + name, grid, build_snapshot(stepper, s));
                ++next_snapshot;
            }
        }
        progress.tick(s);
    };

    TimeLoopConfig loop{cfg.t_end, cfg.dt_max, cfg.dt_min, cfg.dt_init};

    auto write_all = [&]() {
        if (!want_dir) return;
        result.series.validate();
        write_timeseries_csv(out_dir + "/timeseries.csv", result.series);
        write_steps_csv(out_dir + "/steps.csv", result.steps);
        const PlotBundle plots = cfg.plots == PlotBundle::automatic
                                     ? (cfg.regime == Regime::formation ? PlotBundle::fig7
                                                                        : PlotBundle::fig9)
                                     : cfg.plots;
        if (plots == PlotBundle::fig7) write_plot_bundle(out_dir, Regime::formation, result.series);
        if (plots == PlotBundle::fig9)
            write_plot_bundle(out_dir, Regime::dissociation, result.series);

        std::ofstream sum(out_dir + "/run_summary.txt");
        sum << "regime: " << to_string(cfg.regime) << "\n"
            << "t_final_s: " << state.time << "\n"
            << "steps_accepted: " << result.stats.steps_accepted << "\n"
            << "steps_rejected: " << result.stats.steps_rejected << "\n"
            << "newton_iterations: " << result.stats.newton_iterations << "\n"
            << "outer_iterations: " << result.stats.outer_iterations << "\n"
            << "wall_seconds: " << result.stats.wall_seconds << "\n"
            << "produced_ch4_mol: " << state.produced_ch4_kg / cfg.materials.M_CH4 << "\n"
            << "hydrate_mol: " << state.inventory.hydrate / cfg.materials.molar_mass_hydrate()
            << "\n"
            << "max_subcooling_K: " << result.max_subcooling << "\n"
            << "first_dissociation_time_s: " << result.first_dissociation_time << "\n";
    };

    try {
        result.stats = run_time_loop(stepper, state, loop, callbacks);
    } catch (const StepAbort&) {
        // carry the last good state out with a diagnostic snapshot
        if (want_dir) write_vtk(out_dir + "/abort_state.vtk", grid, build_snapshot(stepper, state));
        write_all();
        throw;
    }

    result.final_state = state;
    write_all();
    return result;
}

} // namespace hydresim
