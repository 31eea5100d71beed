#pragma once

#include "hydresim/coupling.hpp"
#include "hydresim/kinetics.hpp"
#include "hydresim/materials.hpp"
#include "hydresim/output.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hydresim {

enum class MechControlMode { effective_stress_follower, constant_total_stress };
enum class PlotBundle { none, automatic, fig7, fig9 };

/// Right-continuous step function for the back-pressure protocol.
struct PressureSchedule {
    std::vector<double> times;     ///< s, strictly increasing
    std::vector<double> pressures; ///< Pa

    bool empty() const { return times.empty(); }
    /// Value at time t; before the first entry the fallback applies.
    double at(double t, double before_first) const;
    void validate() const;

    bool operator==(const PressureSchedule&) const = default;
};

/// Complete description of one simulated period: grid, initial fields,
/// regime, material overrides, kinetics, boundary controllers, solver
/// settings and the output plan. Loads from / saves to a flat key = value
/// file with unit suffixes; unknown keys are rejected.
struct ScenarioConfig {
    // scenario
    Regime regime = Regime::formation;

    // grid
    int nz = 72, nr = 8;
    double height = 0.36, radius = 0.04;

    // initial fields (uniform)
    double P_g0 = 12.5e6, S_w0 = 0.4, S_h0 = 0.0, T0 = 275.15, phi0 = 0.35;
    double salinity = 0.0;

    // time controls
    double t_end = 604800.0, dt_max = 120.0, dt_min = 1.0, dt_init = 120.0;

    // mechanical control
    MechControlMode mech_mode = MechControlMode::effective_stress_follower;
    double delta_sigma = 1e6;      ///< follower offset, Pa
    double total_stress = 9e6;     ///< constant-mode magnitude, Pa
    Side mech_probe = Side::top;   ///< probe cell boundary for the follower

    // flow boundary
    std::optional<Side> outlet;    ///< dirichlet side; others no-flow
    double outlet_S_w_inflow = 1.0;
    PressureSchedule schedule;

    // thermal boundary
    bool thermal_dirichlet = true;
    double T_boundary = 275.15;

    // physics switches
    bool gravity = false;
    bool conduction = true;
    double diffusion_D = 0.0;

    // materials and kinetics
    MaterialDB materials;
    KineticParams kinetics;

    // solver settings
    NewtonOptions newton;
    CouplingConfig coupling;

    // output plan
    double series_interval = 0.0;           ///< s; 0 = every accepted step
    std::vector<double> snapshot_times;     ///< s
    PlotBundle plots = PlotBundle::automatic;

    static ScenarioConfig load(const std::string& path);
    void save(const std::string& path) const;
    /// Apply "key = value" (same grammar as the file) on top of this config.
    void apply_override(const std::string& key, const std::string& value);
    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

/// Outputs of one scenario run.
struct RunResult {
    TimeSeries series;
    std::vector<StepReport> steps;
    SimulationState final_state;
    RunStats stats;
    double first_dissociation_time = -1.0; ///< s, first accepted step with n_dot > 0
    double max_subcooling = 0.0;           ///< K, max of (T0 - T_min) over the run
    double initial_hydrate_mol = 0.0;
};

/// Run a scenario. When out_dir is non-empty the CSV time series, the step
/// report stream, VTK snapshots, the plot bundle and a summary are written
/// there. quiet suppresses progress logging to stderr.
RunResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir, bool quiet = false);

/// Effective-stress follower: total stress = probe P_g + target delta.
double effective_stress_controller(double probe_P_g, double target_delta);

} // namespace hydresim
