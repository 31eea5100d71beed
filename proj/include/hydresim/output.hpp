#pragma once

#include "hydresim/coupling.hpp"
#include "hydresim/grid.hpp"
#include "hydresim/materials.hpp"

#include <string>
#include <vector>

namespace hydresim {

/// One emitted sample of the run-level observables (SI units; strains
/// compression-positive; cumulative production never decreases).
struct TimeSeriesRow {
    double t = 0;            ///< s
    double P_g_avg = 0;      ///< Pa, volume average
    double S_w_avg = 0;      ///< pore-volume average
    double S_h_avg = 0;
    double T_avg = 0;        ///< K, volume average
    double T_min = 0;        ///< K, domain minimum
    double eps_v = 0;        ///< - , relative to initial equilibrium
    double produced_mol = 0; ///< cumulative CH4 out
    double produced_sm3 = 0; ///< at 1 atm, 0 degC
    double outlet_P_g = 0;   ///< Pa, average over outlet-adjacent cells
    double E_sh_avg = 0;     ///< Pa
    double hydrate_mol = 0;  ///< current inventory
};

struct TimeSeries {
    std::vector<TimeSeriesRow> rows;
    /// Monotone time and non-decreasing cumulative production.
    void validate() const;
};

/// Molar volume at standard conditions (1 atm, 0 degC), m3/mol.
double standard_molar_volume();

TimeSeriesRow sample_observables(const CoupledStepper& stepper, const SimulationState& state,
                                 Side outlet_side);

void write_timeseries_csv(const std::string& path, const TimeSeries& series);
void write_steps_csv(const std::string& path, const std::vector<StepReport>& steps);

/// Assemble the primary fields plus recomputed derived fields (P_w, P_c,
/// rho_g, K_eff, E_sh, effective stress, eps_v) into one snapshot.
FieldSnapshot build_snapshot(const CoupledStepper& stepper, const SimulationState& state);

/// Legacy ASCII VTK structured grid, cell data + point displacements.
void write_vtk(const std::string& path, const AxiGrid& grid, const FieldSnapshot& snap);

/// Per-figure plot data files (t in the first column).
/// formation: fig7a (P_g), fig7b (S_w, S_h), fig7c (eps_v)
/// dissociation: fig9a (outlet P_g), fig9b (production), fig9c (eps_v),
///               fig9d (T avg/min)
void write_plot_bundle(const std::string& dir, Regime regime, const TimeSeries& series);

/// Multi-curve volumetric strain file from a parameter sweep (one column
/// per swept value, shared time base of the first series).
void write_sweep_eps_v(const std::string& path, const std::vector<std::string>& labels,
                       const std::vector<TimeSeries>& series);

} // namespace hydresim
