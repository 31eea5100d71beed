#pragma once

#include "hydresim/geomech.hpp"
#include "hydresim/grid.hpp"
#include "hydresim/kinetics.hpp"
#include "hydresim/materials.hpp"
#include "hydresim/transport.hpp"

#include <functional>

namespace hydresim {

struct CouplingConfig {
    double outer_tol_phi = 1e-6;  ///< relative porosity change per outer sweep
    double outer_tol_epsv = 1e-6; ///< scaled volumetric-strain change per sweep
    int max_outer = 20;
    double omega = 1.0;           ///< under-relaxation on the porosity update
    bool mech_first = false;      ///< sweep ordering (default F_f -> F_g -> F_phi)

    bool operator==(const CouplingConfig&) const = default;
};

/// Per-step convergence and conservation record.
struct StepReport {
    double t = 0.0;  ///< end-of-step time, s
    double dt = 0.0;
    int outer_iterations = 0;
    int newton_iterations_transport = 0;
    int mech_solves = 0;
    int clip_events = 0;
    bool converged = false;
    double outer_dphi = 0.0;          ///< last sweep's porosity change (relative)
    double outer_depsv = 0.0;         ///< last sweep's strain change (scaled)
    double produced_ch4_kg = 0.0;     ///< through Dirichlet boundaries this step
    double produced_h2o_kg = 0.0;
    double ch4_closure_error = 0.0;   ///< storage change + outflow, relative
};

/// Accepted simulation state between steps.
struct SimulationState {
    PrimaryState fields;
    MechState mech;
    std::vector<double> eps_v_cell;   ///< per-cell compression-positive strain (absolute)
    double time = 0.0;
    double produced_ch4_kg = 0.0;     ///< cumulative outflow
    double produced_h2o_kg = 0.0;
    Inventory inventory;              ///< of `fields` (kept current)
};

/// Closed-form sand mass balance: porosity after an incremental
/// compression-positive volumetric strain. Throws StepAbort when the
/// small-strain guard |delta| < 0.05 is violated.
double update_total_porosity(double phi_old, double eps_v_old, double eps_v_new);

/// One implicit-Euler step of the iteratively coupled system: the transport
/// block F_f, the poroelastic block F_g and the porosity equation F_phi are
/// swept in a block Gauss-Seidel loop until the transfer variables settle.
class CoupledStepper {
public:
    CoupledStepper(const AxiGrid& grid, const MaterialDB& db, const KineticParams& kp,
                   const TransportOptions& topts, const CouplingConfig& cfg, Regime regime);

    /// Solve the t = 0 mechanical equilibrium for the initial fields and
    /// loads; sets the strain baseline for reported (relative) strains.
    void initialize(SimulationState& state, const TransportBCs& bcs, const MechLoads& loads);

    /// Attempt one step; returns report.converged = false on outer or inner
    /// failure (the caller halves dt). state is modified only on success.
    StepReport advance(SimulationState& state, double dt, const TransportBCs& bcs,
                       const MechLoads& loads);

    TransportSystem& transport() { return transport_; }
    PoroelasticFem& fem() { return fem_; }
    Regime regime() const { return regime_; }
    const MaterialDB& material_db() const { return db_; }
    const AxiGrid& grid() const { return grid_; }

    /// Domain volumetric strain relative to the initial equilibrium,
    /// compression positive (the quantity the experiment reports).
    double relative_eps_v(const SimulationState& state) const;
    double baseline_eps_v() const { return eps_v0_domain_; }

private:
    const AxiGrid& grid_;
    const MaterialDB& db_;
    CouplingConfig cfg_;
    Regime regime_;
    TransportSystem transport_;
    PoroelasticFem fem_;
    SparseDirectSolver transport_solver_;
    std::vector<double> eps_v0_cell_; ///< strain baseline at initialization
    double eps_v0_domain_ = 0.0;
    double omega_seed_;               ///< Aitken relaxation carried across steps

    MechState solve_mech(const Vector& x, const std::vector<double>& phi, const MechLoads& loads);
};

struct TimeLoopConfig {
    double t_end = 0.0;
    double dt_max = 120.0;
    double dt_min = 1.0;
    double dt_init = 120.0;
};

struct RunStats {
    int steps_accepted = 0;
    int steps_rejected = 0;
    long newton_iterations = 0;
    long outer_iterations = 0;
    double wall_seconds = 0.0;
};

struct TimeLoopCallbacks {
    /// Boundary controllers, evaluated before each attempt: mechanical loads
    /// from the last accepted state, flow BCs at the end-of-step time.
    std::function<MechLoads(const SimulationState&)> mech_loads;
    std::function<TransportBCs(double t_next)> flow_bcs;
    /// Invoked after every accepted step.
    std::function<void(const SimulationState&, const StepReport&)> on_step;
};

/// Implicit Euler march to t_end with dt <= dt_max, halving dt on step
/// rejection and growing it back on success. Throws StepAbort when dt_min
/// is undercut; the state then still holds the last accepted step.
RunStats run_time_loop(CoupledStepper& stepper, SimulationState& state, const TimeLoopConfig& cfg,
                       const TimeLoopCallbacks& callbacks);

} // namespace hydresim
