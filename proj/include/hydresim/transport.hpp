#pragma once

#include "hydresim/grid.hpp"
#include "hydresim/kinetics.hpp"
#include "hydresim/materials.hpp"
#include "hydresim/numerics.hpp"

#include <optional>

namespace hydresim {

struct FlowBC {
    enum class Kind { noflow, dirichlet };
    Kind kind = Kind::noflow;
    double P_g = 0.0;        ///< Pa, boundary gas pressure (dirichlet)
    double S_w_inflow = 1.0; ///< composition used when the boundary feeds the domain
};

struct ThermalBC {
    enum class Kind { adiabatic, dirichlet };
    Kind kind = Kind::adiabatic;
    double T = 275.15; ///< K
};

struct SideBC {
    FlowBC flow;
    ThermalBC thermal;
};

/// Boundary conditions per domain side; the symmetry axis is always
/// no-flow / adiabatic.
struct TransportBCs {
    SideBC bottom, top, outer;
    const SideBC& side(Side s) const;
};

struct TransportOptions {
    bool gravity = false;
    double gravity_accel = 9.81;
    bool conduction = true;
    double diffusion_D = 0.0; ///< m2/s binary diffusion, 0 disables J^kappa
    NewtonOptions newton{1e-10, 1e-8, 25, 1.0 / 64.0};
};

/// Fluid CH4/H2O mass, hydrate mass and internal energy of the domain.
struct Inventory {
    double ch4_fluid = 0;  ///< kg, gaseous + dissolved methane
    double h2o_fluid = 0;  ///< kg, liquid water + vapor
    double hydrate = 0;    ///< kg
    double ch4_total = 0;  ///< kg, fluid + hydrate-bound
    double h2o_total = 0;  ///< kg
    double energy = 0;     ///< J
};

/// Net rates leaving the domain through Dirichlet boundary faces.
struct BoundaryFluxes {
    double ch4_out = 0; ///< kg/s
    double h2o_out = 0; ///< kg/s
    double heat_out = 0; ///< W
};

/// The transport block: fully implicit TPFA finite volumes with full
/// upwinding for the CH4 / H2O / hydrate mass balances and the energy
/// balance. Unknown layout is cell-major, 4 per cell: (P_g, S_w, S_h, T).
///
/// Geomechanics feeds in exclusively through the total-porosity iterate;
/// displacements are never read here.
class TransportSystem {
public:
    TransportSystem(const AxiGrid& grid, const MaterialDB& db, const KineticParams& kp,
                    TransportOptions options);

    void set_bcs(const TransportBCs& bcs) { bcs_ = bcs; }
    void set_salinity(double salinity) { salinity_ = salinity; }
    const TransportOptions& options() const { return options_; }
    TransportOptions& options() { return options_; }

    static Vector pack(const PrimaryState& s);
    void unpack(const Vector& x, PrimaryState& s) const;

    /// Freeze the accepted state at t_n and the step size. The porosity
    /// iterate starts at the old porosity.
    void begin_step(const PrimaryState& old_state, double dt);
    void set_porosity_iterate(const std::vector<double>& phi);
    const std::vector<double>& porosity_iterate() const { return phi_; }

    /// Physical residual, per bulk volume: kg/m3/s for the mass balances
    /// and W/m3 for energy. Ordering: 4 equations per cell.
    Vector residual(const Vector& x) const;
    void jacobian(const Vector& x, SparseMatrix& J) const;

    /// Equation weights that turn the residual into a relative storage
    /// change per time step (used as Newton norm weights).
    Vector equation_weights() const;

    /// Project saturations onto the admissible simplex and bound P, T;
    /// returns the number of modified entries.
    int clip(Vector& x) const;

    /// Newton solve of one implicit Euler step starting from x.
    NewtonReport solve_step(Vector& x, SparseDirectSolver& solver) const;

    Inventory inventory(const Vector& x, const std::vector<double>& phi) const;
    BoundaryFluxes boundary_fluxes(const Vector& x) const;
    KineticSource cell_kinetics(const Vector& x, int cell) const;
    /// Capillary and water pressure of one cell at the given unknowns.
    std::pair<double, double> cell_pressures(const Vector& x, int cell) const;

    const AxiGrid& grid() const { return grid_; }
    long pc_cap_events() const { return pc_cap_events_; }

private:
    const AxiGrid& grid_;
    const MaterialDB& db_;
    const KineticParams& kp_;
    TransportOptions options_;
    TransportBCs bcs_;
    double salinity_ = 0.0;
    double dt_ = 0.0;

    std::vector<double> phi_;      ///< porosity iterate (frozen within F_f)
    std::vector<double> old_m_;    ///< 4 per cell: storage at t_n
    Vector weights_;               ///< equation weights from the old state
    mutable long pc_cap_events_ = 0;
};

} // namespace hydresim
