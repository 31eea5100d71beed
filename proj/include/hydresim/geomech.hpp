#pragma once

#include "hydresim/grid.hpp"
#include "hydresim/materials.hpp"
#include "hydresim/numerics.hpp"

#include <vector>

namespace hydresim {

/// Axisymmetric strain/stress components in the order (zz, rr, theta-theta, zr).
struct MechState {
    Vector u;                                    ///< 2 dofs per vertex: (u_z, u_r)
    std::vector<std::array<double, 4>> strain;   ///< per cell, tension positive
    std::vector<std::array<double, 4>> stress_eff; ///< per cell, Pa, tension positive
    std::vector<double> eps_v;                   ///< per cell, compression positive
    double eps_v_domain = 0.0;                   ///< volume average, compression positive
};

/// Boundary tractions (total stress magnitudes, compression positive).
/// Bottom and axis are rollers; top and outer carry the applied stress.
struct MechLoads {
    double sigma_top = 0.0;   ///< Pa
    double sigma_outer = 0.0; ///< Pa
    bool gravity = false;     ///< body force off by default for the triaxial runs
    double gravity_accel = 9.81;
    std::vector<double> bulk_density; ///< kg/m3 per cell, required when gravity is on
};

/// Quasi-static linear poro-elasticity on Q1 elements with hydrate-dependent
/// stiffness E_sh(S_h) and Biot effective-stress coupling. The element mesh
/// coincides with the FV cells; E and pore pressure are piecewise constant
/// per element.
class PoroelasticFem {
public:
    PoroelasticFem(const AxiGrid& grid, const MaterialDB& db);

    /// Assemble and solve K u = f for the given per-cell inputs.
    /// pore_pressure is the fluid-fraction-weighted P_eff per cell.
    MechState solve(const std::vector<double>& E_sh, const std::vector<double>& pore_pressure,
                    const MechLoads& loads);

    /// Element stiffness field from the hydrate saturation and regime.
    std::vector<double> stiffness_field(const std::vector<double>& S_h, Regime regime) const;

    /// Fluid-pressure load input P_eff = (S_w P_w + S_g P_g)/(S_w + S_g)
    /// (normalized form; the unnormalized variant is a config switch).
    static std::vector<double> effective_pore_pressure(const std::vector<double>& P_g,
                                                       const std::vector<double>& P_w,
                                                       const std::vector<double>& S_w,
                                                       const std::vector<double>& S_h,
                                                       bool normalized = true);

    const SolverStats& solver_stats() const { return solver_.stats(); }

    /// Total stress (sigma_eff - alpha P m) and the experiment's apparent
    /// effective stress (applied confining stress minus P_g), per cell.
    struct StressReport {
        std::vector<std::array<double, 4>> stress_total;
        std::vector<double> apparent_effective; ///< Pa, compression positive
    };
    StressReport stress_report(const MechState& state, const std::vector<double>& pore_pressure,
                               const std::vector<double>& P_g, double sigma_confining) const;

private:
    const AxiGrid& grid_;
    const MaterialDB& db_;
    std::vector<int> dof_map_;  ///< global dof -> free index, -1 when constrained
    int n_free_ = 0;
    SparseDirectSolver solver_;

    void element_matrices(int cell, double E, double alpha_p, double nu,
                          double Ke[8][8], double fe[8]) const;
};

} // namespace hydresim
