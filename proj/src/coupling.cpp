#include "hydresim/coupling.hpp"

#include "hydresim/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hydresim {

double update_total_porosity(double phi_old, double eps_v_old, double eps_v_new)
{
    const double delta = eps_v_new - eps_v_old; // compression positive
    if (std::abs(delta) >= 0.05)
        throw StepAbort("porosity update: volumetric strain increment " + std::to_string(delta) +
                        " violates the small-strain guard");
    const double solid = (1.0 - phi_old) * std::exp(delta);
    const double phi_new = 1.0 - solid;
    if (!(phi_new > 0.0) || !(phi_new < 1.0))
        throw StepAbort("porosity update left (0,1): phi = " + std::to_string(phi_new));
    return phi_new;
}

CoupledStepper::CoupledStepper(const AxiGrid& grid, const MaterialDB& db, const KineticParams& kp,
                               const TransportOptions& topts, const CouplingConfig& cfg,
                               Regime regime)
    : grid_(grid), db_(db), cfg_(cfg), regime_(regime), transport_(grid, db, kp, topts),
      fem_(grid, db), omega_seed_(cfg.omega)
{
    eps_v0_cell_.assign(grid.num_cells(), 0.0);
}

MechState CoupledStepper::solve_mech(const Vector& x, const std::vector<double>& phi,
                                     const MechLoads& loads)
{
    const int n = grid_.num_cells();
    std::vector<double> P_g(n), P_w(n), S_w(n), S_h(n);
    for (int i = 0; i < n; ++i) {
        P_g[i] = x[4 * i + 0];
        S_w[i] = x[4 * i + 1];
        S_h[i] = x[4 * i + 2];
        P_w[i] = transport_.cell_pressures(x, i).second;
    }
    const auto E = fem_.stiffness_field(S_h, regime_);
    const auto P_eff = PoroelasticFem::effective_pore_pressure(P_g, P_w, S_w, S_h);
    MechLoads l = loads;
    if (l.gravity && l.bulk_density.empty()) {
        l.bulk_density.resize(n);
        for (int i = 0; i < n; ++i) {
            const double S_g = 1.0 - S_w[i] - S_h[i];
            l.bulk_density[i] = (1.0 - phi[i]) * db_.rho_s +
                                phi[i] * (S_w[i] * db_.rho_w_liquid + S_h[i] * db_.rho_h +
                                          S_g * 80.0); // gas density is immaterial here
        }
    }
    return fem_.solve(E, P_eff, l);
}

void CoupledStepper::initialize(SimulationState& state, const TransportBCs& bcs,
                                const MechLoads& loads)
{
    state.fields.validate();
    transport_.set_bcs(bcs);
    // dt value is irrelevant for the equilibrium solve; begin_step only
    // freezes the old storage used by transport residuals
    transport_.begin_step(state.fields, 1.0);
    const Vector x = TransportSystem::pack(state.fields);
    state.mech = solve_mech(x, state.fields.phi, loads);
    eps_v0_cell_ = state.mech.eps_v;
    eps_v0_domain_ = state.mech.eps_v_domain;
    state.eps_v_cell = state.mech.eps_v;
    for (int v = 0; v < grid_.num_vertices(); ++v) {
        state.fields.u_z[v] = state.mech.u[2 * v];
        state.fields.u_r[v] = state.mech.u[2 * v + 1];
    }
    state.inventory = transport_.inventory(x, state.fields.phi);
}

double CoupledStepper::relative_eps_v(const SimulationState& state) const
{
    double sum = 0.0;
    for (int c = 0; c < grid_.num_cells(); ++c)
        sum += (state.eps_v_cell[c] - eps_v0_cell_[c]) * grid_.cell_volume(c);
    return sum / grid_.total_volume();
}

StepReport CoupledStepper::advance(SimulationState& state, double dt, const TransportBCs& bcs,
                                   const MechLoads& loads)
{
    StepReport report;
    report.dt = dt;
    report.t = state.time + dt;

    transport_.set_bcs(bcs);
    transport_.begin_step(state.fields, dt);

    Vector x = TransportSystem::pack(state.fields);
    std::vector<double> phi_iter = state.fields.phi;
    std::vector<double> eps_iter = state.eps_v_cell;
    MechState mech;

    const int ncells = grid_.num_cells();
    const double phi_ref = *std::max_element(phi_iter.begin(), phi_iter.end());
    bool settled = false;

    // Aitken-accelerated relaxation of the porosity fixed point. The drained
    // split can be contractive or expansive depending on E_sh and the gas
    // pressure level, so a static factor is not robust; cfg.omega seeds the
    // first sweep.
    std::vector<double> resid(ncells), resid_prev;
    double omega = omega_seed_;

    for (int outer = 0; outer < cfg_.max_outer && !settled; ++outer) {
        ++report.outer_iterations;

        transport_.set_porosity_iterate(phi_iter);
        const auto newton = transport_.solve_step(x, transport_solver_);
        report.newton_iterations_transport += newton.iterations;
        report.clip_events += newton.clip_events;
        if (!newton.converged) return report; // converged stays false

        mech = solve_mech(x, phi_iter, loads);
        ++report.mech_solves;

        double dphi = 0.0, deps = 0.0, eps_scale = 1e-3;
        for (int c = 0; c < ncells; ++c) eps_scale = std::max(eps_scale, std::abs(mech.eps_v[c]));
        try {
            for (int c = 0; c < ncells; ++c) {
                const double target =
                    update_total_porosity(state.fields.phi[c], state.eps_v_cell[c], mech.eps_v[c]);
                resid[c] = target - phi_iter[c];
                dphi = std::max(dphi, std::abs(resid[c]) / phi_ref);
                deps = std::max(deps, std::abs(mech.eps_v[c] - eps_iter[c]));
            }
        } catch (const StepAbort&) {
            return report; // strain guard tripped: reject, caller halves dt
        }
        deps /= eps_scale;

        report.outer_dphi = dphi;
        report.outer_depsv = deps;
        eps_iter = mech.eps_v;
        settled = dphi < cfg_.outer_tol_phi && deps < cfg_.outer_tol_epsv;
        if (settled) break;

        if (!resid_prev.empty()) {
            double num = 0.0, den = 0.0;
            for (int c = 0; c < ncells; ++c) {
                const double dr = resid[c] - resid_prev[c];
                num += resid_prev[c] * dr;
                den += dr * dr;
            }
            if (den > 0.0) omega = std::clamp(-omega * num / den, 0.02, 1.0);
        }
        for (int c = 0; c < ncells; ++c) phi_iter[c] += omega * resid[c];
        resid_prev = resid;
    }

    if (!settled) return report;
    omega_seed_ = omega; // seed the next step's relaxation

    // accept
    const Inventory inv_old = state.inventory;
    transport_.set_porosity_iterate(phi_iter);
    const auto flux = transport_.boundary_fluxes(x);

    transport_.unpack(x, state.fields);
    state.fields.phi = phi_iter;
    state.mech = mech;
    state.eps_v_cell = mech.eps_v;
    for (int v = 0; v < grid_.num_vertices(); ++v) {
        state.fields.u_z[v] = mech.u[2 * v];
        state.fields.u_r[v] = mech.u[2 * v + 1];
    }
    state.time += dt;
    report.produced_ch4_kg = flux.ch4_out * dt;
    report.produced_h2o_kg = flux.h2o_out * dt;
    state.produced_ch4_kg += report.produced_ch4_kg;
    state.produced_h2o_kg += report.produced_h2o_kg;

    state.inventory = transport_.inventory(x, state.fields.phi);
    const double scale = std::max(std::abs(inv_old.ch4_total), 1e-12);
    report.ch4_closure_error =
        (state.inventory.ch4_total - inv_old.ch4_total + report.produced_ch4_kg) / scale;
    report.converged = true;
    return report;
}

RunStats run_time_loop(CoupledStepper& stepper, SimulationState& state, const TimeLoopConfig& cfg,
                       const TimeLoopCallbacks& callbacks)
{
    if (!(cfg.t_end > 0.0) || !(cfg.dt_max > 0.0) || !(cfg.dt_min > 0.0) ||
        cfg.dt_min > cfg.dt_max)
        throw ConfigError("time loop needs 0 < dt_min <= dt_max and t_end > 0");

    RunStats stats;
    const auto wall0 = std::chrono::steady_clock::now();
    double dt = std::min(cfg.dt_init, cfg.dt_max);

    while (state.time < cfg.t_end * (1.0 - 1e-12)) {
        dt = std::min(dt, cfg.t_end - state.time);
        const MechLoads loads = callbacks.mech_loads ? callbacks.mech_loads(state) : MechLoads{};
        const TransportBCs bcs =
            callbacks.flow_bcs ? callbacks.flow_bcs(state.time + dt) : TransportBCs{};

        const StepReport report = stepper.advance(state, dt, bcs, loads);
        stats.outer_iterations += report.outer_iterations;
        stats.newton_iterations += report.newton_iterations_transport;

        if (!report.converged) {
            ++stats.steps_rejected;
            if (dt <= cfg.dt_min * (1.0 + 1e-12))
                throw StepAbort("time step rejected at dt_min = " + std::to_string(cfg.dt_min) +
                                " s (t = " + std::to_string(state.time) + " s)");
            dt = std::max(0.5 * dt, cfg.dt_min);
            continue;
        }

        ++stats.steps_accepted;
        if (callbacks.on_step) callbacks.on_step(state, report);
        dt = std::min(2.0 * dt, cfg.dt_max);
    }

    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return stats;
}

} // namespace hydresim
