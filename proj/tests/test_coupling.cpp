#include "hydresim/coupling.hpp"
#include "hydresim/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace hydresim;

namespace {

struct CoupledRig {
    AxiGrid grid;
    MaterialDB db;
    KineticParams kp;
    CoupledStepper stepper;

    CoupledRig(int nz, int nr, double h, double r, MaterialDB mdb = {}, KineticParams kpp = {},
               TransportOptions topts = {}, CouplingConfig cfg = {},
               Regime regime = Regime::formation)
        : grid(nz, nr, h, r), db(std::move(mdb)), kp(kpp),
          stepper(grid, db, kp, topts, cfg, regime)
    {
    }
};

KineticParams kinetics_off()
{
    KineticParams kp;
    kp.enabled = false;
    return kp;
}

TransportBCs closed_isothermal(double T)
{
    TransportBCs bcs;
    bcs.bottom.thermal = bcs.top.thermal = bcs.outer.thermal = {ThermalBC::Kind::dirichlet, T};
    return bcs;
}

} // namespace

TEST_CASE("porosity update")
{
    SUBCASE("no deformation leaves porosity unchanged")
    {
        CHECK(update_total_porosity(0.35, 0.01, 0.01) == doctest::Approx(0.35).epsilon(1e-15));
    }
    SUBCASE("compression reduces porosity by the closed-form law")
    {
        // 1 - 0.65 * exp(0.001)
        CHECK(update_total_porosity(0.35, 0.0, 0.001) ==
              doctest::Approx(0.3493496746).epsilon(1e-9));
    }
    SUBCASE("two half increments compose to one full increment")
    {
        const double direct = update_total_porosity(0.35, 0.0, 0.002);
        const double mid = update_total_porosity(0.35, 0.0, 0.001);
        const double chained = update_total_porosity(mid, 0.001, 0.002);
        CHECK(chained == doctest::Approx(direct).epsilon(1e-15));
    }
    SUBCASE("expansion raises porosity")
    {
        CHECK(update_total_porosity(0.35, 0.0, -0.001) > 0.35);
    }
    SUBCASE("small-strain guard rejects large increments")
    {
        CHECK_THROWS_AS(update_total_porosity(0.35, 0.0, 0.06), StepAbort);
        CHECK_THROWS_AS(update_total_porosity(0.35, 0.0, -0.06), StepAbort);
    }
}

TEST_CASE("equilibrium state is a one-sweep fixed point")
{
    CoupledRig rig(2, 2, 0.2, 0.04, MaterialDB{}, kinetics_off());
    SimulationState state;
    state.fields = PrimaryState::uniform(rig.grid, 9e6, 0.4, 0.1, 275.15, 0.35);
    const auto bcs = closed_isothermal(275.15);
    MechLoads loads;
    loads.sigma_top = 10e6;
    loads.sigma_outer = 10e6;
    rig.stepper.initialize(state, bcs, loads);

    const auto fields0 = state.fields;
    const auto rep = rig.stepper.advance(state, 120.0, bcs, loads);
    CHECK(rep.converged);
    CHECK(rep.outer_iterations == 1);
    for (int c = 0; c < rig.grid.num_cells(); ++c) {
        CHECK(state.fields.P_g[c] == doctest::Approx(fields0.P_g[c]).epsilon(1e-10));
        CHECK(state.fields.S_w[c] == doctest::Approx(fields0.S_w[c]).epsilon(1e-10));
        CHECK(state.fields.phi[c] == doctest::Approx(fields0.phi[c]).epsilon(1e-10));
    }
    CHECK(rig.stepper.relative_eps_v(state) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single-cell formation step converges quickly to a unique fixed point")
{
    auto run = [&](CouplingConfig cfg) {
        CoupledRig rig(1, 1, 0.1, 0.04, MaterialDB{}, KineticParams{}, TransportOptions{}, cfg);
        SimulationState state;
        state.fields = PrimaryState::uniform(rig.grid, 12.5e6, 0.4, 0.0, 275.15, 0.35);
        const auto bcs = closed_isothermal(275.15);
        MechLoads loads;
        loads.sigma_top = 13.5e6;
        loads.sigma_outer = 13.5e6;
        rig.stepper.initialize(state, bcs, loads);
        const auto rep = rig.stepper.advance(state, 120.0, bcs, loads);
        REQUIRE(rep.converged);
        return std::pair{state, rep};
    };

    const auto [s1, r1] = run(CouplingConfig{});
    CHECK(r1.outer_iterations <= 5);
    CHECK(s1.fields.S_h[0] > 0.0);
    CHECK(s1.fields.P_g[0] < 12.5e6);

    // a different sweep path (under-relaxed porosity) reaches the same point
    CouplingConfig relaxed;
    relaxed.omega = 0.6;
    const auto [s2, r2] = run(relaxed);
    CHECK(s2.fields.P_g[0] == doctest::Approx(s1.fields.P_g[0]).epsilon(1e-8));
    CHECK(s2.fields.S_h[0] == doctest::Approx(s1.fields.S_h[0]).epsilon(1e-6));
    CHECK(s2.fields.phi[0] == doctest::Approx(s1.fields.phi[0]).epsilon(1e-8));
}

TEST_CASE("splitting self-convergence: tighter outer tolerance barely moves the solution")
{
    auto run_10_steps = [&](double tol) {
        CouplingConfig cfg;
        cfg.outer_tol_phi = tol;
        cfg.outer_tol_epsv = tol;
        cfg.max_outer = 60;
        CoupledRig rig(4, 1, 0.36, 0.04, MaterialDB{}, KineticParams{}, TransportOptions{}, cfg);
        SimulationState state;
        state.fields = PrimaryState::uniform(rig.grid, 12.5e6, 0.4, 0.0, 275.15, 0.35);
        const auto bcs = closed_isothermal(275.15);
        MechLoads loads;
        loads.sigma_top = 13.5e6;
        loads.sigma_outer = 13.5e6;
        rig.stepper.initialize(state, bcs, loads);
        for (int i = 0; i < 10; ++i) {
            const auto rep = rig.stepper.advance(state, 120.0, bcs, loads);
            REQUIRE(rep.converged);
        }
        return state;
    };

    const auto loose = run_10_steps(1e-6);
    const auto tight = run_10_steps(1e-10);
    for (int c = 0; c < 4; ++c) {
        CHECK(std::abs(loose.fields.P_g[c] - tight.fields.P_g[c]) / tight.fields.P_g[c] < 1e-5);
        CHECK(std::abs(loose.fields.S_h[c] - tight.fields.S_h[c]) < 1e-5);
        CHECK(std::abs(loose.fields.phi[c] - tight.fields.phi[c]) / tight.fields.phi[c] < 1e-5);
    }
}

TEST_CASE("time loop")
{
    SUBCASE("dt_max = t_end still lands exactly on t_end")
    {
        CoupledRig rig(2, 1, 0.2, 0.04, MaterialDB{}, kinetics_off());
        SimulationState state;
        state.fields = PrimaryState::uniform(rig.grid, 9e6, 0.4, 0.1, 275.15, 0.35);
        const auto bcs = closed_isothermal(275.15);
        MechLoads loads;
        loads.sigma_top = 10e6;
        loads.sigma_outer = 10e6;
        rig.stepper.initialize(state, bcs, loads);

        TimeLoopConfig loop{600.0, 600.0, 1.0, 600.0};
        TimeLoopCallbacks cb;
        cb.mech_loads = [&](const SimulationState&) { return loads; };
        cb.flow_bcs = [&](double) { return bcs; };
        int steps = 0;
        cb.on_step = [&](const SimulationState&, const StepReport&) { ++steps; };
        const auto stats = run_time_loop(rig.stepper, state, loop, cb);
        CHECK(steps == 1);
        CHECK(stats.steps_accepted == 1);
        CHECK(state.time == doctest::Approx(600.0).epsilon(1e-14));
    }

    SUBCASE("persistent failure aborts at dt_min with the last good state kept")
    {
        CouplingConfig broken;
        broken.max_outer = 0; // every advance fails
        CoupledRig rig(2, 1, 0.2, 0.04, MaterialDB{}, kinetics_off(), TransportOptions{}, broken);
        SimulationState state;
        state.fields = PrimaryState::uniform(rig.grid, 9e6, 0.4, 0.1, 275.15, 0.35);
        const auto bcs = closed_isothermal(275.15);
        MechLoads loads;
        rig.stepper.initialize(state, bcs, loads);

        TimeLoopConfig loop{1000.0, 100.0, 25.0, 100.0};
        TimeLoopCallbacks cb;
        cb.flow_bcs = [&](double) { return bcs; };
        cb.mech_loads = [&](const SimulationState&) { return loads; };
        CHECK_THROWS_AS(run_time_loop(rig.stepper, state, loop, cb), StepAbort);
        CHECK(state.time == 0.0); // nothing accepted
    }
}

TEST_CASE("transfer discipline: transport reads porosity, never displacements")
{
    // architectural property: the porosity iterate is the sole geomechanics
    // input of F_f; shifting displacements at fixed porosity must not change
    // the transport residual
    CoupledRig rig(2, 1, 0.2, 0.04, MaterialDB{}, kinetics_off());
    auto fields = PrimaryState::uniform(rig.grid, 9e6, 0.4, 0.1, 275.15, 0.35);
    rig.stepper.transport().set_bcs(closed_isothermal(275.15));
    rig.stepper.transport().begin_step(fields, 60.0);
    const Vector x = TransportSystem::pack(fields);
    const Vector r1 = rig.stepper.transport().residual(x);
    for (auto& u : fields.u_z) u += 1e-3; // displacements are not an F_f input
    const Vector r2 = rig.stepper.transport().residual(x);
    CHECK((r1 - r2).lpNorm<Eigen::Infinity>() == 0.0);
}
