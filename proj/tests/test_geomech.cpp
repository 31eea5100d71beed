#include "hydresim/geomech.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hydresim;

namespace {
const MaterialDB db{};
}

TEST_CASE("unloaded body stays put")
{
    const AxiGrid grid(4, 2, 0.4, 0.05);
    PoroelasticFem fem(grid, db);
    std::vector<double> E(grid.num_cells(), 100e6), P(grid.num_cells(), 0.0);
    const auto state = fem.solve(E, P, MechLoads{});
    CHECK(state.u.lpNorm<Eigen::Infinity>() < 1e-15);
    CHECK(state.eps_v_domain == doctest::Approx(0.0));
}

TEST_CASE("isotropic compression patch test")
{
    // uniform effective traction sigma0 on a homogeneous sample:
    // eps_v = 3 sigma0 (1 - 2 nu) / E, stress uniform isotropic
    const AxiGrid grid(6, 3, 0.36, 0.04);
    PoroelasticFem fem(grid, db);
    const double E0 = 132e6, sigma0 = 1e6;
    std::vector<double> E(grid.num_cells(), E0), P(grid.num_cells(), 0.0);
    MechLoads loads;
    loads.sigma_top = sigma0;
    loads.sigma_outer = sigma0;
    const auto state = fem.solve(E, P, loads);

    const double exact = 3.0 * sigma0 * (1.0 - 2.0 * db.nu_sh) / E0;
    CHECK(state.eps_v_domain == doctest::Approx(exact).epsilon(1e-10));
    for (int c = 0; c < grid.num_cells(); ++c) {
        CHECK(state.eps_v[c] == doctest::Approx(exact).epsilon(1e-10));
        for (int a = 0; a < 3; ++a)
            CHECK(state.stress_eff[c][a] == doctest::Approx(-sigma0).epsilon(1e-10));
        CHECK(std::abs(state.stress_eff[c][3]) < 1e-4); // shear-free
    }
}

TEST_CASE("linearity: doubling the stiffness halves the displacement")
{
    const AxiGrid grid(4, 2, 0.36, 0.04);
    PoroelasticFem fem(grid, db);
    std::vector<double> E1(grid.num_cells(), 50e6), E2(grid.num_cells(), 100e6),
        P(grid.num_cells(), 0.0);
    MechLoads loads;
    loads.sigma_top = 2e6;
    loads.sigma_outer = 2e6;
    const auto s1 = fem.solve(E1, P, loads);
    const auto s2 = fem.solve(E2, P, loads);
    for (int i = 0; i < s1.u.size(); ++i)
        CHECK(s1.u[i] == doctest::Approx(2.0 * s2.u[i]).epsilon(1e-9));
}

TEST_CASE("purely axial load keeps radial and hoop strain equal")
{
    const AxiGrid grid(6, 3, 0.36, 0.04);
    PoroelasticFem fem(grid, db);
    std::vector<double> E(grid.num_cells(), 80e6), P(grid.num_cells(), 0.0);
    MechLoads loads;
    loads.sigma_top = 1.5e6;
    loads.sigma_outer = 0.0;
    const auto state = fem.solve(E, P, loads);
    for (int c = 0; c < grid.num_cells(); ++c)
        CHECK(state.strain[c][1] == doctest::Approx(state.strain[c][2]).epsilon(1e-8));
}

TEST_CASE("pore pressure loading")
{
    const AxiGrid grid(4, 2, 0.36, 0.04);

    SUBCASE("alpha_biot = 0 decouples the skeleton from the fluid")
    {
        MaterialDB decoupled = db;
        decoupled.alpha_biot = 0.0;
        PoroelasticFem fem(grid, decoupled);
        std::vector<double> E(grid.num_cells(), 100e6), P(grid.num_cells(), 5e6);
        const auto state = fem.solve(E, P, MechLoads{});
        CHECK(state.u.lpNorm<Eigen::Infinity>() < 1e-15);
    }

    SUBCASE("uniform pressure with matching boundary traction is self-equilibrated")
    {
        // total stress = alpha * P on the boundary: effective stress vanishes
        PoroelasticFem fem(grid, db);
        std::vector<double> E(grid.num_cells(), 100e6), P(grid.num_cells(), 5e6);
        MechLoads loads;
        loads.sigma_top = db.alpha_biot * 5e6;
        loads.sigma_outer = db.alpha_biot * 5e6;
        const auto state = fem.solve(E, P, loads);
        for (int c = 0; c < grid.num_cells(); ++c)
            for (int a = 0; a < 3; ++a)
                CHECK(std::abs(state.stress_eff[c][a]) < 1e-4);
    }
}

TEST_CASE("hydrate saturation sets the element stiffness")
{
    const AxiGrid grid(3, 2, 0.3, 0.04);
    PoroelasticFem fem(grid, db);
    std::vector<double> S_h(grid.num_cells(), 0.4);
    const auto E = fem.stiffness_field(S_h, Regime::formation);
    for (double e : E) CHECK(e == doctest::Approx(132e6));
    const auto E2 = fem.stiffness_field(S_h, Regime::dissociation);
    for (double e : E2) CHECK(e == doctest::Approx(183.04e6));
}

TEST_CASE("strain energy is non-negative (SPD stiffness)")
{
    const AxiGrid grid(5, 3, 0.36, 0.04);
    PoroelasticFem fem(grid, db);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(20e6, 400e6);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> E(grid.num_cells()), P(grid.num_cells(), 0.0);
        for (auto& e : E) e = dist(rng);
        MechLoads loads;
        loads.sigma_top = (trial % 2 ? 1.0 : -1.0) * 2e6;
        loads.sigma_outer = 1e6;
        const auto s = fem.solve(E, P, loads);
        double energy = 0.0;
        for (int c = 0; c < grid.num_cells(); ++c) {
            const auto& eps = s.strain[c];
            const auto& sig = s.stress_eff[c];
            energy += (sig[0] * eps[0] + sig[1] * eps[1] + sig[2] * eps[2] + sig[3] * eps[3]) *
                      grid.cell_volume(c);
        }
        CHECK(energy >= -1e-12);
    }
}

TEST_CASE("domain eps_v matches the deformed mesh volume to first order")
{
    const AxiGrid grid(6, 3, 0.36, 0.04);
    PoroelasticFem fem(grid, db);
    std::vector<double> E(grid.num_cells(), 500e6), P(grid.num_cells(), 0.0);
    MechLoads loads;
    loads.sigma_top = 0.1e6; // strains ~ 4e-4 < 1e-3
    loads.sigma_outer = 0.1e6;
    const auto s = fem.solve(E, P, loads);
    REQUIRE(std::abs(s.eps_v_domain) < 1e-3);

    // deformed volume by exact revolution of the displaced Q1 mesh
    const double pi = std::numbers::pi;
    double v_def = 0.0;
    for (int iz = 0; iz < grid.nz(); ++iz)
        for (int ir = 0; ir < grid.nr(); ++ir) {
            auto vid = [&](int dz, int dr) { return grid.vertex_index(iz + dz, ir + dr); };
            auto rz = [&](int v) { return grid.vertex_r(v) + s.u[2 * v + 1]; };
            auto zz = [&](int v) { return grid.vertex_z(v) + s.u[2 * v]; };
            // bilinear patch; integrate z r dr along the boundary (Pappus-style)
            // with 2-point Gauss per edge: V = -2 pi * closed contour integral of z * r dr
            const int vs[5] = {vid(0, 0), vid(0, 1), vid(1, 1), vid(1, 0), vid(0, 0)};
            double integral = 0.0;
            for (int e = 0; e < 4; ++e) {
                const double r0 = rz(vs[e]), r1 = rz(vs[e + 1]);
                const double z0 = zz(vs[e]), z1 = zz(vs[e + 1]);
                for (double g : {-0.5773502691896258, 0.5773502691896258}) {
                    const double N0 = 0.5 * (1 - g), N1 = 0.5 * (1 + g);
                    integral += 0.5 * (N0 * z0 + N1 * z1) * (N0 * r0 + N1 * r1) * (r1 - r0);
                }
            }
            v_def += -2.0 * pi * integral;
        }
    const double v0 = grid.total_volume();
    const double eps_v_geo = (v0 - v_def) / v0; // compression positive
    CHECK(eps_v_geo == doctest::Approx(s.eps_v_domain).epsilon(1e-3));
    CHECK(std::abs(eps_v_geo - s.eps_v_domain) < 1e-6);
}

TEST_CASE("stress report")
{
    const AxiGrid grid(3, 2, 0.3, 0.04);
    PoroelasticFem fem(grid, db);
    std::vector<double> E(grid.num_cells(), 132e6);
    std::vector<double> P(grid.num_cells(), 12.5e6);
    std::vector<double> P_g = P;
    MechLoads loads;
    loads.sigma_top = 13.5e6;
    loads.sigma_outer = 13.5e6;
    const auto state = fem.solve(E, P, loads);
    const auto rep = fem.stress_report(state, P, P_g, 13.5e6);

    for (int c = 0; c < grid.num_cells(); ++c) {
        // apparent effective stress is the experiment's control variable
        CHECK(rep.apparent_effective[c] == doctest::Approx(1e6).epsilon(1e-12));
        // total = effective - alpha P on the normal components
        for (int a = 0; a < 3; ++a)
            CHECK(rep.stress_total[c][a] ==
                  doctest::Approx(state.stress_eff[c][a] - db.alpha_biot * 12.5e6));
        // and the total normal stress balances the applied traction
        CHECK(rep.stress_total[c][0] == doctest::Approx(-13.5e6).epsilon(1e-6));
    }

    SUBCASE("zero pore pressure: total equals effective")
    {
        std::vector<double> P0(grid.num_cells(), 0.0);
        const auto s0 = fem.solve(E, P0, loads);
        const auto r0 = fem.stress_report(s0, P0, P0, 13.5e6);
        for (int c = 0; c < grid.num_cells(); ++c)
            for (int a = 0; a < 4; ++a)
                CHECK(r0.stress_total[c][a] == doctest::Approx(s0.stress_eff[c][a]));
    }
}

TEST_CASE("effective pore pressure weighting")
{
    const std::vector<double> P_g{10e6}, P_w{9.8e6}, S_w{0.4}, S_h{0.2};
    const auto p = PoroelasticFem::effective_pore_pressure(P_g, P_w, S_w, S_h);
    // (0.4 * 9.8 + 0.4 * 10) / 0.8
    CHECK(p[0] == doctest::Approx((0.4 * 9.8e6 + 0.4 * 10e6) / 0.8).epsilon(1e-12));
    const auto pu = PoroelasticFem::effective_pore_pressure(P_g, P_w, S_w, S_h, false);
    CHECK(pu[0] == doctest::Approx(0.4 * 9.8e6 + 0.4 * 10e6).epsilon(1e-12));
}
