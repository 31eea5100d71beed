#include "hydresim/errors.hpp"
#include "hydresim/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace hydresim;

namespace {
namespace fs = std::filesystem;

std::string repo_config(const char* name)
{
    for (const char* base : {"../configs/", "../../configs/", "configs/"}) {
        const std::string p = std::string(base) + name;
        if (fs::exists(p)) return p;
    }
    return std::string("configs/") + name;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / name; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ScenarioConfig tiny_scenario()
{
    ScenarioConfig cfg;
    cfg.regime = Regime::formation;
    cfg.nz = 4;
    cfg.nr = 1;
    cfg.height = 0.36;
    cfg.radius = 0.04;
    cfg.t_end = 600.0;
    cfg.dt_max = 120.0;
    cfg.dt_init = 120.0;
    cfg.series_interval = 0.0;
    cfg.plots = PlotBundle::automatic;
    return cfg;
}

} // namespace

TEST_CASE("shipped formation scenario matches the experiment setup")
{
    const auto cfg = ScenarioConfig::load(repo_config("formation.cfg"));
    CHECK(cfg.regime == Regime::formation);
    CHECK(cfg.nz == 72);
    CHECK(cfg.nr == 8);
    CHECK(cfg.height == doctest::Approx(0.36));
    CHECK(cfg.radius == doctest::Approx(0.04));
    CHECK(cfg.P_g0 == doctest::Approx(12.5e6));
    CHECK(cfg.S_w0 == doctest::Approx(0.4));
    CHECK(cfg.phi0 == doctest::Approx(0.35));
    CHECK(cfg.T0 == doctest::Approx(275.15));
    CHECK(cfg.t_end == doctest::Approx(604800.0));
    CHECK(cfg.dt_max == doctest::Approx(120.0));
    CHECK(cfg.mech_mode == MechControlMode::effective_stress_follower);
    CHECK(cfg.delta_sigma == doctest::Approx(1e6));
    CHECK(cfg.kinetics.k_reac_formation == doctest::Approx(0.2e-11));
}

TEST_CASE("shipped dissociation scenario matches the experiment setup")
{
    const auto cfg = ScenarioConfig::load(repo_config("dissociation.cfg"));
    CHECK(cfg.regime == Regime::dissociation);
    CHECK(cfg.t_end == doctest::Approx(86400.0));
    CHECK(cfg.mech_mode == MechControlMode::constant_total_stress);
    CHECK(cfg.total_stress == doctest::Approx(9e6));
    CHECK(cfg.S_h0 == doctest::Approx(0.39));
    CHECK(cfg.S_w0 + cfg.S_h0 == doctest::Approx(1.0)); // water saturated
    CHECK(cfg.salinity == doctest::Approx(0.035));
    REQUIRE(cfg.outlet.has_value());
    CHECK(*cfg.outlet == Side::top);
    REQUIRE(!cfg.schedule.empty());
    // final plateau sits below the seawater equilibrium pressure at 2 degC
    const double Pe = props::equilibrium_pressure(275.15, cfg.salinity, cfg.materials);
    CHECK(cfg.schedule.pressures.back() < Pe);
    CHECK(Pe > 3.0e6);
    CHECK(Pe < 3.3e6);
}

TEST_CASE("config validation failures")
{
    SUBCASE("missing required key is reported by name")
    {
        const auto p = temp_file("hydresim_missing.cfg");
        std::ofstream(p) << "grid.nz = 4\n";
        try {
            ScenarioConfig::load(p.string());
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("scenario.regime") != std::string::npos);
        }
        fs::remove(p);
    }
    SUBCASE("unknown keys are rejected")
    {
        const auto p = temp_file("hydresim_unknown.cfg");
        std::ofstream(p) << slurp(repo_config("formation.cfg")) << "\nnot.a.key = 1\n";
        CHECK_THROWS_WITH_AS(ScenarioConfig::load(p.string()), doctest::Contains("not.a.key"),
                             ConfigError);
        fs::remove(p);
    }
    SUBCASE("unsorted schedule is rejected")
    {
        auto cfg = ScenarioConfig::load(repo_config("dissociation.cfg"));
        std::swap(cfg.schedule.times[0], cfg.schedule.times[1]);
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
}

TEST_CASE("config round trip through save/load is lossless")
{
    const auto cfg = ScenarioConfig::load(repo_config("dissociation.cfg"));
    const auto p = temp_file("hydresim_roundtrip.cfg");
    cfg.save(p.string());
    const auto cfg2 = ScenarioConfig::load(p.string());
    CHECK(cfg == cfg2);
    fs::remove(p);
}

TEST_CASE("overrides reuse the file grammar")
{
    auto cfg = ScenarioConfig::load(repo_config("formation.cfg"));
    cfg.apply_override("c_dissociation", "5");
    CHECK(cfg.materials.dissociation_law.c == doctest::Approx(5.0));
    cfg.apply_override("initial.P_g", "11 MPa");
    CHECK(cfg.P_g0 == doctest::Approx(11e6));
    CHECK_THROWS_AS(cfg.apply_override("bogus", "1"), ConfigError);
}

TEST_CASE("pressure schedule lookup")
{
    PressureSchedule s;
    s.times = {0.0, 3600.0, 7200.0};
    s.pressures = {9e6, 6e6, 3e6};
    s.validate();
    CHECK(s.at(-10.0, 12e6) == doctest::Approx(12e6)); // before the first step
    CHECK(s.at(0.0, 12e6) == doctest::Approx(9e6));
    CHECK(s.at(5000.0, 12e6) == doctest::Approx(6e6));
    CHECK(s.at(7200.0, 12e6) == doctest::Approx(3e6));
    CHECK(s.at(1e9, 12e6) == doctest::Approx(3e6));
}

TEST_CASE("effective stress controller follows the pore pressure")
{
    CHECK(effective_stress_controller(12.5e6, 1e6) == doctest::Approx(13.5e6));
    CHECK(effective_stress_controller(11.5e6, 1e6) == doctest::Approx(12.5e6));
    CHECK(effective_stress_controller(7e6, 0.0) == doctest::Approx(7e6)); // pure follower
}

TEST_CASE("mini formation run writes the advertised outputs")
{
    auto cfg = tiny_scenario();
    cfg.snapshot_times = {0.0, 600.0};
    const auto dir = (fs::temp_directory_path() / "hydresim_run_out").string();
    fs::remove_all(dir);
    const auto result = run_scenario(cfg, dir, true);

    CHECK(result.stats.steps_accepted == 5);
    CHECK(fs::exists(dir + "/timeseries.csv"));
    CHECK(fs::exists(dir + "/steps.csv"));
    CHECK(fs::exists(dir + "/fig7a_avg_gas_pressure.csv"));
    CHECK(fs::exists(dir + "/fig7b_avg_saturations.csv"));
    CHECK(fs::exists(dir + "/fig7c_volumetric_strain.csv"));
    CHECK(fs::exists(dir + "/run_summary.txt"));
    CHECK(fs::exists(dir + "/snapshot_0000000000s.vtk"));
    CHECK(fs::exists(dir + "/snapshot_0000000600s.vtk"));

    // fig7b carries both saturation columns
    std::ifstream fig7b(dir + "/fig7b_avg_saturations.csv");
    std::string header;
    std::getline(fig7b, header);
    CHECK(header == "t,S_w_avg,S_h_avg");

    // VTK snapshot is a structured grid with the primary fields
    const std::string vtk = slurp(dir + "/snapshot_0000000600s.vtk");
    CHECK(vtk.find("STRUCTURED_GRID") != std::string::npos);
    CHECK(vtk.find("SCALARS S_h double 1") != std::string::npos);
    CHECK(vtk.find("SCALARS E_sh double 1") != std::string::npos);

    // no output directory requested: nothing is written
    const auto quiet = run_scenario(cfg, "", true);
    CHECK(quiet.stats.steps_accepted == 5);
    fs::remove_all(dir);
}

TEST_CASE("mini runs are deterministic byte for byte")
{
    auto cfg = tiny_scenario();
    const auto d1 = (fs::temp_directory_path() / "hydresim_det1").string();
    const auto d2 = (fs::temp_directory_path() / "hydresim_det2").string();
    fs::remove_all(d1);
    fs::remove_all(d2);
    run_scenario(cfg, d1, true);
    run_scenario(cfg, d2, true);
    CHECK(slurp(d1 + "/timeseries.csv") == slurp(d2 + "/timeseries.csv"));
    CHECK(slurp(d1 + "/steps.csv") == slurp(d2 + "/steps.csv"));
    CHECK(!slurp(d1 + "/timeseries.csv").empty());
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("production bookkeeping is internally consistent")
{
    // coarse dissociation scenario: a short drawdown that activates kinetics
    ScenarioConfig cfg;
    cfg.regime = Regime::dissociation;
    cfg.nz = 6;
    cfg.nr = 1;
    cfg.height = 0.36;
    cfg.radius = 0.04;
    cfg.P_g0 = 5e6;
    cfg.S_w0 = 0.61;
    cfg.S_h0 = 0.39;
    cfg.salinity = 0.035;
    cfg.t_end = 3600.0;
    cfg.dt_max = 60.0;
    cfg.dt_init = 60.0;
    cfg.mech_mode = MechControlMode::constant_total_stress;
    cfg.total_stress = 9e6;
    cfg.outlet = Side::top;
    cfg.schedule.times = {0.0, 600.0};
    cfg.schedule.pressures = {4e6, 2.5e6};
    cfg.plots = PlotBundle::none;

    const auto result = run_scenario(cfg, "", true);
    result.series.validate();

    // cumulative production equals the integral of the outlet mass flux
    double sum_kg = 0.0;
    for (const auto& s : result.steps) sum_kg += s.produced_ch4_kg;
    const double mol = sum_kg / cfg.materials.M_CH4;
    CHECK(result.series.rows.back().produced_mol ==
          doctest::Approx(mol).epsilon(1e-10));
    CHECK(result.series.rows.back().produced_sm3 ==
          doctest::Approx(mol * standard_molar_volume()).epsilon(1e-10));

    // drawdown below P_e activated the kinetics and produced gas
    CHECK(result.first_dissociation_time > 0.0);
    CHECK(result.series.rows.back().produced_mol > 0.0);
    CHECK(result.series.rows.back().S_h_avg < 0.39);
}
