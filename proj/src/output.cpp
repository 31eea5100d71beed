#include "hydresim/output.hpp"

#include "hydresim/errors.hpp"
#include "hydresim/transport.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hydresim {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_or_throw(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

void TimeSeries::validate() const
{
    double peak = 0.0;
    for (const auto& r : rows) peak = std::max(peak, r.produced_mol);
    // quiescent periods can show dissolved-gas exchange at solver-noise scale
    const double slack = 1e-6 * std::max(1.0, peak);
    for (size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].t > rows[i - 1].t))
            throw OutOfRangeError("time series is not strictly increasing in t");
        if (rows[i].produced_mol < rows[i - 1].produced_mol - slack)
            throw OutOfRangeError("cumulative production decreased");
    }
}

double standard_molar_volume()
{
    return 8.314462618 * 273.15 / 101325.0; // ~2.2414e-2 m3/mol
}

TimeSeriesRow sample_observables(const CoupledStepper& stepper, const SimulationState& state,
                                 Side outlet_side)
{
    const AxiGrid& grid = stepper.grid();
    const MaterialDB& db = stepper.material_db();
    TimeSeriesRow row;
    row.t = state.time;

    double V = 0, PV = 0, p_sum = 0, t_sum = 0, sw_sum = 0, sh_sum = 0, e_sum = 0;
    row.T_min = state.fields.T[0];
    for (int c = 0; c < grid.num_cells(); ++c) {
        const double v = grid.cell_volume(c);
        const double pv = v * state.fields.phi[c];
        V += v;
        PV += pv;
        p_sum += state.fields.P_g[c] * v;
        t_sum += state.fields.T[c] * v;
        sw_sum += state.fields.S_w[c] * pv;
        sh_sum += state.fields.S_h[c] * pv;
        e_sum += props::composite_young_modulus(state.fields.S_h[c], stepper.regime(), db) * v;
        row.T_min = std::min(row.T_min, state.fields.T[c]);
    }
    row.P_g_avg = p_sum / V;
    row.T_avg = t_sum / V;
    row.S_w_avg = sw_sum / PV;
    row.S_h_avg = sh_sum / PV;
    row.E_sh_avg = e_sum / V;
    row.eps_v = stepper.relative_eps_v(state);
    row.produced_mol = state.produced_ch4_kg / db.M_CH4;
    row.produced_sm3 = row.produced_mol * standard_molar_volume();
    row.hydrate_mol = state.inventory.hydrate / db.molar_mass_hydrate();

    // outlet-adjacent cell pressure (boundary value of Fig. 9a)
    double po_sum = 0;
    int po_n = 0;
    for (const Face& f : grid.faces()) {
        if (f.cell_b >= 0 || f.side != outlet_side) continue;
        po_sum += state.fields.P_g[f.cell_a];
        ++po_n;
    }
    row.outlet_P_g = po_n > 0 ? po_sum / po_n : row.P_g_avg;
    return row;
}

void write_timeseries_csv(const std::string& path, const TimeSeries& series)
{
    auto out = open_or_throw(path);
    out << "t,P_g_avg,S_w_avg,S_h_avg,T_avg,T_min,eps_v,produced_mol,produced_sm3,"
           "outlet_P_g,E_sh_avg,hydrate_mol\n";
    for (const auto& r : series.rows) {
        out << fmt(r.t) << ',' << fmt(r.P_g_avg) << ',' << fmt(r.S_w_avg) << ',' << fmt(r.S_h_avg)
            << ',' << fmt(r.T_avg) << ',' << fmt(r.T_min) << ',' << fmt(r.eps_v) << ','
            << fmt(r.produced_mol) << ',' << fmt(r.produced_sm3) << ',' << fmt(r.outlet_P_g) << ','
            << fmt(r.E_sh_avg) << ',' << fmt(r.hydrate_mol) << '\n';
    }
}

void write_steps_csv(const std::string& path, const std::vector<StepReport>& steps)
{
    auto out = open_or_throw(path);
    out << "t,dt,outer_iterations,newton_iterations,mech_solves,clip_events,"
           "outer_dphi,outer_depsv,ch4_closure_error\n";
    for (const auto& s : steps) {
        out << fmt(s.t) << ',' << fmt(s.dt) << ',' << s.outer_iterations << ','
            << s.newton_iterations_transport << ',' << s.mech_solves << ',' << s.clip_events << ','
            << fmt(s.outer_dphi) << ',' << fmt(s.outer_depsv) << ',' << fmt(s.ch4_closure_error)
            << '\n';
    }
}

FieldSnapshot build_snapshot(const CoupledStepper& stepper, const SimulationState& state)
{
    const AxiGrid& grid = stepper.grid();
    const MaterialDB& db = stepper.material_db();
    const int n = grid.num_cells();

    FieldSnapshot snap;
    snap.time = state.time;
    snap.cell_fields["P_g"] = state.fields.P_g;
    snap.cell_fields["S_w"] = state.fields.S_w;
    snap.cell_fields["S_h"] = state.fields.S_h;
    snap.cell_fields["T"] = state.fields.T;
    snap.cell_fields["phi"] = state.fields.phi;

    std::vector<double> P_c(n), P_w(n), rho_g(n), K_eff(n), E_sh(n), eps_v(n), sigma_m(n);
    for (int c = 0; c < n; ++c) {
        P_c[c] = props::capillary_pressure(state.fields.S_w[c], state.fields.phi[c],
                                           state.fields.S_h[c], db);
        P_w[c] = state.fields.P_g[c] - P_c[c];
        rho_g[c] = props::gas_density(state.fields.P_g[c], state.fields.T[c], db);
        K_eff[c] = props::effective_permeability(state.fields.phi[c], state.fields.S_h[c], db);
        E_sh[c] = props::composite_young_modulus(state.fields.S_h[c], stepper.regime(), db);
        eps_v[c] = state.eps_v_cell[c];
        std::array<double, 4> s{};
        if (!state.mech.stress_eff.empty()) s = state.mech.stress_eff[c];
        sigma_m[c] = (s[0] + s[1] + s[2]) / 3.0;
    }
    snap.cell_fields["P_c"] = std::move(P_c);
    snap.cell_fields["P_w"] = std::move(P_w);
    snap.cell_fields["rho_g"] = std::move(rho_g);
    snap.cell_fields["K_eff"] = std::move(K_eff);
    snap.cell_fields["E_sh"] = std::move(E_sh);
    snap.cell_fields["eps_v"] = std::move(eps_v);
    snap.cell_fields["sigma_eff_mean"] = std::move(sigma_m);
    snap.vertex_fields["u_z"] = state.fields.u_z;
    snap.vertex_fields["u_r"] = state.fields.u_r;
    return snap;
}

void write_vtk(const std::string& path, const AxiGrid& grid, const FieldSnapshot& snap)
{
    auto out = open_or_throw(path);
    const int npz = grid.nz() + 1, npr = grid.nr() + 1;
    out << "# vtk DataFile Version 3.0\n";
    out << "hydresim snapshot t=" << fmt(snap.time) << " s\n";
    out << "ASCII\nDATASET STRUCTURED_GRID\n";
    out << "DIMENSIONS " << npr << ' ' << npz << " 1\n";
    out << "POINTS " << npr * npz << " double\n";
    for (int iz = 0; iz < npz; ++iz)
        for (int ir = 0; ir < npr; ++ir) {
            const int v = grid.vertex_index(iz, ir);
            out << fmt(grid.vertex_r(v)) << ' ' << fmt(grid.vertex_z(v)) << " 0\n";
        }

    out << "POINT_DATA " << npr * npz << "\n";
    for (const auto& [name, field] : snap.vertex_fields) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int iz = 0; iz < npz; ++iz)
            for (int ir = 0; ir < npr; ++ir) out << fmt(field[grid.vertex_index(iz, ir)]) << '\n';
    }

    out << "CELL_DATA " << grid.num_cells() << "\n";
    for (const auto& [name, field] : snap.cell_fields) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int iz = 0; iz < grid.nz(); ++iz)
            for (int ir = 0; ir < grid.nr(); ++ir) out << fmt(field[grid.cell_index(iz, ir)]) << '\n';
    }
}

void write_plot_bundle(const std::string& dir, Regime regime, const TimeSeries& series)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    if (regime == Regime::formation) {
        {
            auto out = open_or_throw(dir + "/fig7a_avg_gas_pressure.csv");
            out << "t,P_g_avg\n";
            for (const auto& r : series.rows) out << fmt(r.t) << ',' << fmt(r.P_g_avg) << '\n';
        }
        {
            auto out = open_or_throw(dir + "/fig7b_avg_saturations.csv");
            out << "t,S_w_avg,S_h_avg\n";
            for (const auto& r : series.rows)
                out << fmt(r.t) << ',' << fmt(r.S_w_avg) << ',' << fmt(r.S_h_avg) << '\n';
        }
        {
            auto out = open_or_throw(dir + "/fig7c_volumetric_strain.csv");
            out << "t,eps_v\n";
            for (const auto& r : series.rows) out << fmt(r.t) << ',' << fmt(r.eps_v) << '\n';
        }
    } else {
        {
            auto out = open_or_throw(dir + "/fig9a_outlet_gas_pressure.csv");
            out << "t,outlet_P_g\n";
            for (const auto& r : series.rows) out << fmt(r.t) << ',' << fmt(r.outlet_P_g) << '\n';
        }
        {
            auto out = open_or_throw(dir + "/fig9b_cumulative_production.csv");
            out << "t,produced_mol,produced_sm3\n";
            for (const auto& r : series.rows)
                out << fmt(r.t) << ',' << fmt(r.produced_mol) << ',' << fmt(r.produced_sm3) << '\n';
        }
        {
            auto out = open_or_throw(dir + "/fig9c_volumetric_strain.csv");
            out << "t,eps_v\n";
            for (const auto& r : series.rows) out << fmt(r.t) << ',' << fmt(r.eps_v) << '\n';
        }
        {
            auto out = open_or_throw(dir + "/fig9d_temperature.csv");
            out << "t,T_avg,T_min\n";
            for (const auto& r : series.rows)
                out << fmt(r.t) << ',' << fmt(r.T_avg) << ',' << fmt(r.T_min) << '\n';
        }
    }
}

void write_sweep_eps_v(const std::string& path, const std::vector<std::string>& labels,
                       const std::vector<TimeSeries>& series)
{
    if (labels.size() != series.size())
        throw DimensionError("sweep eps_v writer: label/series count mismatch");
    if (series.empty()) return;
    auto out = open_or_throw(path);
    out << "t";
    for (const auto& l : labels) out << ",eps_v_" << l;
    out << '\n';
    const size_t nrows = series.front().rows.size();
    for (size_t i = 0; i < nrows; ++i) {
        out << fmt(series.front().rows[i].t);
        for (const auto& s : series) {
            // series may differ in length if a run rejected steps; clamp
            const auto& r = s.rows[std::min(i, s.rows.size() - 1)];
            out << ',' << fmt(r.eps_v);
        }
        out << '\n';
    }
}

} // namespace hydresim
