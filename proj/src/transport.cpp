#include "hydresim/transport.hpp"

#include "hydresim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hydresim {

const SideBC& TransportBCs::side(Side s) const
{
    switch (s) {
    case Side::bottom: return bottom;
    case Side::top: return top;
    case Side::outer: return outer;
    default: {
        static const SideBC closed{}; // axis: no-flow, adiabatic
        return closed;
    }
    }
}

namespace {

/// Everything a face needs from one side. Geometry stays double; state
/// quantities carry the scalar type so the Jacobian picks up the full
/// two-cell stencil.
template <class S>
struct FaceSide {
    S P_g, P_w, T;
    S rho_g, rho_w;
    S lam_w, lam_g; ///< phase mobilities k_r / mu
    S x_wm, x_ww;   ///< aqueous mass fractions (CH4, H2O)
    S x_gm, x_gw;   ///< gas mass fractions (CH4, H2O)
    S h_w, h_g;     ///< specific enthalpies
    S kc;           ///< bulk thermal conductivity
    S K;            ///< effective permeability
    S phiSw, phiSg; ///< fluid volume fractions, for diffusion
};

/// Per-cell property evaluation shared by residual and Jacobian paths.
template <class S>
struct CellEval {
    S P_g, S_w, S_h, T, S_g;
    S P_c, P_w;
    S m_ch4, m_h2o, m_hyd, energy; ///< storage per bulk volume
    FaceSide<S> side;
};

template <class S>
CellEval<S> evaluate_cell(const S& P_g, const S& S_w, const S& S_h, const S& T, double phi,
                          const MaterialDB& db, bool* pc_capped)
{
    using namespace scalar_ops;
    CellEval<S> c;
    c.P_g = P_g;
    c.S_w = S_w;
    c.S_h = S_h;
    c.T = T;
    c.S_g = 1.0 - S_w - S_h;

    c.P_c = props::capillary_pressure(S_w, S(phi), S_h, db, pc_capped);
    c.P_w = P_g - c.P_c;

    const S rho_g = props::gas_density(P_g, T, db);
    const S rho_w = S(db.rho_w_liquid);

    // compositions (mole -> mass fractions)
    const S y_w = props::vapor_mole_fraction(P_g, T, db);
    const S den_g = y_w * db.M_H2O + (1.0 - y_w) * db.M_CH4;
    c.side.x_gw = y_w * db.M_H2O / den_g;
    c.side.x_gm = 1.0 - c.side.x_gw;
    const S z_m = props::dissolved_mole_fraction(P_g, T, db);
    const S den_w = z_m * db.M_CH4 + (1.0 - z_m) * db.M_H2O;
    c.side.x_wm = z_m * db.M_CH4 / den_w;
    c.side.x_ww = 1.0 - c.side.x_wm;

    // storage per bulk volume
    c.m_ch4 = phi * (rho_g * c.S_g * c.side.x_gm + rho_w * S_w * c.side.x_wm);
    c.m_h2o = phi * (rho_w * S_w * c.side.x_ww + rho_g * c.S_g * c.side.x_gw);
    c.m_hyd = phi * db.rho_h * S_h;

    const S dT = T - db.T_ref_energy;
    const S cv_g = props::heat_capacity_gas_cv(T, db);
    const double cv_w = props::heat_capacity_water_cv(db);
    c.energy = phi * (rho_g * c.S_g * cv_g + rho_w * S_w * cv_w + db.rho_h * S_h * db.Cv_h) * dT +
               (1.0 - phi) * db.rho_s * db.Cv_s * dT;

    // flux-side quantities
    const auto kr = props::relative_permeabilities(S_w, S_h, db);
    c.side.P_g = P_g;
    c.side.P_w = c.P_w;
    c.side.T = T;
    c.side.rho_g = rho_g;
    c.side.rho_w = rho_w;
    c.side.lam_w = kr.k_rw / props::viscosity_water(T);
    c.side.lam_g = kr.k_rg / props::viscosity_gas(T);
    // transported specific energy matches the stored one so that mass
    // exchange at uniform temperature is thermally neutral
    c.side.h_w = cv_w * dT;
    c.side.h_g = cv_g * dT;
    c.side.kc = phi * (c.S_g * props::thermal_conductivity_gas(T) +
                       S_w * props::thermal_conductivity_water(T) + S_h * db.k_c_h) +
                (1.0 - phi) * db.k_c_s;
    c.side.K = props::effective_permeability(S(phi), S_h, db);
    c.side.phiSw = phi * S_w;
    c.side.phiSg = phi * c.S_g;
    return c;
}

template <class S>
struct FaceFluxes {
    S ch4{0.0}, h2o{0.0}, heat{0.0}; ///< kg/s, kg/s, W; positive a -> b
};

template <class S>
S harmonic(const S& a, const S& b)
{
    if (value_of(a) <= 0.0 || value_of(b) <= 0.0) return S(0.0);
    return a * b / (a + b);
}

/// TPFA flux across one face. Transmissibility is the harmonic mean of the
/// one-sided K A / d halves; mobilities and all transported quantities come
/// from the upwind cell selected by the sign of the phase potential drop.
template <class S>
FaceFluxes<S> face_flux(const FaceSide<S>& a, const FaceSide<S>& b, double geo_a, double geo_b,
                        double dz_ab, const TransportOptions& opt, bool with_conduction,
                        double diff_geo)
{
    using namespace scalar_ops;
    FaceFluxes<S> f;

    const S trans = harmonic(a.K * geo_a, b.K * geo_b);
    const double g = opt.gravity ? opt.gravity_accel : 0.0;

    // aqueous phase
    {
        const S dphi = (a.P_w - b.P_w) - 0.5 * (a.rho_w + b.rho_w) * g * dz_ab;
        const FaceSide<S>& up = value_of(dphi) >= 0.0 ? a : b;
        const S q = trans * up.lam_w * dphi; // m3/s
        f.ch4 += q * up.rho_w * up.x_wm;
        f.h2o += q * up.rho_w * up.x_ww;
        f.heat += q * up.rho_w * up.h_w;
    }
    // gas phase
    {
        const S dphi = (a.P_g - b.P_g) - 0.5 * (a.rho_g + b.rho_g) * g * dz_ab;
        const FaceSide<S>& up = value_of(dphi) >= 0.0 ? a : b;
        const S q = trans * up.lam_g * dphi;
        f.ch4 += q * up.rho_g * up.x_gm;
        f.h2o += q * up.rho_g * up.x_gw;
        f.heat += q * up.rho_g * up.h_g;
    }
    if (with_conduction) f.heat += harmonic(a.kc * geo_a, b.kc * geo_b) * (a.T - b.T);

    // binary diffusion within each mobile phase (optional)
    if (diff_geo > 0.0) {
        const S jw = diff_geo * 0.5 * (a.phiSw + b.phiSw) * 0.5 * (a.rho_w + b.rho_w) *
                     (a.x_wm - b.x_wm);
        const S jg = diff_geo * 0.5 * (a.phiSg + b.phiSg) * 0.5 * (a.rho_g + b.rho_g) *
                     (a.x_gm - b.x_gm);
        f.ch4 += jw + jg;
        f.h2o -= jw + jg;
    }
    return f;
}

/// Boundary ghost built from a Dirichlet flow BC. The ghost capillary
/// pressure follows the cell (free-drainage convention), so P_w at the
/// boundary moves with the cell state; everything else is boundary data.
template <class S>
FaceSide<S> make_ghost(const SideBC& bc, const CellEval<S>& cell, const MaterialDB& db)
{
    using namespace scalar_ops;
    FaceSide<S> g;
    const double P = bc.flow.P_g;
    const double T =
        bc.thermal.kind == ThermalBC::Kind::dirichlet ? bc.thermal.T : value_of(cell.T);
    const double S_w_in = bc.flow.S_w_inflow;

    g.P_g = S(P);
    g.P_w = S(P) - cell.P_c;
    g.T = S(T);
    g.rho_g = S(props::gas_density(P, T, db));
    g.rho_w = S(db.rho_w_liquid);
    const auto kr = props::relative_permeabilities(S_w_in, 0.0, db);
    g.lam_w = S(kr.k_rw / props::viscosity_water(T));
    g.lam_g = S(kr.k_rg / props::viscosity_gas(T));
    const double y_w = props::vapor_mole_fraction(P, T, db);
    const double den_g = y_w * db.M_H2O + (1.0 - y_w) * db.M_CH4;
    g.x_gw = S(y_w * db.M_H2O / den_g);
    g.x_gm = 1.0 - g.x_gw;
    const double z_m = props::dissolved_mole_fraction(P, T, db);
    const double den_w = z_m * db.M_CH4 + (1.0 - z_m) * db.M_H2O;
    g.x_wm = S(z_m * db.M_CH4 / den_w);
    g.x_ww = 1.0 - g.x_wm;
    const double dT = T - db.T_ref_energy;
    g.h_w = S(props::heat_capacity_water_cv(db) * dT);
    g.h_g = S(props::heat_capacity_gas_cv(T, db) * dT);
    g.kc = cell.side.kc; // one-sided conduction uses the cell conductivity
    g.K = cell.side.K;
    g.phiSw = cell.side.phiSw;
    g.phiSg = cell.side.phiSg;
    return g;
}

inline void widen_side(const FaceSide<Dual<4>>& in, int offset, FaceSide<Dual<8>>& out)
{
    out.P_g = widen<8>(in.P_g, offset);
    out.P_w = widen<8>(in.P_w, offset);
    out.T = widen<8>(in.T, offset);
    out.rho_g = widen<8>(in.rho_g, offset);
    out.rho_w = widen<8>(in.rho_w, offset);
    out.lam_w = widen<8>(in.lam_w, offset);
    out.lam_g = widen<8>(in.lam_g, offset);
    out.x_wm = widen<8>(in.x_wm, offset);
    out.x_ww = widen<8>(in.x_ww, offset);
    out.x_gm = widen<8>(in.x_gm, offset);
    out.x_gw = widen<8>(in.x_gw, offset);
    out.h_w = widen<8>(in.h_w, offset);
    out.h_g = widen<8>(in.h_g, offset);
    out.kc = widen<8>(in.kc, offset);
    out.K = widen<8>(in.K, offset);
    out.phiSw = widen<8>(in.phiSw, offset);
    out.phiSg = widen<8>(in.phiSg, offset);
}

} // namespace

TransportSystem::TransportSystem(const AxiGrid& grid, const MaterialDB& db,
                                 const KineticParams& kp, TransportOptions options)
    : grid_(grid), db_(db), kp_(kp), options_(options)
{
}

Vector TransportSystem::pack(const PrimaryState& s)
{
    const int n = static_cast<int>(s.P_g.size());
    Vector x(4 * n);
    for (int i = 0; i < n; ++i) {
        x[4 * i + 0] = s.P_g[i];
        x[4 * i + 1] = s.S_w[i];
        x[4 * i + 2] = s.S_h[i];
        x[4 * i + 3] = s.T[i];
    }
    return x;
}

void TransportSystem::unpack(const Vector& x, PrimaryState& s) const
{
    const int n = grid_.num_cells();
    if (x.size() != 4 * n) throw DimensionError("transport unknown vector has wrong length");
    for (int i = 0; i < n; ++i) {
        s.P_g[i] = x[4 * i + 0];
        s.S_w[i] = x[4 * i + 1];
        s.S_h[i] = x[4 * i + 2];
        s.T[i] = x[4 * i + 3];
    }
}

void TransportSystem::begin_step(const PrimaryState& old_state, double dt)
{
    if (!(dt > 0.0)) throw ConfigError("transport step needs dt > 0");
    dt_ = dt;
    phi_ = old_state.phi;

    const int n = grid_.num_cells();
    old_m_.assign(4 * n, 0.0);
    double s_ch4 = 1e-6, s_h2o = 1e-6, s_hyd = 1e-6, s_en = 1.0;
    for (int i = 0; i < n; ++i) {
        const auto c = evaluate_cell<double>(old_state.P_g[i], old_state.S_w[i], old_state.S_h[i],
                                             old_state.T[i], old_state.phi[i], db_, nullptr);
        old_m_[4 * i + 0] = c.m_ch4;
        old_m_[4 * i + 1] = c.m_h2o;
        old_m_[4 * i + 2] = c.m_hyd;
        old_m_[4 * i + 3] = c.energy;
        const double mh = c.m_hyd;
        s_ch4 = std::max(s_ch4, c.m_ch4 + mh * db_.M_CH4 / db_.molar_mass_hydrate());
        s_h2o = std::max(s_h2o, c.m_h2o + mh * db_.N_hyd * db_.M_H2O / db_.molar_mass_hydrate());
        s_hyd = std::max(s_hyd, old_state.phi[i] * db_.rho_h);
        // energy scale: one kelvin worth of bulk heat capacity
        const double cv_bulk =
            old_state.phi[i] *
                (c.S_g * value_of(c.side.rho_g) * props::heat_capacity_gas_cv(old_state.T[i], db_) +
                 old_state.S_w[i] * db_.rho_w_liquid * props::heat_capacity_water_cv(db_) +
                 old_state.S_h[i] * db_.rho_h * db_.Cv_h) +
            (1.0 - old_state.phi[i]) * db_.rho_s * db_.Cv_s;
        s_en = std::max(s_en, cv_bulk);
    }

    weights_.resize(4 * n);
    for (int i = 0; i < n; ++i) {
        weights_[4 * i + 0] = dt / s_ch4;
        weights_[4 * i + 1] = dt / s_h2o;
        weights_[4 * i + 2] = dt / s_hyd;
        weights_[4 * i + 3] = dt / s_en;
    }
}

void TransportSystem::set_porosity_iterate(const std::vector<double>& phi)
{
    if (static_cast<int>(phi.size()) != grid_.num_cells())
        throw DimensionError("porosity iterate has wrong length");
    phi_ = phi;
}

Vector TransportSystem::equation_weights() const { return weights_; }

Vector TransportSystem::residual(const Vector& x) const
{
    const int n = grid_.num_cells();
    if (x.size() != 4 * n) throw DimensionError("transport unknown vector has wrong length");
    if (old_m_.empty()) throw SolverError("residual requested before begin_step");
    Vector r = Vector::Zero(4 * n);

    std::vector<CellEval<double>> cells(n);
    for (int i = 0; i < n; ++i) {
        bool capped = false;
        KineticSource src;
        try {
            cells[i] = evaluate_cell<double>(x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3],
                                             phi_[i], db_, &capped);
            src = kinetics::phase_change_rates<double>(x[4 * i], x[4 * i + 3], salinity_,
                                                       x[4 * i + 1], x[4 * i + 2], phi_[i], db_,
                                                       kp_);
        } catch (const std::exception& e) {
            throw SolverError("transport assembly failed at cell " + std::to_string(i) + ": " +
                              e.what());
        }
        if (capped) ++pc_cap_events_;
        r[4 * i + 0] = (cells[i].m_ch4 - old_m_[4 * i + 0]) / dt_ - src.g_CH4;
        r[4 * i + 1] = (cells[i].m_h2o - old_m_[4 * i + 1]) / dt_ - src.g_H2O;
        r[4 * i + 2] = (cells[i].m_hyd - old_m_[4 * i + 2]) / dt_ - src.g_h;
        r[4 * i + 3] = (cells[i].energy - old_m_[4 * i + 3]) / dt_ - src.Q_h;
    }

    for (const Face& face : grid_.faces()) {
        if (face.area <= 0.0) continue;
        const int a = face.cell_a;
        const double diff_geo =
            options_.diffusion_D > 0.0
                ? options_.diffusion_D * face.area / (face.dist_a + face.dist_b)
                : 0.0;
        if (face.cell_b >= 0) {
            const int b = face.cell_b;
            const double dz_ab = face.axial ? grid_.cell_center_z(a) - grid_.cell_center_z(b) : 0.0;
            const auto f =
                face_flux<double>(cells[a].side, cells[b].side, face.area / face.dist_a,
                                  face.area / face.dist_b, dz_ab, options_, options_.conduction,
                                  diff_geo);
            const double Va = grid_.cell_volume(a), Vb = grid_.cell_volume(b);
            r[4 * a + 0] += f.ch4 / Va;
            r[4 * a + 1] += f.h2o / Va;
            r[4 * a + 3] += f.heat / Va;
            r[4 * b + 0] -= f.ch4 / Vb;
            r[4 * b + 1] -= f.h2o / Vb;
            r[4 * b + 3] -= f.heat / Vb;
        } else {
            const SideBC& bc = bcs_.side(face.side);
            const double Va = grid_.cell_volume(a);
            const double geo = face.area / face.dist_a;
            const double dz_ab = face.axial ? grid_.cell_center_z(a) - face.z : 0.0;
            if (bc.flow.kind == FlowBC::Kind::dirichlet) {
                const auto ghost = make_ghost<double>(bc, cells[a], db_);
                // the boundary value sits on the face: one-sided transmissibility
                const auto f = face_flux<double>(
                    cells[a].side, ghost, 2.0 * geo, 2.0 * geo, dz_ab, options_,
                    options_.conduction && bc.thermal.kind == ThermalBC::Kind::dirichlet,
                    diff_geo);
                r[4 * a + 0] += f.ch4 / Va;
                r[4 * a + 1] += f.h2o / Va;
                r[4 * a + 3] += f.heat / Va;
            } else if (options_.conduction && bc.thermal.kind == ThermalBC::Kind::dirichlet) {
                const double tc = cells[a].side.kc * geo;
                r[4 * a + 3] += tc * (x[4 * a + 3] - bc.thermal.T) / Va;
            }
        }
    }
    return r;
}

void TransportSystem::jacobian(const Vector& x, SparseMatrix& J) const
{
    const int n = grid_.num_cells();
    if (old_m_.empty()) throw SolverError("jacobian requested before begin_step");
    J.reset(4 * n, 4 * n);

    std::vector<CellEval<Dual<4>>> cells(n);
    double block[16];
    for (int i = 0; i < n; ++i) {
        const Dual<4> P(x[4 * i + 0], 0), Sw(x[4 * i + 1], 1), Sh(x[4 * i + 2], 2),
            T(x[4 * i + 3], 3);
        KineticSourceT<Dual<4>> src;
        try {
            cells[i] = evaluate_cell<Dual<4>>(P, Sw, Sh, T, phi_[i], db_, nullptr);
            src = kinetics::phase_change_rates<Dual<4>>(P, T, salinity_, Sw, Sh, Dual<4>(phi_[i]),
                                                        db_, kp_);
        } catch (const std::exception& e) {
            throw SolverError("transport assembly failed at cell " + std::to_string(i) + ": " +
                              e.what());
        }
        const Dual<4> rows[4] = {cells[i].m_ch4 / dt_ - src.g_CH4,
                                 cells[i].m_h2o / dt_ - src.g_H2O, cells[i].m_hyd / dt_ - src.g_h,
                                 cells[i].energy / dt_ - src.Q_h};
        for (int e = 0; e < 4; ++e)
            for (int v = 0; v < 4; ++v) block[4 * e + v] = rows[e].d[v];
        J.add_block<4>(i, i, block);
    }

    FaceSide<Dual<8>> wa, wb;
    for (const Face& face : grid_.faces()) {
        if (face.area <= 0.0) continue;
        const int a = face.cell_a;
        const double diff_geo =
            options_.diffusion_D > 0.0
                ? options_.diffusion_D * face.area / (face.dist_a + face.dist_b)
                : 0.0;
        if (face.cell_b >= 0) {
            const int b = face.cell_b;
            widen_side(cells[a].side, 0, wa);
            widen_side(cells[b].side, 4, wb);
            const double dz_ab = face.axial ? grid_.cell_center_z(a) - grid_.cell_center_z(b) : 0.0;
            const auto f = face_flux<Dual<8>>(wa, wb, face.area / face.dist_a,
                                              face.area / face.dist_b, dz_ab, options_,
                                              options_.conduction, diff_geo);
            const double Va = grid_.cell_volume(a), Vb = grid_.cell_volume(b);
            const Dual<8>* fluxes[3] = {&f.ch4, &f.h2o, &f.heat};
            const int rows[3] = {0, 1, 3};
            for (int k = 0; k < 3; ++k) {
                for (int v = 0; v < 4; ++v) {
                    const double da = fluxes[k]->d[v];
                    const double dbv = fluxes[k]->d[4 + v];
                    if (da != 0.0) {
                        J.add(4 * a + rows[k], 4 * a + v, da / Va);
                        J.add(4 * b + rows[k], 4 * a + v, -da / Vb);
                    }
                    if (dbv != 0.0) {
                        J.add(4 * a + rows[k], 4 * b + v, dbv / Va);
                        J.add(4 * b + rows[k], 4 * b + v, -dbv / Vb);
                    }
                }
            }
        } else {
            const SideBC& bc = bcs_.side(face.side);
            const double Va = grid_.cell_volume(a);
            const double geo = face.area / face.dist_a;
            const double dz_ab = face.axial ? grid_.cell_center_z(a) - face.z : 0.0;
            if (bc.flow.kind == FlowBC::Kind::dirichlet) {
                const auto ghost = make_ghost<Dual<4>>(bc, cells[a], db_);
                const auto f = face_flux<Dual<4>>(
                    cells[a].side, ghost, 2.0 * geo, 2.0 * geo, dz_ab, options_,
                    options_.conduction && bc.thermal.kind == ThermalBC::Kind::dirichlet,
                    diff_geo);
                const Dual<4>* fluxes[3] = {&f.ch4, &f.h2o, &f.heat};
                const int rows[3] = {0, 1, 3};
                for (int k = 0; k < 3; ++k)
                    for (int v = 0; v < 4; ++v)
                        if (fluxes[k]->d[v] != 0.0)
                            J.add(4 * a + rows[k], 4 * a + v, fluxes[k]->d[v] / Va);
            } else if (options_.conduction && bc.thermal.kind == ThermalBC::Kind::dirichlet) {
                const Dual<4> q = cells[a].side.kc * geo * (cells[a].T - bc.thermal.T);
                for (int v = 0; v < 4; ++v)
                    if (q.d[v] != 0.0) J.add(4 * a + 3, 4 * a + v, q.d[v] / Va);
            }
        }
    }
}

int TransportSystem::clip(Vector& x) const
{
    int clips = 0;
    const int n = grid_.num_cells();
    for (int i = 0; i < n; ++i) {
        double& P = x[4 * i + 0];
        double& Sw = x[4 * i + 1];
        double& Sh = x[4 * i + 2];
        double& T = x[4 * i + 3];
        auto bound = [&clips](double& v, double lo, double hi) {
            if (v < lo) {
                v = lo;
                ++clips;
            } else if (v > hi) {
                v = hi;
                ++clips;
            }
        };
        bound(P, 1e3, 1e9);
        bound(T, 220.0, 400.0);
        bound(Sw, 0.0, 1.0);
        bound(Sh, 0.0, 1.0);
        const double sum = Sw + Sh;
        if (sum > 1.0) {
            Sw /= sum;
            Sh /= sum;
            ++clips;
        }
    }
    return clips;
}

NewtonReport TransportSystem::solve_step(Vector& x, SparseDirectSolver& solver) const
{
    auto res = [this](const Vector& v) { return residual(v); };
    auto jac = [this](const Vector& v, SparseMatrix& J) { jacobian(v, J); };
    auto proj = [this](Vector& v) { return clip(v); };
    return newton_solve(res, jac, x, options_.newton, solver, proj, &weights_);
}

Inventory TransportSystem::inventory(const Vector& x, const std::vector<double>& phi) const
{
    Inventory inv;
    const int n = grid_.num_cells();
    const double M_h = db_.molar_mass_hydrate();
    for (int i = 0; i < n; ++i) {
        const auto c = evaluate_cell<double>(x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3],
                                             phi[i], db_, nullptr);
        const double V = grid_.cell_volume(i);
        inv.ch4_fluid += c.m_ch4 * V;
        inv.h2o_fluid += c.m_h2o * V;
        inv.hydrate += c.m_hyd * V;
        inv.energy += c.energy * V;
        inv.ch4_total += (c.m_ch4 + c.m_hyd * db_.M_CH4 / M_h) * V;
        inv.h2o_total += (c.m_h2o + c.m_hyd * db_.N_hyd * db_.M_H2O / M_h) * V;
    }
    return inv;
}

BoundaryFluxes TransportSystem::boundary_fluxes(const Vector& x) const
{
    BoundaryFluxes out;
    for (const Face& face : grid_.faces()) {
        if (face.cell_b >= 0 || face.area <= 0.0) continue;
        const SideBC& bc = bcs_.side(face.side);
        if (bc.flow.kind != FlowBC::Kind::dirichlet) continue;
        const int a = face.cell_a;
        const auto cell = evaluate_cell<double>(x[4 * a], x[4 * a + 1], x[4 * a + 2], x[4 * a + 3],
                                                phi_[a], db_, nullptr);
        const auto ghost = make_ghost<double>(bc, cell, db_);
        const double geo = face.area / face.dist_a;
        const double dz_ab = face.axial ? grid_.cell_center_z(a) - face.z : 0.0;
        const double diff_geo =
            options_.diffusion_D > 0.0 ? options_.diffusion_D * face.area / face.dist_a : 0.0;
        const auto f = face_flux<double>(
            cell.side, ghost, 2.0 * geo, 2.0 * geo, dz_ab, options_,
            options_.conduction && bc.thermal.kind == ThermalBC::Kind::dirichlet, diff_geo);
        out.ch4_out += f.ch4;
        out.h2o_out += f.h2o;
        out.heat_out += f.heat;
    }
    return out;
}

KineticSource TransportSystem::cell_kinetics(const Vector& x, int cell) const
{
    return kinetics::phase_change_rates<double>(x[4 * cell], x[4 * cell + 3], salinity_,
                                                x[4 * cell + 1], x[4 * cell + 2], phi_[cell], db_,
                                                kp_);
}

std::pair<double, double> TransportSystem::cell_pressures(const Vector& x, int cell) const
{
    const auto c = evaluate_cell<double>(x[4 * cell], x[4 * cell + 1], x[4 * cell + 2],
                                         x[4 * cell + 3], phi_[cell], db_, nullptr);
    return {c.P_c, c.P_w};
}

} // namespace hydresim
