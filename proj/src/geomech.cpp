#include "hydresim/geomech.hpp"

#include "hydresim/errors.hpp"

#include <cmath>
#include <numbers>

namespace hydresim {

namespace {

// 2-point Gauss rule on [-1, 1]
constexpr double kGauss = 0.57735026918962576; // 1/sqrt(3)
const double gp[2] = {-kGauss, kGauss};

// Q1 shape functions on the reference square, node order
// (-1,-1), (1,-1), (1,1), (-1,1) mapped to (z0,r0),(z1,r0),(z1,r1),(z0,r1)
inline void shape(double xi, double eta, double N[4], double dNdxi[4], double dNdeta[4])
{
    N[0] = 0.25 * (1 - xi) * (1 - eta);
    N[1] = 0.25 * (1 + xi) * (1 - eta);
    N[2] = 0.25 * (1 + xi) * (1 + eta);
    N[3] = 0.25 * (1 - xi) * (1 + eta);
    dNdxi[0] = -0.25 * (1 - eta);
    dNdxi[1] = 0.25 * (1 - eta);
    dNdxi[2] = 0.25 * (1 + eta);
    dNdxi[3] = -0.25 * (1 + eta);
    dNdeta[0] = -0.25 * (1 - xi);
    dNdeta[1] = -0.25 * (1 + xi);
    dNdeta[2] = 0.25 * (1 + xi);
    dNdeta[3] = 0.25 * (1 - xi);
}

} // namespace

PoroelasticFem::PoroelasticFem(const AxiGrid& grid, const MaterialDB& db) : grid_(grid), db_(db)
{
    // constraints: u_z = 0 on z = 0 (bottom roller), u_r = 0 on r = 0 (axis)
    const int ndof = 2 * grid.num_vertices();
    dof_map_.assign(ndof, -1);
    for (int iz = 0; iz <= grid.nz(); ++iz) {
        for (int ir = 0; ir <= grid.nr(); ++ir) {
            const int v = grid.vertex_index(iz, ir);
            const bool fix_z = (iz == 0);
            const bool fix_r = (ir == 0);
            if (!fix_z) dof_map_[2 * v] = n_free_++;
            if (!fix_r) dof_map_[2 * v + 1] = n_free_++;
        }
    }
}

void PoroelasticFem::element_matrices(int cell, double E, double alpha_p, double nu,
                                      double Ke[8][8], double fe[8]) const
{
    const auto& verts = grid_.cell_vertices(cell);
    double zc[4], rc[4];
    for (int k = 0; k < 4; ++k) {
        zc[k] = grid_.vertex_z(verts[k]);
        rc[k] = grid_.vertex_r(verts[k]);
    }

    const auto lame = props::lame_parameters(E, nu);
    const double la = lame.lambda, mu = lame.mu;
    // D in (zz, rr, tt, zr) with engineering shear
    const double D[4][4] = {{la + 2 * mu, la, la, 0},
                            {la, la + 2 * mu, la, 0},
                            {la, la, la + 2 * mu, 0},
                            {0, 0, 0, mu}};

    for (int i = 0; i < 8; ++i) {
        fe[i] = 0.0;
        for (int j = 0; j < 8; ++j) Ke[i][j] = 0.0;
    }

    for (double xi : gp) {
        for (double eta : gp) {
            double N[4], dNdxi[4], dNdeta[4];
            shape(xi, eta, N, dNdxi, dNdeta);

            // Jacobian of (z, r) w.r.t. (xi, eta); rectangular => diagonal
            double J00 = 0, J01 = 0, J10 = 0, J11 = 0, r = 0;
            for (int k = 0; k < 4; ++k) {
                J00 += dNdxi[k] * zc[k];
                J01 += dNdxi[k] * rc[k];
                J10 += dNdeta[k] * zc[k];
                J11 += dNdeta[k] * rc[k];
                r += N[k] * rc[k];
            }
            const double detJ = J00 * J11 - J01 * J10;
            const double inv00 = J11 / detJ, inv01 = -J01 / detJ;
            const double inv10 = -J10 / detJ, inv11 = J00 / detJ;

            double dNdz[4], dNdr[4];
            for (int k = 0; k < 4; ++k) {
                dNdz[k] = inv00 * dNdxi[k] + inv10 * dNdeta[k];
                dNdr[k] = inv01 * dNdxi[k] + inv11 * dNdeta[k];
            }

            // B (4 x 8): strain = B * [u_z1, u_r1, ..., u_z4, u_r4]
            double B[4][8] = {};
            for (int k = 0; k < 4; ++k) {
                B[0][2 * k] = dNdz[k];       // eps_zz
                B[1][2 * k + 1] = dNdr[k];   // eps_rr
                B[2][2 * k + 1] = N[k] / r;  // eps_tt (hoop)
                B[3][2 * k] = dNdr[k];       // gamma_zr
                B[3][2 * k + 1] = dNdz[k];
            }

            const double w = 2.0 * std::numbers::pi * r * detJ; // unit gauss weights

            double DB[4][8];
            for (int a = 0; a < 4; ++a)
                for (int j = 0; j < 8; ++j) {
                    DB[a][j] = 0;
                    for (int b = 0; b < 4; ++b) DB[a][j] += D[a][b] * B[b][j];
                }
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) {
                    double kij = 0;
                    for (int a = 0; a < 4; ++a) kij += B[a][i] * DB[a][j];
                    Ke[i][j] += kij * w;
                }

            // pore pressure load: + integral B^T (alpha P) m, m = (1,1,1,0)
            for (int i = 0; i < 8; ++i)
                fe[i] += alpha_p * (B[0][i] + B[1][i] + B[2][i]) * w;
        }
    }
}

MechState PoroelasticFem::solve(const std::vector<double>& E_sh,
                                const std::vector<double>& pore_pressure, const MechLoads& loads)
{
    const int ncells = grid_.num_cells();
    if (static_cast<int>(E_sh.size()) != ncells || static_cast<int>(pore_pressure.size()) != ncells)
        throw DimensionError("poroelastic solve: per-cell input length mismatch");
    if (n_free_ == 0) throw SolverError("poroelastic system has no free dofs");

    SparseMatrix K(n_free_, n_free_);
    Vector f = Vector::Zero(n_free_);

    if (loads.gravity && static_cast<int>(loads.bulk_density.size()) != ncells)
        throw DimensionError("gravity body force needs a per-cell bulk density");

    double Ke[8][8], fe[8];
    for (int c = 0; c < ncells; ++c) {
        element_matrices(c, E_sh[c], db_.alpha_biot * pore_pressure[c], db_.nu_sh, Ke, fe);
        if (loads.gravity) {
            // downward body force spread over the element (lumped by volume)
            const double fz = -loads.bulk_density[c] * loads.gravity_accel *
                              grid_.cell_volume(c) / 4.0;
            for (int k = 0; k < 4; ++k) fe[2 * k] += fz;
        }
        const auto& verts = grid_.cell_vertices(c);
        int gdof[8];
        for (int k = 0; k < 4; ++k) {
            gdof[2 * k] = dof_map_[2 * verts[k]];
            gdof[2 * k + 1] = dof_map_[2 * verts[k] + 1];
        }
        for (int i = 0; i < 8; ++i) {
            if (gdof[i] < 0) continue;
            f[gdof[i]] += fe[i];
            for (int j = 0; j < 8; ++j) {
                if (gdof[j] < 0) continue; // constrained dofs carry u = 0
                K.add(gdof[i], gdof[j], Ke[i][j]);
            }
        }
    }

    // boundary tractions (compression positive -> negative normal traction)
    const double two_pi = 2.0 * std::numbers::pi;
    if (loads.sigma_top != 0.0) {
        const int iz = grid_.nz();
        for (int ir = 0; ir < grid_.nr(); ++ir) {
            const int va = grid_.vertex_index(iz, ir);
            const int vb = grid_.vertex_index(iz, ir + 1);
            const double ra = grid_.vertex_r(va), rb = grid_.vertex_r(vb);
            const double half = 0.5 * (rb - ra);
            for (double x : gp) {
                const double Na = 0.5 * (1 - x), Nb = 0.5 * (1 + x);
                const double r = Na * ra + Nb * rb;
                const double w = two_pi * r * half; // unit gauss weight
                const double t = -loads.sigma_top;
                if (dof_map_[2 * va] >= 0) f[dof_map_[2 * va]] += Na * t * w;
                if (dof_map_[2 * vb] >= 0) f[dof_map_[2 * vb]] += Nb * t * w;
            }
        }
    }
    if (loads.sigma_outer != 0.0) {
        const int ir = grid_.nr();
        const double R = grid_.radius();
        for (int iz = 0; iz < grid_.nz(); ++iz) {
            const int va = grid_.vertex_index(iz, ir);
            const int vb = grid_.vertex_index(iz + 1, ir);
            const double half = 0.5 * grid_.dz();
            const double w_edge = two_pi * R * half;
            for (double x : gp) {
                const double Na = 0.5 * (1 - x), Nb = 0.5 * (1 + x);
                const double t = -loads.sigma_outer;
                if (dof_map_[2 * va + 1] >= 0) f[dof_map_[2 * va + 1]] += Na * t * w_edge;
                if (dof_map_[2 * vb + 1] >= 0) f[dof_map_[2 * vb + 1]] += Nb * t * w_edge;
            }
        }
    }

    K.finalize();
    const Vector u_free = solver_.solve(K, f);

    MechState state;
    state.u = Vector::Zero(2 * grid_.num_vertices());
    for (int d = 0; d < 2 * grid_.num_vertices(); ++d)
        if (dof_map_[d] >= 0) state.u[d] = u_free[dof_map_[d]];

    // cell strain/stress: volume-weighted Gauss averages
    state.strain.assign(grid_.num_cells(), {});
    state.stress_eff.assign(grid_.num_cells(), {});
    state.eps_v.assign(grid_.num_cells(), 0.0);
    double epsv_sum = 0.0;

    for (int c = 0; c < grid_.num_cells(); ++c) {
        const auto& verts = grid_.cell_vertices(c);
        double zc[4], rc[4], ue[8];
        for (int k = 0; k < 4; ++k) {
            zc[k] = grid_.vertex_z(verts[k]);
            rc[k] = grid_.vertex_r(verts[k]);
            ue[2 * k] = state.u[2 * verts[k]];
            ue[2 * k + 1] = state.u[2 * verts[k] + 1];
        }
        double eps[4] = {0, 0, 0, 0};
        double wsum = 0.0;
        for (double xi : gp) {
            for (double eta : gp) {
                double N[4], dNdxi[4], dNdeta[4];
                shape(xi, eta, N, dNdxi, dNdeta);
                double J00 = 0, J01 = 0, J10 = 0, J11 = 0, r = 0;
                for (int k = 0; k < 4; ++k) {
                    J00 += dNdxi[k] * zc[k];
                    J01 += dNdxi[k] * rc[k];
                    J10 += dNdeta[k] * zc[k];
                    J11 += dNdeta[k] * rc[k];
                    r += N[k] * rc[k];
                }
                const double detJ = J00 * J11 - J01 * J10;
                const double inv00 = J11 / detJ, inv01 = -J01 / detJ;
                const double inv10 = -J10 / detJ, inv11 = J00 / detJ;
                const double w = two_pi * r * detJ;
                double e_zz = 0, e_rr = 0, e_tt = 0, g_zr = 0;
                for (int k = 0; k < 4; ++k) {
                    const double dNdz = inv00 * dNdxi[k] + inv10 * dNdeta[k];
                    const double dNdr = inv01 * dNdxi[k] + inv11 * dNdeta[k];
                    e_zz += dNdz * ue[2 * k];
                    e_rr += dNdr * ue[2 * k + 1];
                    e_tt += N[k] / r * ue[2 * k + 1];
                    g_zr += dNdr * ue[2 * k] + dNdz * ue[2 * k + 1];
                }
                eps[0] += e_zz * w;
                eps[1] += e_rr * w;
                eps[2] += e_tt * w;
                eps[3] += g_zr * w;
                wsum += w;
            }
        }
        for (double& e : eps) e /= wsum;
        state.strain[c] = {eps[0], eps[1], eps[2], eps[3]};

        const auto lame = props::lame_parameters(E_sh[c], db_.nu_sh);
        const double tr = eps[0] + eps[1] + eps[2];
        state.stress_eff[c] = {lame.lambda * tr + 2 * lame.mu * eps[0],
                               lame.lambda * tr + 2 * lame.mu * eps[1],
                               lame.lambda * tr + 2 * lame.mu * eps[2], lame.mu * eps[3]};
        state.eps_v[c] = -tr; // compression positive
        epsv_sum += state.eps_v[c] * grid_.cell_volume(c);
    }
    state.eps_v_domain = epsv_sum / grid_.total_volume();
    return state;
}

std::vector<double> PoroelasticFem::stiffness_field(const std::vector<double>& S_h,
                                                    Regime regime) const
{
    std::vector<double> E(S_h.size());
    for (size_t i = 0; i < S_h.size(); ++i)
        E[i] = props::composite_young_modulus(S_h[i], regime, db_);
    return E;
}

std::vector<double> PoroelasticFem::effective_pore_pressure(const std::vector<double>& P_g,
                                                            const std::vector<double>& P_w,
                                                            const std::vector<double>& S_w,
                                                            const std::vector<double>& S_h,
                                                            bool normalized)
{
    std::vector<double> p(P_g.size());
    for (size_t i = 0; i < P_g.size(); ++i) {
        const double S_g = 1.0 - S_w[i] - S_h[i];
        const double fluid = S_w[i] + S_g;
        const double weighted = S_w[i] * P_w[i] + S_g * P_g[i];
        p[i] = normalized ? (fluid > 1e-12 ? weighted / fluid : P_w[i]) : weighted;
    }
    return p;
}

PoroelasticFem::StressReport PoroelasticFem::stress_report(const MechState& state,
                                                           const std::vector<double>& pore_pressure,
                                                           const std::vector<double>& P_g,
                                                           double sigma_confining) const
{
    StressReport rep;
    rep.stress_total.resize(state.stress_eff.size());
    rep.apparent_effective.resize(state.stress_eff.size());
    for (size_t c = 0; c < state.stress_eff.size(); ++c) {
        for (int a = 0; a < 4; ++a) {
            const double biot = (a < 3) ? db_.alpha_biot * pore_pressure[c] : 0.0;
            rep.stress_total[c][a] = state.stress_eff[c][a] - biot;
        }
        rep.apparent_effective[c] = sigma_confining - P_g[c];
    }
    return rep;
}

} // namespace hydresim
