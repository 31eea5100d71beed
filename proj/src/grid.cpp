#include "hydresim/grid.hpp"

#include "hydresim/errors.hpp"

#include <cmath>
#include <numbers>

namespace hydresim {

AxiGrid::AxiGrid(int nz, int nr, double height, double radius)
    : nz_(nz), nr_(nr), height_(height), radius_(radius)
{
    if (nz < 1 || nr < 1)
        throw ConfigError("grid needs at least one cell in each direction");
    if (height <= 0.0 || radius <= 0.0)
        throw ConfigError("grid height and radius must be positive");

    dz_ = height / nz;
    dr_ = radius / nr;
    const double pi = std::numbers::pi;

    const int ncells = num_cells();
    cell_volumes_.resize(ncells);
    cell_center_z_.resize(ncells);
    cell_center_r_.resize(ncells);
    cell_faces_.assign(ncells, {});
    cell_vertices_.resize(ncells);

    for (int iz = 0; iz < nz; ++iz) {
        for (int ir = 0; ir < nr; ++ir) {
            const int c = cell_index(iz, ir);
            const double r0 = ir * dr_;
            const double r1 = (ir + 1) * dr_;
            cell_volumes_[c] = pi * (r1 * r1 - r0 * r0) * dz_;
            cell_center_z_[c] = (iz + 0.5) * dz_;
            cell_center_r_[c] = (ir + 0.5) * dr_;
            cell_vertices_[c] = {vertex_index(iz, ir), vertex_index(iz + 1, ir),
                                 vertex_index(iz + 1, ir + 1), vertex_index(iz, ir + 1)};
            total_volume_ += cell_volumes_[c];
        }
    }

    vertex_z_.resize(num_vertices());
    vertex_r_.resize(num_vertices());
    for (int iz = 0; iz <= nz; ++iz) {
        for (int ir = 0; ir <= nr; ++ir) {
            const int v = vertex_index(iz, ir);
            vertex_z_[v] = iz * dz_;
            vertex_r_[v] = ir * dr_;
        }
    }

    // axial-normal faces, area = annulus pi*(r1^2 - r0^2)
    for (int iz = 0; iz <= nz; ++iz) {
        for (int ir = 0; ir < nr; ++ir) {
            const double r0 = ir * dr_;
            const double r1 = (ir + 1) * dr_;
            Face f;
            f.axial = true;
            f.area = pi * (r1 * r1 - r0 * r0);
            f.z = iz * dz_;
            f.r = (ir + 0.5) * dr_;
            if (iz == 0) {
                f.cell_a = cell_index(0, ir);
                f.dist_a = 0.5 * dz_;
                f.side = Side::bottom;
            } else if (iz == nz) {
                f.cell_a = cell_index(nz - 1, ir);
                f.dist_a = 0.5 * dz_;
                f.side = Side::top;
            } else {
                f.cell_a = cell_index(iz - 1, ir);
                f.cell_b = cell_index(iz, ir);
                f.dist_a = 0.5 * dz_;
                f.dist_b = 0.5 * dz_;
            }
            const int id = static_cast<int>(faces_.size());
            faces_.push_back(f);
            cell_faces_[f.cell_a].push_back(id);
            if (f.cell_b >= 0) cell_faces_[f.cell_b].push_back(id);
        }
    }

    // radial-normal faces, area = cylinder band 2*pi*r*dz (zero on the axis)
    for (int ir = 0; ir <= nr; ++ir) {
        for (int iz = 0; iz < nz; ++iz) {
            const double r = ir * dr_;
            Face f;
            f.axial = false;
            f.area = 2.0 * pi * r * dz_;
            f.z = (iz + 0.5) * dz_;
            f.r = r;
            if (ir == 0) {
                f.cell_a = cell_index(iz, 0);
                f.dist_a = 0.5 * dr_;
                f.side = Side::axis;
            } else if (ir == nr) {
                f.cell_a = cell_index(iz, nr - 1);
                f.dist_a = 0.5 * dr_;
                f.side = Side::outer;
            } else {
                f.cell_a = cell_index(iz, ir - 1);
                f.cell_b = cell_index(iz, ir);
                f.dist_a = 0.5 * dr_;
                f.dist_b = 0.5 * dr_;
            }
            const int id = static_cast<int>(faces_.size());
            faces_.push_back(f);
            cell_faces_[f.cell_a].push_back(id);
            if (f.cell_b >= 0) cell_faces_[f.cell_b].push_back(id);
        }
    }
}

std::vector<double> AxiGrid::interpolate_cell_to_vertex(const std::vector<double>& cell_field) const
{
    if (static_cast<int>(cell_field.size()) != num_cells())
        throw DimensionError("interpolate_cell_to_vertex: field length " +
                             std::to_string(cell_field.size()) + " != cell count " +
                             std::to_string(num_cells()));
    std::vector<double> out(num_vertices(), 0.0);
    std::vector<double> weight(num_vertices(), 0.0);
    for (int c = 0; c < num_cells(); ++c) {
        for (int v : cell_vertices_[c]) {
            out[v] += cell_volumes_[c] * cell_field[c];
            weight[v] += cell_volumes_[c];
        }
    }
    for (int v = 0; v < num_vertices(); ++v) out[v] /= weight[v];
    return out;
}

PrimaryState PrimaryState::uniform(const AxiGrid& grid, double P_g, double S_w, double S_h,
                                   double T, double phi)
{
    PrimaryState s;
    const int n = grid.num_cells();
    s.P_g.assign(n, P_g);
    s.S_w.assign(n, S_w);
    s.S_h.assign(n, S_h);
    s.T.assign(n, T);
    s.phi.assign(n, phi);
    s.u_z.assign(grid.num_vertices(), 0.0);
    s.u_r.assign(grid.num_vertices(), 0.0);
    s.validate();
    return s;
}

void PrimaryState::validate() const
{
    for (size_t i = 0; i < P_g.size(); ++i) {
        if (!(P_g[i] > 0.0) || !(T[i] > 0.0))
            throw OutOfRangeError("cell " + std::to_string(i) + ": P_g and T must be positive");
        if (S_w[i] < 0.0 || S_h[i] < 0.0 || S_w[i] + S_h[i] > 1.0 + 1e-12)
            throw OutOfRangeError("cell " + std::to_string(i) +
                                  ": saturations outside the admissible simplex");
        if (!(phi[i] > 0.0) || !(phi[i] < 1.0))
            throw OutOfRangeError("cell " + std::to_string(i) + ": porosity outside (0,1)");
    }
}

} // namespace hydresim
