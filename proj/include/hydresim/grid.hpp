#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace hydresim {

/// Boundary classification of a face (axis is the r=0 symmetry line).
enum class Side { interior, bottom, top, axis, outer };

/// One finite-volume face of the axisymmetric grid. Areas carry the full
/// 2*pi*r revolution weighting so fluxes are physical (kg/s, W).
struct Face {
    int cell_a = -1;       ///< first adjacent cell
    int cell_b = -1;       ///< second adjacent cell, -1 on the boundary
    double area = 0.0;     ///< m^2, revolved
    double dist_a = 0.0;   ///< cell_a center to face, m
    double dist_b = 0.0;   ///< cell_b center to face, m (0 on boundary)
    double z = 0.0;        ///< face centroid axial coordinate
    double r = 0.0;        ///< face centroid radial coordinate
    bool axial = false;    ///< normal along z (true) or along r (false)
    Side side = Side::interior;
};

/// Structured orthogonal grid for the 2D radial (axisymmetric) sample
/// domain. Cell (iz, ir) spans [iz*dz,(iz+1)*dz] x [ir*dr,(ir+1)*dr] and its
/// volume is the exact solid of revolution pi*(r_{ir+1}^2 - r_ir^2)*dz.
///
/// Immutable after construction; shared read-only by the FV and FEM blocks.
class AxiGrid {
public:
    AxiGrid(int nz, int nr, double height, double radius);

    int nz() const { return nz_; }
    int nr() const { return nr_; }
    int num_cells() const { return nz_ * nr_; }
    int num_vertices() const { return (nz_ + 1) * (nr_ + 1); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    double height() const { return height_; }
    double radius() const { return radius_; }
    double dz() const { return dz_; }
    double dr() const { return dr_; }

    int cell_index(int iz, int ir) const { return iz * nr_ + ir; }
    int vertex_index(int iz, int ir) const { return iz * (nr_ + 1) + ir; }

    double cell_volume(int c) const { return cell_volumes_[c]; }
    double cell_center_z(int c) const { return cell_center_z_[c]; }
    double cell_center_r(int c) const { return cell_center_r_[c]; }
    double total_volume() const { return total_volume_; }

    double vertex_z(int v) const { return vertex_z_[v]; }
    double vertex_r(int v) const { return vertex_r_[v]; }

    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<int>& cell_faces(int c) const { return cell_faces_[c]; }
    /// Corner vertices of cell c, counterclockwise in the (z, r) plane.
    const std::array<int, 4>& cell_vertices(int c) const { return cell_vertices_[c]; }

    /// Volume-weighted average of adjacent cell values at each vertex.
    /// Constant fields are preserved exactly; results are bounded by the
    /// input range. Throws DimensionError on length mismatch.
    std::vector<double> interpolate_cell_to_vertex(const std::vector<double>& cell_field) const;

private:
    int nz_, nr_;
    double height_, radius_, dz_, dr_;
    double total_volume_ = 0.0;
    std::vector<double> cell_volumes_, cell_center_z_, cell_center_r_;
    std::vector<double> vertex_z_, vertex_r_;
    std::vector<Face> faces_;
    std::vector<std::vector<int>> cell_faces_;
    std::vector<std::array<int, 4>> cell_vertices_;
};

/// The six primary fields: cell-wise P_g, S_w, S_h, T, phi and vertex-wise
/// displacement (u_z, u_r).
struct PrimaryState {
    std::vector<double> P_g;   ///< Pa
    std::vector<double> S_w;   ///< -
    std::vector<double> S_h;   ///< -
    std::vector<double> T;     ///< K
    std::vector<double> phi;   ///< total porosity, -
    std::vector<double> u_z;   ///< m, per vertex
    std::vector<double> u_r;   ///< m, per vertex

    static PrimaryState uniform(const AxiGrid& grid, double P_g, double S_w, double S_h,
                                double T, double phi);
    /// Enforce the admissibility invariants; throws OutOfRangeError.
    void validate() const;
};

/// A named bundle of cell/vertex fields at one instant. Derived fields are
/// recomputed from the primaries by the writer, never mutated in place.
struct FieldSnapshot {
    double time = 0.0;
    std::map<std::string, std::vector<double>> cell_fields;
    std::map<std::string, std::vector<double>> vertex_fields;
};

} // namespace hydresim
