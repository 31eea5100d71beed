#include "hydresim/errors.hpp"
#include "hydresim/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hydresim;

TEST_CASE("triaxial sample grid geometry")
{
    const AxiGrid grid(72, 8, 0.360, 0.040);
    CHECK(grid.num_cells() == 576);
    CHECK(grid.num_vertices() == 73 * 9);

    double vol = 0.0;
    for (int c = 0; c < grid.num_cells(); ++c) vol += grid.cell_volume(c);
    const double exact = std::numbers::pi * 0.04 * 0.04 * 0.36;
    CHECK(std::abs(vol - exact) / exact < 1e-12);
    CHECK(exact == doctest::Approx(1.8096e-3).epsilon(1e-3));
}

TEST_CASE("single cell cylinder has volume pi")
{
    const AxiGrid grid(1, 1, 1.0, 1.0);
    CHECK(grid.num_cells() == 1);
    CHECK(grid.cell_volume(0) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("annular volumes on a 2x2 grid")
{
    const AxiGrid grid(2, 2, 1.0, 1.0);
    // inner column r in [0, 0.5]: pi * 0.25 * 0.5 ; outer: pi * 0.75 * 0.5
    CHECK(grid.cell_volume(grid.cell_index(0, 0)) ==
          doctest::Approx(std::numbers::pi * 0.25 * 0.5).epsilon(1e-14));
    CHECK(grid.cell_volume(grid.cell_index(0, 1)) ==
          doctest::Approx(std::numbers::pi * 0.75 * 0.5).epsilon(1e-14));
}

TEST_CASE("invalid dimensions are rejected")
{
    CHECK_THROWS_AS(AxiGrid(0, 1, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(AxiGrid(1, 1, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(AxiGrid(1, 1, 1.0, -2.0), ConfigError);
}

TEST_CASE("face adjacency and axial area balance")
{
    const AxiGrid grid(5, 3, 0.5, 0.1);
    int boundary = 0, interior = 0;
    for (const Face& f : grid.faces()) {
        CHECK(f.cell_a >= 0);
        if (f.cell_b >= 0)
            ++interior;
        else
            ++boundary;
        CHECK(f.area >= 0.0);
    }
    CHECK(interior == 4 * 3 + 2 * 5); // z-interior + r-interior
    CHECK(boundary == 2 * 3 + 2 * 5); // bottom/top + axis/outer

    // per cell the signed axial face areas cancel; radial components cancel
    // around the revolution by symmetry
    for (int c = 0; c < grid.num_cells(); ++c) {
        double net_axial = 0.0;
        for (int fid : grid.cell_faces(c)) {
            const Face& f = grid.faces()[fid];
            if (!f.axial) continue;
            net_axial += (f.z > grid.cell_center_z(c) ? 1.0 : -1.0) * f.area;
        }
        CHECK(std::abs(net_axial) < 1e-14);
    }
}

TEST_CASE("cell to vertex interpolation")
{
    const AxiGrid grid(4, 3, 1.0, 0.3);

    SUBCASE("constants are preserved")
    {
        std::vector<double> f(grid.num_cells(), 5.0);
        for (double v : grid.interpolate_cell_to_vertex(f))
            CHECK(v == doctest::Approx(5.0).epsilon(1e-15));
    }
    SUBCASE("linear in z is exact at interior vertices")
    {
        std::vector<double> f(grid.num_cells());
        for (int c = 0; c < grid.num_cells(); ++c) f[c] = 2.0 + 3.0 * grid.cell_center_z(c);
        const auto vf = grid.interpolate_cell_to_vertex(f);
        for (int iz = 1; iz < grid.nz(); ++iz)
            for (int ir = 1; ir < grid.nr(); ++ir) {
                const int v = grid.vertex_index(iz, ir);
                CHECK(vf[v] == doctest::Approx(2.0 + 3.0 * grid.vertex_z(v)).epsilon(1e-13));
            }
    }
    SUBCASE("bounded by input range")
    {
        std::vector<double> f(grid.num_cells());
        for (int c = 0; c < grid.num_cells(); ++c) f[c] = (c * 7919) % 13 - 6.0;
        double lo = 1e300, hi = -1e300;
        for (double v : f) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (double v : grid.interpolate_cell_to_vertex(f)) {
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
    }
    SUBCASE("length mismatch throws")
    {
        std::vector<double> f(grid.num_cells() + 1, 0.0);
        CHECK_THROWS_AS(grid.interpolate_cell_to_vertex(f), DimensionError);
    }
}

TEST_CASE("checkerboard on a 2x2 grid averages to zero at the center")
{
    const AxiGrid grid(2, 2, 1.0, 1.0);
    std::vector<double> f(4);
    f[grid.cell_index(0, 0)] = 1.0;
    f[grid.cell_index(0, 1)] = -1.0;
    f[grid.cell_index(1, 0)] = -1.0;
    f[grid.cell_index(1, 1)] = 1.0;
    const auto vf = grid.interpolate_cell_to_vertex(f);
    CHECK(vf[grid.vertex_index(1, 1)] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("primary state validation")
{
    const AxiGrid grid(2, 2, 1.0, 1.0);
    auto s = PrimaryState::uniform(grid, 1e6, 0.4, 0.1, 275.0, 0.35);
    CHECK_NOTHROW(s.validate());
    s.S_w[0] = 0.95; // S_w + S_h > 1
    CHECK_THROWS_AS(s.validate(), OutOfRangeError);
    s.S_w[0] = 0.4;
    s.phi[2] = 1.5;
    CHECK_THROWS_AS(s.validate(), OutOfRangeError);
}
