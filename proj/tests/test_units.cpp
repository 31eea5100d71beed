#include "hydresim/errors.hpp"
#include "hydresim/units.hpp"

#include <doctest.h>

using namespace hydresim;

TEST_CASE("quantity parsing covers the file format units")
{
    CHECK(units::parse_quantity("12.5 MPa") == doctest::Approx(12.5e6));
    CHECK(units::parse_quantity("50 kPa") == doctest::Approx(50e3));
    CHECK(units::parse_quantity("360 mm") == doctest::Approx(0.36));
    CHECK(units::parse_quantity("120 s") == doctest::Approx(120.0));
    CHECK(units::parse_quantity("2 h") == doctest::Approx(7200.0));
    CHECK(units::parse_quantity("7 d") == doctest::Approx(604800.0));
    CHECK(units::parse_quantity("275.15 K") == doctest::Approx(275.15));
    CHECK(units::parse_quantity("2 degC") == doctest::Approx(275.15));
    CHECK(units::parse_quantity("0.35") == doctest::Approx(0.35));
    CHECK(units::parse_quantity("3.5 %") == doctest::Approx(0.035));
    CHECK(units::parse_quantity("0.2e-11 mol/m2/Pa/s") == doctest::Approx(0.2e-11));
}

TEST_CASE("unknown units and garbage are rejected")
{
    CHECK_THROWS_AS(units::parse_quantity("12 furlong"), ConfigError);
    CHECK_THROWS_AS(units::parse_quantity("abc"), ConfigError);
}

TEST_CASE("format/parse round trip is lossless")
{
    for (double v : {12.5e6, 1.0 / 3.0, 5e-10, 604800.0}) {
        CHECK(units::parse_quantity(units::format_quantity(v, "MPa")) == v);
        CHECK(units::parse_quantity(units::format_quantity(v, "")) == v);
    }
    CHECK(units::parse_quantity(units::format_quantity(275.15, "degC")) ==
          doctest::Approx(275.15).epsilon(1e-15));
}
