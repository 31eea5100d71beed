#include "hydresim/kinetics.hpp"

#include <doctest.h>

#include <cmath>

using namespace hydresim;
using kinetics::ReactionMode;

namespace {
const MaterialDB db{};
const KineticParams kp{};
} // namespace

TEST_CASE("reaction surface area")
{
    KineticParams p = kp;
    p.gamma_surface = 1e5;

    CHECK(kinetics::reaction_surface_area(0.35, 0.4, 0.0, 0.6, ReactionMode::formation, p) ==
          doctest::Approx(0.0));
    CHECK(kinetics::reaction_surface_area(0.35, 0.0, 0.6, 0.4, ReactionMode::formation, p) ==
          doctest::Approx(0.0));
    CHECK(kinetics::reaction_surface_area(0.35, 0.6, 0.4, 0.0, ReactionMode::dissociation, p) ==
          doctest::Approx(0.0));

    // default model at phi 0.35, S_w 0.3, S_g 0.3, S_h 0.4, Gamma 1e5
    CHECK(kinetics::reaction_surface_area(0.35, 0.3, 0.3, 0.4, ReactionMode::formation, p) ==
          doctest::Approx(1e5 * 0.35 * 0.3 * 0.3).epsilon(1e-12));
    CHECK(kinetics::reaction_surface_area(0.35, 0.3, 0.3, 0.4, ReactionMode::dissociation, p) ==
          doctest::Approx(1e5 * 0.35 * std::pow(0.4, 2.0 / 3.0)).epsilon(1e-12));

    // formation area decreases as hydrate displaces gas at fixed S_w
    double prev = 1e300;
    for (double sh = 0.0; sh <= 0.6; sh += 0.1) {
        const double a = kinetics::reaction_surface_area(0.35, 0.4, 1.0 - 0.4 - sh, sh,
                                                         ReactionMode::formation, p);
        CHECK(a < prev);
        prev = a;
    }
}

TEST_CASE("phase change rates")
{
    const double T = 275.15;
    const double Pe = props::equilibrium_pressure(T, 0.0, db);

    SUBCASE("equilibrium: all rates vanish")
    {
        const auto src = kinetics::phase_change_rates(Pe, T, 0.0, 0.4, 0.2, 0.35, db, kp);
        CHECK(src.n_dot == 0.0);
        CHECK(src.g_CH4 == 0.0);
        CHECK(src.g_h == 0.0);
        CHECK(src.Q_h == 0.0);
    }

    SUBCASE("formation at 12.5 MPa consumes gas and builds hydrate")
    {
        const auto src = kinetics::phase_change_rates(12.5e6, T, 0.0, 0.4, 0.0, 0.35, db, kp);
        CHECK(src.n_dot < 0.0);  // below-zero: formation direction
        CHECK(src.g_CH4 < 0.0);  // gas consumed
        CHECK(src.g_H2O < 0.0);  // water consumed
        CHECK(src.g_h > 0.0);    // hydrate created
        CHECK(src.Q_h > 0.0);    // exothermic
    }

    SUBCASE("dissociation below P_e releases gas and cools")
    {
        const auto src = kinetics::phase_change_rates(2.0e6, T, 0.0, 0.5, 0.3, 0.35, db, kp);
        CHECK(src.n_dot > 0.0);
        CHECK(src.g_CH4 > 0.0);
        CHECK(src.g_h < 0.0);
        CHECK(src.Q_h < 0.0); // endothermic: heat sink
    }

    SUBCASE("mass closure and stoichiometry")
    {
        const auto src = kinetics::phase_change_rates(12.5e6, T, 0.0, 0.4, 0.1, 0.35, db, kp);
        CHECK(std::abs(src.g_CH4 + src.g_H2O + src.g_h) <= 1e-15 * std::abs(src.g_h));
        CHECK(src.g_H2O / src.g_CH4 == doctest::Approx(6.456788007).epsilon(1e-9));
    }

    SUBCASE("rate is continuous through equilibrium")
    {
        const auto lo = kinetics::phase_change_rates(Pe - 1.0, T, 0.0, 0.4, 0.2, 0.35, db, kp);
        const auto hi = kinetics::phase_change_rates(Pe + 1.0, T, 0.0, 0.4, 0.2, 0.35, db, kp);
        CHECK(std::abs(lo.n_dot) < 1e-6);
        CHECK(std::abs(hi.n_dot) < 1e-6);
        CHECK(lo.n_dot > 0.0); // dissociating side
        CHECK(hi.n_dot < 0.0); // forming side
    }

    SUBCASE("kinetics can be disabled")
    {
        KineticParams off = kp;
        off.enabled = false;
        const auto src = kinetics::phase_change_rates(12.5e6, T, 0.0, 0.4, 0.0, 0.35, db, off);
        CHECK(src.g_h == 0.0);
    }
}

TEST_CASE("heat of reaction")
{
    CHECK(props::heat_of_reaction(275.15, db) == doctest::Approx(51991.8884).epsilon(1e-9));
    CHECK(props::heat_of_reaction(280.0, db) == doctest::Approx(51910.68).epsilon(1e-9));
    CHECK(props::heat_of_reaction(280.0, db) < props::heat_of_reaction(275.15, db));

    MaterialDB constant = db;
    constant.B_2 = 0.0;
    CHECK(props::heat_of_reaction(250.0, constant) == doctest::Approx(56599.0));
    CHECK(props::heat_of_reaction(300.0, constant) == doctest::Approx(56599.0));
}

TEST_CASE("parameter validation")
{
    KineticParams bad = kp;
    bad.k_reac_formation = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_NOTHROW(kp.validate());
}
