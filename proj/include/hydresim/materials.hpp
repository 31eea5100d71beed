#pragma once

#include "hydresim/dual.hpp"
#include "hydresim/errors.hpp"

#include <string>

namespace hydresim {

enum class Regime { formation, dissociation };

Regime regime_from_string(const std::string& s);
std::string to_string(Regime r);

/// Stiffness parameterization E_sh = E_s + E_h * S_h^c for one regime.
struct ElasticLaw {
    double E_s;  ///< Pa, hydrate-free sediment modulus
    double E_h;  ///< Pa, hydrate contribution scale
    double c;    ///< - , saturation exponent

    bool operator==(const ElasticLaw&) const = default;
};

/// Material constants and correlation parameters. Field names follow the
/// keys of the parameter file so runs stay auditable.
///
/// All values SI. The defaults encode the shipped calibration for the
/// triaxial sample; every one of them can be overridden from the scenario
/// file.
struct MaterialDB {
    // densities
    double rho_h = 900.0;        ///< kg/m3, hydrate
    double rho_s = 2100.0;       ///< kg/m3, sand grains
    double rho_w_liquid = 1000.0;///< kg/m3

    // thermal conductivities (gas and water are correlations, see below)
    double k_c_h = 2.1;          ///< W/m/K
    double k_c_s = 1.9;          ///< W/m/K

    // heat capacities
    double Cp_w = 4186.0;        ///< J/kg/K
    double Cv_h = 2700.0;        ///< J/kg/K
    double Cv_s = 800.0;         ///< J/kg/K
    double cp_g_residual_factor = 1.0; ///< multiplies the Cp_g polynomial

    // hydraulics
    double lambda_BC = 1.2;      ///< Brooks-Corey pore size index
    double P_entry = 50e3;       ///< Pa
    double S_wr = 0.0;           ///< residual water saturation (of mobile pore space)
    double K_0 = 5e-10;          ///< m2, intrinsic permeability at phi_0, S_h = 0
    double phi_0 = 0.35;         ///< reference porosity
    double perm_exponent_n_h = 3.0;   ///< f_h = (1 - S_h)^n_h
    double pc_scaling_exponent = 0.5; ///< f_pc = (f_phi * f_h)^(-exponent)
    bool pc_scaling_on = true;
    double pc_swe_min = 0.05;    ///< effective saturation floor for the P_c cap
    double pc_cap_factor = 10.0; ///< cap = factor * P_entry * swe_min^(-1/lambda)

    // hydrate equilibrium (dissociation-pressure correlation) and salinity
    double A_1 = 1e6;            ///< tabulated prefactor, kept for audit
    double A_2 = 38.98;
    double A_3 = 8533.8;         ///< K
    double P_e_scale = 1e3;      ///< Pa per exp-unit; exp(A_2 - A_3/T) evaluates in kPa
    double salinity_slope = 3.0; ///< relative P_e increase per unit salt mass fraction

    // heat of reaction dH = B_1 - B_2 * T  [J/mol]
    double B_1 = 56599.0;
    double B_2 = 16.744;

    // stoichiometry and gas constants
    double N_hyd = 5.75;
    double M_CH4 = 16.043e-3;    ///< kg/mol
    double M_H2O = 18.015e-3;    ///< kg/mol
    double R = 8.314462618;      ///< J/mol/K

    // Peng-Robinson constants for methane
    double pr_T_crit = 190.56;   ///< K
    double pr_P_crit = 4.599e6;  ///< Pa
    double pr_omega = 0.0115;

    // composition closures
    double henry_ref = 2.9e9;    ///< Pa per mole fraction at henry_T_ref
    double henry_T_ref = 275.0;  ///< K
    double henry_C = 1600.0;     ///< K, van 't Hoff temperature coefficient
    bool dissolution_on = true;
    bool vapor_on = true;

    // poroelasticity
    double alpha_biot = 0.8;
    double nu_sh = 0.15;
    ElasticLaw formation_law{32e6, 250e6, 1.0};
    ElasticLaw dissociation_law{160e6, 360e6, 3.0};

    double T_ref_energy = 273.15; ///< K, zero point of internal energy/enthalpy

    double molar_mass_hydrate() const { return M_CH4 + N_hyd * M_H2O; }
    double R_CH4() const { return R / M_CH4; } ///< specific gas constant, J/kg/K
    double R_H2O() const { return R / M_H2O; }
    const ElasticLaw& law(Regime r) const
    {
        return r == Regime::formation ? formation_law : dissociation_law;
    }

    /// Sanity checks on the constant set; throws ConfigError.
    void validate() const;

    bool operator==(const MaterialDB&) const = default;
};

namespace props {

using namespace scalar_ops;

// --- thermal conductivities [W/m/K] ---

template <class S>
S thermal_conductivity_gas(const S& T)
{
    return -0.886e-2 + 0.242e-3 * T - 0.699e-6 * T * T + 0.122e-8 * T * T * T;
}

template <class S>
S thermal_conductivity_water(const S& T)
{
    return 0.3834 * log(T) - 1.581;
}

// --- heat capacities [J/kg/K] ---

template <class S>
S heat_capacity_gas_cp(const S& T, const MaterialDB& db)
{
    return db.cp_g_residual_factor *
           (1238.0 + 3.13 * T + 7.9e-4 * T * T - 6.86e-7 * T * T * T);
}

template <class S>
S heat_capacity_gas_cv(const S& T, const MaterialDB& db)
{
    return heat_capacity_gas_cp(T, db) + db.R_CH4();
}

inline double heat_capacity_water_cv(const MaterialDB& db) { return db.Cp_w + db.R_H2O(); }

// --- viscosities [Pa s] ---

template <class S>
S viscosity_gas(const S& T)
{
    return 10.4e-6 * ((273.15 + 162.0) / (T + 162.0)) * pow(T / 273.15, 1.5);
}

template <class S>
S viscosity_water(const S& T)
{
    const S tau = 273.15 / T;
    return 0.001792 * exp(-1.94 - 4.80 * tau + 6.74 * tau * tau);
}

// --- gas density via Peng-Robinson [kg/m3] ---

/// Largest real root of z^3 + c2 z^2 + c1 z + c0 (the vapor branch).
/// Throws EosError when no root exists in (0, z_max].
double cubic_largest_root(double c2, double c1, double c0);

/// Compressibility factor z(P, T) for methane. For dual arguments the root
/// is computed on values and lifted through the implicit function theorem
/// by one Newton polish step in dual arithmetic.
template <class S>
S pr_z_factor(const S& P, const S& T, const MaterialDB& db)
{
    const double R = db.R;
    const double kappa = 0.37464 + 1.54226 * db.pr_omega - 0.26992 * db.pr_omega * db.pr_omega;
    const S alpha_sqrt = 1.0 + kappa * (1.0 - sqrt(T / db.pr_T_crit));
    const S a = 0.45724 * R * R * db.pr_T_crit * db.pr_T_crit / db.pr_P_crit * alpha_sqrt * alpha_sqrt;
    const double b = 0.07780 * R * db.pr_T_crit / db.pr_P_crit;
    const S A = a * P / (R * R * T * T);
    const S B = b * P / (R * T);

    const S c2 = -(1.0 - B);
    const S c1 = A - 3.0 * B * B - 2.0 * B;
    const S c0 = -(A * B - B * B - B * B * B);
    const double z0 = cubic_largest_root(value_of(c2), value_of(c1), value_of(c0));

    // g(z0; P, T) carries input derivatives; divide by dg/dz at the root.
    const S g = ((S(z0) + c2) * z0 + c1) * z0 + c0;
    const double dgdz = (3.0 * z0 + 2.0 * value_of(c2)) * z0 + value_of(c1);
    return S(z0) - g / dgdz;
}

template <class S>
S gas_density(const S& P_g, const S& T, const MaterialDB& db)
{
    const S z = pr_z_factor(P_g, T, db);
    return P_g / (z * db.R_CH4() * T);
}

template <class S>
S water_vapor_density(const S& P_g, const S& T)
{
    return 0.0022 * P_g / T;
}

// --- hydrate equilibrium pressure [Pa] ---

template <class S>
S equilibrium_pressure(const S& T, double salinity, const MaterialDB& db)
{
    if (value_of(T) <= 250.0 || value_of(T) >= 320.0)
        throw OutOfRangeError("equilibrium_pressure: T outside the stability correlation range");
    if (salinity < 0.0 || salinity > 0.1)
        throw OutOfRangeError("equilibrium_pressure: salinity outside [0, 0.1]");
    return db.P_e_scale * exp(db.A_2 - db.A_3 / T) * (1.0 + db.salinity_slope * salinity);
}

// --- heat of reaction [J/mol] ---

template <class S>
S heat_of_reaction(const S& T, const MaterialDB& db)
{
    return db.B_1 - db.B_2 * T;
}

// --- structure factors of the porosity / hydrate multiplicative split ---

template <class S>
S porosity_perm_factor(const S& phi, const MaterialDB& db)
{
    const S a = phi / db.phi_0;
    const S b = (1.0 - db.phi_0) / (1.0 - phi);
    return a * a * a * b * b;
}

template <class S>
S hydrate_perm_factor(const S& S_h, const MaterialDB& db)
{
    return pow(max(1.0 - S_h, S(0.0)), db.perm_exponent_n_h);
}

template <class S>
S effective_permeability(const S& phi, const S& S_h, const MaterialDB& db)
{
    return db.K_0 * porosity_perm_factor(phi, db) * hydrate_perm_factor(S_h, db);
}

template <class S>
S apparent_porosity(const S& phi, const S& S_h)
{
    return phi * (1.0 - S_h);
}

// --- Brooks-Corey hydraulics on the mobile pore space (1 - S_h) ---

template <class S>
S effective_water_saturation(const S& S_w, const S& S_h, const MaterialDB& db)
{
    const S mobile = max(1.0 - S_h, S(1e-12));
    const S swe = (S_w / mobile - db.S_wr) / (1.0 - db.S_wr);
    return min(max(swe, S(0.0)), S(1.0));
}

template <class S>
struct RelPerms {
    S k_rw, k_rg;
};

template <class S>
RelPerms<S> relative_permeabilities(const S& S_w, const S& S_h, const MaterialDB& db)
{
    const S swe = effective_water_saturation(S_w, S_h, db);
    const double lam = db.lambda_BC;
    RelPerms<S> k;
    k.k_rw = pow(swe, (2.0 + 3.0 * lam) / lam);
    const S sge = 1.0 - swe;
    k.k_rg = sge * sge * (1.0 - pow(swe, (2.0 + lam) / lam));
    k.k_rw = min(max(k.k_rw, S(0.0)), S(1.0));
    k.k_rg = min(max(k.k_rg, S(0.0)), S(1.0));
    return k;
}

/// Brooks-Corey capillary pressure with the Leverett-type structure factor.
/// The return is capped (cap = pc_cap_factor * P_entry * swe_min^(-1/lambda));
/// `capped`, when given, is set when the cap was hit.
template <class S>
S capillary_pressure(const S& S_w, const S& phi, const S& S_h, const MaterialDB& db,
                     bool* capped = nullptr)
{
    const S swe = effective_water_saturation(S_w, S_h, db);
    const double cap =
        db.pc_cap_factor * db.P_entry * std::pow(db.pc_swe_min, -1.0 / db.lambda_BC);
    S f_pc(1.0);
    if (db.pc_scaling_on) {
        const S f = porosity_perm_factor(phi, db) * hydrate_perm_factor(S_h, db);
        f_pc = pow(max(f, S(1e-12)), -db.pc_scaling_exponent);
    }
    if (value_of(swe) <= 0.0) {
        if (capped) *capped = true;
        return S(cap);
    }
    const S pc = db.P_entry * pow(swe, -1.0 / db.lambda_BC) * f_pc;
    if (value_of(pc) >= cap) {
        if (capped) *capped = true;
        return S(cap);
    }
    if (capped) *capped = false;
    return pc;
}

// --- composition closures ---

/// Antoine saturation vapor pressure of water [Pa].
template <class S>
S water_saturation_pressure(const S& T)
{
    const S t_c = T - 273.15;
    constexpr double ln10 = 2.302585092994046;
    return 133.322 * exp(ln10 * (8.07131 - 1730.63 / (233.426 + t_c)));
}

/// Mole fraction of water vapor in the gas phase.
template <class S>
S vapor_mole_fraction(const S& P_g, const S& T, const MaterialDB& db)
{
    if (!db.vapor_on) return S(0.0);
    return min(water_saturation_pressure(T) / P_g, S(0.05));
}

/// Mole fraction of dissolved methane in the aqueous phase (Henry's law).
template <class S>
S dissolved_mole_fraction(const S& P_g, const S& T, const MaterialDB& db)
{
    if (!db.dissolution_on) return S(0.0);
    const S H = db.henry_ref * exp(-db.henry_C * (1.0 / T - 1.0 / db.henry_T_ref));
    return min(P_g / H, S(0.2));
}

// --- composite stiffness ---

template <class S>
S composite_young_modulus(const S& S_h, const ElasticLaw& law)
{
    return law.E_s + law.E_h * pow(max(S_h, S(0.0)), law.c);
}

inline double composite_young_modulus(double S_h, Regime regime, const MaterialDB& db)
{
    return composite_young_modulus(S_h, db.law(regime));
}

struct Lame {
    double lambda, mu;
};

inline Lame lame_parameters(double E, double nu)
{
    Lame l;
    l.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    l.mu = E / (2.0 * (1.0 + nu));
    return l;
}

} // namespace props

} // namespace hydresim
