#pragma once

#include "hydresim/materials.hpp"

namespace hydresim {

enum class SurfaceAreaModel {
    saturation_product, ///< formation Gamma*phi*S_w*S_g, dissociation Gamma*phi*S_h^(2/3)
    constant,           ///< A_rs = Gamma whenever the required reactants exist
};

SurfaceAreaModel surface_area_model_from_string(const std::string& s);
std::string to_string(SurfaceAreaModel m);

/// Kinetic rate parameters. The Gamma scale of the surface-area model is the
/// calibration knob absorbed against k_reac; the shipped value reproduces the
/// measured hydrate inventory of the formation experiment.
struct KineticParams {
    double k_reac_formation = 0.2e-11;    ///< mol/m2/Pa/s
    double k_reac_dissociation = 3.2e-10; ///< mol/m2/Pa/s
    double gamma_surface = 4.2e3;         ///< m2 reactive surface per m3 bulk
    SurfaceAreaModel surface_model = SurfaceAreaModel::saturation_product;
    bool enabled = true;

    void validate() const;

    bool operator==(const KineticParams&) const = default;
};

/// Per-cell phase-change source package (per unit bulk volume).
/// Sign convention: n_dot > 0 is dissociation (gas and water released,
/// hydrate consumed); q_h is the heat added to the medium, so it is
/// negative during dissociation.
template <class S>
struct KineticSourceT {
    S n_dot{0.0};  ///< mol/m3/s of hydrate converted (positive = dissociating)
    S g_CH4{0.0};  ///< kg/m3/s into the fluid CH4 inventory
    S g_H2O{0.0};  ///< kg/m3/s into the fluid H2O inventory
    S g_h{0.0};    ///< kg/m3/s into the hydrate inventory
    S Q_h{0.0};    ///< W/m3 heat source to the energy balance
    S A_rs{0.0};   ///< m2/m3 reactive surface used
};

using KineticSource = KineticSourceT<double>;

namespace kinetics {

using namespace scalar_ops;

enum class ReactionMode { formation, dissociation };

/// Reactive surface area [m2/m3]. Formation requires both water and free
/// gas; dissociation requires hydrate. Decreasing in S_h for formation
/// (through the shrinking gas fraction).
template <class S>
S reaction_surface_area(const S& phi, const S& S_w, const S& S_g, const S& S_h,
                        ReactionMode mode, const KineticParams& kp)
{
    switch (kp.surface_model) {
    case SurfaceAreaModel::constant:
        if (mode == ReactionMode::formation)
            return (value_of(S_w) > 0.0 && value_of(S_g) > 0.0) ? S(kp.gamma_surface) : S(0.0);
        return value_of(S_h) > 0.0 ? S(kp.gamma_surface) : S(0.0);
    case SurfaceAreaModel::saturation_product:
    default:
        if (mode == ReactionMode::formation)
            return kp.gamma_surface * phi * max(S_w, S(0.0)) * max(S_g, S(0.0));
        return kp.gamma_surface * phi * pow(max(S_h, S(0.0)), 2.0 / 3.0);
    }
}

/// Kinetic phase-change rates driven by (P_e - P_g). The rate constant of
/// the active regime is selected by the sign of the driving force, so the
/// rate goes to zero continuously at equilibrium.
template <class S>
KineticSourceT<S> phase_change_rates(const S& P_g, const S& T, double salinity, const S& S_w,
                                     const S& S_h, const S& phi, const MaterialDB& db,
                                     const KineticParams& kp)
{
    KineticSourceT<S> src;
    if (!kp.enabled) return src;

    const S P_e = props::equilibrium_pressure(T, salinity, db);
    const S drive = P_e - P_g;
    const bool dissociating = value_of(drive) > 0.0;
    const ReactionMode mode = dissociating ? ReactionMode::dissociation : ReactionMode::formation;
    const double k_reac = dissociating ? kp.k_reac_dissociation : kp.k_reac_formation;

    const S S_g = 1.0 - S_w - S_h;
    src.A_rs = reaction_surface_area(phi, S_w, S_g, S_h, mode, kp);
    src.n_dot = k_reac * src.A_rs * drive;

    src.g_CH4 = db.M_CH4 * src.n_dot;
    src.g_H2O = db.N_hyd * db.M_H2O * src.n_dot;
    src.g_h = -(src.g_CH4 + src.g_H2O);
    src.Q_h = -src.n_dot * props::heat_of_reaction(T, db);
    return src;
}

} // namespace kinetics

} // namespace hydresim
