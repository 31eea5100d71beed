#include "hydresim/kinetics.hpp"

namespace hydresim {

SurfaceAreaModel surface_area_model_from_string(const std::string& s)
{
    if (s == "saturation_product") return SurfaceAreaModel::saturation_product;
    if (s == "constant") return SurfaceAreaModel::constant;
    throw ConfigError("unknown surface area model '" + s + "'");
}

std::string to_string(SurfaceAreaModel m)
{
    return m == SurfaceAreaModel::saturation_product ? "saturation_product" : "constant";
}

void KineticParams::validate() const
{
    if (!(k_reac_formation > 0.0) || !(k_reac_dissociation > 0.0))
        throw ConfigError("kinetic rate constants must be positive");
    if (!(gamma_surface >= 0.0))
        throw ConfigError("gamma_surface must be non-negative");
}

} // namespace hydresim
