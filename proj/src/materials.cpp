#include "hydresim/materials.hpp"

#include <algorithm>
#include <cmath>

namespace hydresim {

Regime regime_from_string(const std::string& s)
{
    if (s == "formation") return Regime::formation;
    if (s == "dissociation") return Regime::dissociation;
    throw ConfigError("unknown regime '" + s + "' (expected formation|dissociation)");
}

std::string to_string(Regime r)
{
    return r == Regime::formation ? "formation" : "dissociation";
}

void MaterialDB::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ConfigError(std::string("material constant ") + name + " must be positive");
    };
    positive(rho_h, "rho_h");
    positive(rho_s, "rho_s");
    positive(rho_w_liquid, "rho_w_liquid");
    positive(k_c_h, "k_c_h");
    positive(k_c_s, "k_c_s");
    positive(Cp_w, "Cp_w");
    positive(Cv_h, "Cv_h");
    positive(Cv_s, "Cv_s");
    positive(lambda_BC, "lambda_BC");
    positive(P_entry, "P_entry");
    positive(K_0, "K_0");
    positive(N_hyd, "N_hyd");
    positive(P_e_scale, "P_e_scale");
    if (!(phi_0 > 0.0 && phi_0 < 1.0)) throw ConfigError("phi_0 must lie in (0,1)");
    if (S_wr < 0.0 || S_wr >= 1.0) throw ConfigError("S_wr must lie in [0,1)");
    if (alpha_biot < 0.0 || alpha_biot > 1.0) throw ConfigError("alpha_biot must lie in [0,1]");
    if (nu_sh <= -1.0 || nu_sh >= 0.5) throw ConfigError("nu_sh must lie in (-1, 0.5)");
    if (salinity_slope < 0.0) throw ConfigError("salinity_slope must be non-negative");
    for (const ElasticLaw* law : {&formation_law, &dissociation_law}) {
        positive(law->E_s, "E_s");
        if (law->E_h < 0.0 || law->c <= 0.0)
            throw ConfigError("elastic law needs E_h >= 0 and c > 0");
    }
}

namespace props {

double cubic_largest_root(double c2, double c1, double c0)
{
    auto g = [&](double z) { return ((z + c2) * z + c1) * z + c0; };

    double hi = 2.0;
    while (g(hi) <= 0.0 && hi < 1e9) hi *= 2.0;
    if (g(hi) <= 0.0) throw EosError("no gas-branch compressibility root found");

    // scan downward from hi; the first non-positive sample brackets the
    // largest root from below
    const int n = 512;
    double a = -1.0, b = hi;
    for (int i = 1; i <= n; ++i) {
        const double z = hi * (n - i) / n;
        if (g(z) <= 0.0) {
            a = z;
            break;
        }
        b = z;
    }
    if (a < 0.0)
        throw EosError("compressibility cubic has no root in the vapor branch");

    for (int i = 0; i < 80 && b - a > 1e-15; ++i) {
        const double m = 0.5 * (a + b);
        (g(m) <= 0.0 ? a : b) = m;
    }
    double z = 0.5 * (a + b);
    for (int i = 0; i < 4; ++i) {
        const double dg = (3.0 * z + 2.0 * c2) * z + c1;
        if (dg == 0.0) break;
        z -= g(z) / dg;
    }
    if (!(z > 0.0) || !std::isfinite(z))
        throw EosError("compressibility root did not converge");
    return z;
}

} // namespace props

} // namespace hydresim
