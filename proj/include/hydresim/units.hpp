#pragma once

#include <string>

namespace hydresim::units {

/// Parse "12.5 MPa", "120 s", "275.15 K", "40 mm", "2 degC", "0.35", ...
/// into SI (Pa, s, K, m, kg, mol and products thereof). Unit-less strings
/// parse as plain numbers. Throws ConfigError on unknown units or garbage.
double parse_quantity(const std::string& text);

/// SI value back to a canonical "value unit_hint" string (lossless, %.17g).
/// unit_hint is written verbatim after converting value into that unit.
std::string format_quantity(double si_value, const std::string& unit_hint);

/// Multiplier to SI for a unit symbol ("MPa" -> 1e6). Affine units (degC)
/// are rejected here; parse_quantity handles them.
double unit_factor(const std::string& symbol);

} // namespace hydresim::units
