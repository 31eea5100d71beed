#include "hydresim/units.hpp"

#include "hydresim/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>

namespace hydresim::units {

namespace {

const std::map<std::string, double>& factor_table()
{
    static const std::map<std::string, double> table = {
        {"Pa", 1.0},       {"kPa", 1e3},      {"MPa", 1e6},     {"GPa", 1e9},
        {"bar", 1e5},      {"s", 1.0},        {"min", 60.0},    {"h", 3600.0},
        {"d", 86400.0},    {"day", 86400.0},  {"K", 1.0},       {"m", 1.0},
        {"mm", 1e-3},      {"cm", 1e-2},      {"m2", 1.0},      {"m3", 1.0},
        {"kg", 1.0},       {"g", 1e-3},       {"mol", 1.0},     {"%", 1e-2},
        {"-", 1.0},        {"Pa.s", 1.0},     {"W/m/K", 1.0},   {"J/kg/K", 1.0},
        {"J/mol", 1.0},    {"kJ/mol", 1e3},   {"kg/m3", 1.0},   {"m2/m3", 1.0},
        {"mol/m2/Pa/s", 1.0},
    };
    return table;
}

} // namespace

double unit_factor(const std::string& symbol)
{
    auto it = factor_table().find(symbol);
    if (it == factor_table().end())
        throw ConfigError("unknown unit '" + symbol + "'");
    return it->second;
}

double parse_quantity(const std::string& text)
{
    const char* s = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(s, &end);
    if (end == s)
        throw ConfigError("cannot parse number from '" + text + "'");
    std::string unit(end);
    // trim
    const auto b = unit.find_first_not_of(" \t");
    const auto e = unit.find_last_not_of(" \t");
    unit = (b == std::string::npos) ? "" : unit.substr(b, e - b + 1);
    if (unit.empty())
        return value;
    if (unit == "degC")
        return value + 273.15;
    return value * unit_factor(unit);
}

std::string format_quantity(double si_value, const std::string& unit_hint)
{
    char buf[64];
    if (unit_hint.empty()) {
        std::snprintf(buf, sizeof(buf), "%.17g", si_value);
        return buf;
    }
    if (unit_hint == "degC") {
        std::snprintf(buf, sizeof(buf), "%.17g degC", si_value - 273.15);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g %s", si_value / unit_factor(unit_hint),
                  unit_hint.c_str());
    return buf;
}

} // namespace hydresim::units
