#pragma once

#include <cmath>

namespace pawf {

// All signal powers use the 1-ohm convention: a power in V^2 is numerically
// a power in watts. dBm is therefore 10*log10(p / 1e-3).

inline double watt_to_dbm(double p) { return 10.0 * std::log10(p / 1e-3); }

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

} // namespace pawf
