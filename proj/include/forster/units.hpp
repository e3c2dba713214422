#pragma once

#include <numbers>

// Internal unit system: MHz for energies (E/h), microseconds for time,
// micrometres for distances, V/cm for fields, kelvin for temperature.
// Matrix elements of r are kept in atomic units (a0) until they meet a
// distance or a field.
namespace forster::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hartree_mhz = 6.579683920502e9;
inline constexpr double bohr_um = 5.29177210903e-5;
// e * a0 * (1 V/cm) / h in MHz.
inline constexpr double dipole_field_mhz = 1.2795448;
inline constexpr double boltzmann_hartree_per_k = 3.166811563e-6;
inline constexpr double atomic_time_s = 2.4188843265857e-17;
inline constexpr double speed_of_light_au = 137.035999084;
inline constexpr double electron_mass_u = 5.48579909065e-4;

inline constexpr double ghz_to_mhz = 1e3;
inline constexpr double ns_to_us = 1e-3;
inline constexpr double s_to_us = 1e6;

}  // namespace forster::units
