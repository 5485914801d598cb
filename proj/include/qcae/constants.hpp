#pragma once

#include <numbers>

namespace qcae::constants
{

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double boltzmann = 1.380649e-23;  // J/K
inline constexpr double hbar = 1.054571817e-34;  // J s

inline constexpr double coulomb_prefactor = 1.0 / (4.0 * std::numbers::pi * vacuum_permittivity);

inline constexpr double nm = 1e-9;
inline constexpr double ps = 1e-12;
inline constexpr double joule_per_mev = elementary_charge * 1e-3;

constexpr double to_mev(double joules) { return joules / joule_per_mev; }
constexpr double from_mev(double mev) { return mev * joule_per_mev; }

}  // namespace qcae::constants
