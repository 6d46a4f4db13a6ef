#pragma once

/**
 * @file constants.hpp
 * @brief Fundamental physical constants (CODATA 2018, SI) and experiment presets.
 *
 * All values carry 12 significant digits so that every downstream number is
 * bit-reproducible. Derived Planck-scale quantities are computed from the
 * table rather than hard-coded.
 */

#include <cmath>

namespace simqg {
namespace constants {

/// c — speed of light [m/s] (exact).
inline constexpr double c = 299792458.0;

/// h — Planck constant [J·s] (exact since 2019 SI).
inline constexpr double h_planck = 6.62607015e-34;

/// ħ — reduced Planck constant [J·s].
inline constexpr double hbar = 1.054571817646e-34;

/// G — Newtonian constant of gravitation [m³/(kg·s²)].
inline constexpr double G = 6.67430e-11;

/// k_B — Boltzmann constant [J/K] (exact).
inline constexpr double k_B = 1.380649e-23;

/// m_e — electron mass [kg].
inline constexpr double m_e = 9.10938370150e-31;

/// u — unified atomic mass unit [kg].
inline constexpr double amu = 1.66053906660e-27;

/// g_n — standard acceleration of gravity [m/s²] (exact).
inline constexpr double g_std = 9.80665;

/// M_p — Planck mass sqrt(ħc/G) [kg].
inline const double planck_mass = std::sqrt(hbar * c / G);

/// l_p — Planck length ħ/(M_p c) [m].
inline const double planck_length = hbar / (planck_mass * c);

} // namespace constants

namespace presets {

/// Bulk diamond density [kg/m³].
inline constexpr double diamond_density = 3510.0;

/// Cs-133 atomic mass [kg].
inline constexpr double cs_mass = 2.2069e-25;

/// Rb-87 atomic mass [kg].
inline constexpr double rb_mass = 86.909180527 * constants::amu;

/// One C-12 atom [kg]; default nanodiamond mass uncertainty.
inline constexpr double c12_mass = 12.0 * constants::amu;

/// Effective wavevector of a two-photon 637 nm Raman transition [1/m].
inline const double k_raman_637 = 2.0 * (2.0 * M_PI / 637e-9);

/// Round-number wavevector used for the bound sweeps [1/m].
inline constexpr double k_nominal = 2e7;

/// Relative uncertainty of h/m_Cs from the 2002 Cs photon-recoil
/// measurement (Wicht et al.).
inline constexpr double cs_recoil_rel_unc = 1.5e-8;

/// Relative uncertainty of h/m_Rb from the 2011 Rb recoil measurement
/// (Bouchendira et al.).
inline constexpr double rb_recoil_rel_unc = 1.2e-9;

/// Δ(ħ/m_e) from electron magnetic-moment anomaly data [J·s/kg].
inline constexpr double hbar_over_me_unc = 5.9e-14;

} // namespace presets
} // namespace simqg
