#pragma once

#include <numbers>

namespace scbec::constants {

// CODATA 2018. Every derived number in the library and in the run metadata
// comes from this table.
inline constexpr double pi = std::numbers::pi;
inline constexpr double planck = 6.62607015e-34;            // J s
inline constexpr double hbar = 1.054571817e-34;             // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double bohr_magneton = 9.2740100783e-24;   // J/T
inline constexpr double mu0 = 1.25663706212e-6;             // T m/A
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge); // Wb

inline constexpr double rb87_mass = 1.44316e-25;            // kg
inline constexpr double rb87_scattering_length = 5.2e-9;    // m, |F=2, mF=2>

}  // namespace scbec::constants
