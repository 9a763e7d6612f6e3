#pragma once

namespace qbounce {

inline constexpr const char* kCodeVersion = "qbounce 1.0.0";

inline constexpr double kPi = 3.14159265358979323846;

struct PhysicalConstants {
    double hbar = 1.054571817e-34;      // J s
    double amu  = 1.66053906660e-27;    // kg
};

inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kAmu  = 1.66053906660e-27;

// Hydrogen-1 atomic mass in kg, the default probe particle.
inline constexpr double kMassHydrogen = 1.00782503207 * kAmu;

} // namespace qbounce
