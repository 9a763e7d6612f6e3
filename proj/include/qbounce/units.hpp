#pragma once
#include "qbounce/constants.hpp"

namespace qbounce {

// Natural scales of the bouncing problem: l_g = (hbar^2 / (2 g m^2))^{1/3},
// e_g = m g l_g, t_g = hbar / e_g.
struct UnitSet {
    double l_g;   // m
    double e_g;   // J
    double t_g;   // s
};

UnitSet gqs_units(double mass, double g, const PhysicalConstants& pc = {});

struct WavePacketParams {
    double m = kMassHydrogen;   // probe mass (kg)
    double g = 9.81;            // gravitational acceleration (m/s^2)
    double z0 = 1e-3;           // release height above the mirror (m)
    double v0 = -91.5e-3;       // initial vertical velocity (m/s)
    double sigma_z = 0.4e-6;    // initial position spread (m)
    double V = 1.0;             // horizontal transport velocity (m/s)
    double d = 30e-3;           // mirror length (m)
    double D = 300e-3;          // detector station along the beam (m)

    // Minimum-uncertainty velocity spread, hbar / (2 m sigma_z).
    double sigma_v(const PhysicalConstants& pc = {}) const;

    // Time on the mirror and time in free fall.
    double mirror_time() const { return d / V; }
    double fall_time() const { return (D - d) / V; }

    void validate() const;
};

} // namespace qbounce
