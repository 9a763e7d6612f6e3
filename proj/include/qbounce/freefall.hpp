#pragma once
#include "qbounce/units.hpp"
#include "qbounce/wavefield.hpp"

namespace qbounce {

// Propagate a field through free flight of duration T in the uniform field g:
// a kinetic phase in momentum space around the falling frame followed by a
// linear phase in position space.  The step is exact for this Hamiltonian at
// any T.  Norm must survive the transform pair to 1e-12 and the outermost
// percent of the grid may not gain more than 1e-6 of the mass during the
// step (LeakageError otherwise).
WaveField freefall_propagate(const WaveField& psi,
                             const WavePacketParams& params, double T,
                             const PhysicalConstants& pc = {});

// Field a time t into the fall, 0 <= t <= (D - d) / V.
WaveField snapshot_freefall(const WaveField& psi_d_ext,
                            const WavePacketParams& params, double t,
                            const PhysicalConstants& pc = {});

// Copy a field into a larger grid with identical spacing and node alignment.
WaveField embed_field(const WaveField& psi, const Grid& target);

namespace detail {
// Density-only callers may skip the position-space phase; |psi|^2 does not
// see it.  The public entry point always applies it.
WaveField freefall_impl(const WaveField& psi, const WavePacketParams& params,
                        double T, bool apply_z_phase,
                        const PhysicalConstants& pc);
} // namespace detail

namespace kernels {
// Multiply the spectrum by the falling-frame kinetic phase.
void freefall_phase(const MomentumGrid& mg, double m, double g, double T,
                    double hbar, std::vector<std::complex<double>>& spectrum);
void freefall_phase_serial(const MomentumGrid& mg, double m, double g,
                           double T, double hbar,
                           std::vector<std::complex<double>>& spectrum);

// Multiply values[j] by exp(i k z_j).
void linear_z_phase(const Grid& grid, double k,
                    std::vector<std::complex<double>>& values);
void linear_z_phase_serial(const Grid& grid, double k,
                           std::vector<std::complex<double>>& values);
} // namespace kernels

} // namespace qbounce
