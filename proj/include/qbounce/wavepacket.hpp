#pragma once
#include "qbounce/units.hpp"
#include "qbounce/wavefield.hpp"

namespace qbounce {

// Gaussian packet released at z0 with velocity v0:
// psi(z) = (2 pi sigma_z^2)^{-1/4} exp(-(z - z0)^2 / (4 sigma_z^2))
//        * exp(i m v0 (z - z0) / hbar).
// The grid must span [z0 - 8 sigma_z, z0 + 8 sigma_z].
WaveField initial_wavepacket(const Grid& grid, const WavePacketParams& params,
                             const PhysicalConstants& pc = {});

namespace kernels {
void gaussian_fill(const Grid& grid, const WavePacketParams& params,
                   const PhysicalConstants& pc,
                   std::vector<std::complex<double>>& out);
void gaussian_fill_serial(const Grid& grid, const WavePacketParams& params,
                          const PhysicalConstants& pc,
                          std::vector<std::complex<double>>& out);
} // namespace kernels

} // namespace qbounce
