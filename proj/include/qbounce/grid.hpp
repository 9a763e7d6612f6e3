#pragma once
#include <cstddef>
#include <cstdint>

#include "qbounce/constants.hpp"
#include "qbounce/units.hpp"

namespace qbounce {

// Uniform spatial grid, n_z a power of two, with z = 0 falling exactly on a
// node.  z_min is stored as an integer node count times delta_z so the
// alignment survives extension.
struct Grid {
    double delta_z = 0.0;
    std::int64_t i_min = 0;   // index of the z_min node relative to z = 0
    std::size_t n_z = 0;

    double z_min() const { return static_cast<double>(i_min) * delta_z; }
    double z_max_edge() const {
        return static_cast<double>(i_min + static_cast<std::int64_t>(n_z)) * delta_z;
    }
    double z(std::size_t j) const {
        return static_cast<double>(i_min + static_cast<std::int64_t>(j)) * delta_z;
    }
    // Index of the z = 0 node.
    std::size_t zero_index() const { return static_cast<std::size_t>(-i_min); }
    double length() const { return static_cast<double>(n_z) * delta_z; }
};

std::size_t next_pow2(std::size_t x);

constexpr std::size_t kDefaultMemoryCap = std::size_t{1} << 26;

// Largest spacing that resolves the fastest mode, times a safety factor:
// safety * pi * l_g / sqrt(lambda_n).
double nyquist_spacing(const UnitSet& units, int n_gqs, double safety);

// Symmetric grid covering the classically allowed region of the highest
// retained mode plus x_max gravitational lengths of evanescent tail.
Grid first_phase_grid(const UnitSet& units, int n_gqs, double delta_z,
                      double x_max = 10.0,
                      std::size_t memory_cap = kDefaultMemoryCap);

// Second moments of a field needed for grid extension and spectra.
struct FieldMoments {
    double norm2 = 0.0;    // integral of |psi|^2
    double mean_z = 0.0;   // m
    double var_z = 0.0;    // m^2
    double mean_p = 0.0;   // kg m/s
    double var_p = 0.0;    // (kg m/s)^2
    double cov_zp = 0.0;   // m kg m/s
};

// Extend the grid downward for a free fall of duration T, keeping the top
// edge and the spacing fixed.  The new z_min covers the classical drop plus
// margins for fall-induced spreading and for the local fringe scale.  The
// grid never shrinks; T = 0 returns the input grid.
Grid extend_for_freefall(const Grid& grid, const WavePacketParams& params,
                         const FieldMoments& moments, double T,
                         std::size_t memory_cap = kDefaultMemoryCap);

// FFT-conjugate momentum grid in fftfreq order, p_j = 2 pi hbar j~ / (n dz)
// with j~ = j for j < n/2 and j - n otherwise.  Values are produced lazily
// so large grids carry no storage cost.
struct MomentumGrid {
    double delta_p = 0.0;
    std::size_t n = 0;

    double p(std::size_t j) const {
        const auto jn = static_cast<std::int64_t>(j);
        const auto n2 = static_cast<std::int64_t>(n / 2);
        const std::int64_t folded = jn < n2 ? jn : jn - static_cast<std::int64_t>(n);
        return delta_p * static_cast<double>(folded);
    }
    double max_abs_p() const { return delta_p * static_cast<double>(n / 2); }
};

MomentumGrid momentum_grid(const Grid& grid, const PhysicalConstants& pc = {});

} // namespace qbounce
