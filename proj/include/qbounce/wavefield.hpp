#pragma once
#include <complex>
#include <vector>

#include "qbounce/grid.hpp"

namespace qbounce {

// A complex field sampled on a Grid.
struct WaveField {
    Grid grid;
    std::vector<std::complex<double>> values;
};

// Integral of |psi|^2 over the grid.  Serial fixed-order reduction.
double field_norm2(const WaveField& field);

// Norm and position statistics only; no FFT involved.
struct ZStats {
    double norm2 = 0.0;
    double mean_z = 0.0;
    double sigma_z = 0.0;
};

ZStats field_zstats(const WaveField& field);

// Full position and momentum moments.  Momentum statistics come from the
// field's spectrum; the position-momentum covariance uses the symmetrized
// operator ordering.
FieldMoments field_moments(const WaveField& field,
                           const PhysicalConstants& pc = {});

} // namespace qbounce
