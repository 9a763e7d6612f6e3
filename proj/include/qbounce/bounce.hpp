#pragma once
#include "qbounce/spectral.hpp"
#include "qbounce/wavefield.hpp"

namespace qbounce {

// Mode amplitudes evolved to time t on the mirror, folded with the mode
// normalization: b_n = c_n exp(-i lambda_n t / t_g) / (sqrt(l_g) Ai'(-lambda_n)).
std::vector<std::complex<double>> bn_coefficients(
    const SpectralDecomposition& dec, double t);

// Field on the mirror at time t in [0, d/V], zero below the mirror surface.
// Uses the comb-convolution route: every mode is the same Airy kernel
// translated by lambda_n l_g, so the sum is a convolution of the sampled
// kernel with a two-point Hermite comb.
WaveField snapshot_on_mirror(const SpectralDecomposition& dec, double t,
                             const Grid& grid);

// Field at the end of the mirror, t = d / V.
WaveField psi_d_spline(const SpectralDecomposition& dec, const Grid& grid);

// Reference route: direct mode summation.  Quadratic cost; intended for
// test-sized grids.
WaveField psi_d_direct(const SpectralDecomposition& dec, const Grid& grid);

namespace kernels {

// Airy kernel and its derivative in physical units, sampled on the grid:
// a[j] = Ai(z_j / l_g), ap[j] = Ai'(z_j / l_g) / l_g.
void airy_row(const Grid& grid, double l_g, std::vector<double>& a,
              std::vector<double>& ap);
void airy_row_serial(const Grid& grid, double l_g, std::vector<double>& a,
                     std::vector<double>& ap);

// Hermite combs of length 2 n_z.  comb_a carries the value weights,
// comb_ap the (physical) derivative weights.
struct SplineCombs {
    std::vector<std::complex<double>> comb_a;
    std::vector<std::complex<double>> comb_ap;
};

void build_combs(const std::vector<double>& lambda,
                 const std::vector<std::complex<double>>& b, double l_g,
                 const Grid& grid, SplineCombs& out);
void build_combs_serial(const std::vector<double>& lambda,
                        const std::vector<std::complex<double>>& b, double l_g,
                        const Grid& grid, SplineCombs& out);

// out[j] = sum_n b_n Ai(z_j / l_g - lambda_n) for z_j >= 0, zero below.
void direct_sum(const std::vector<double>& lambda,
                const std::vector<std::complex<double>>& b, double l_g,
                const Grid& grid, std::vector<std::complex<double>>& out);
void direct_sum_serial(const std::vector<double>& lambda,
                       const std::vector<std::complex<double>>& b, double l_g,
                       const Grid& grid,
                       std::vector<std::complex<double>>& out);

} // namespace kernels

} // namespace qbounce
