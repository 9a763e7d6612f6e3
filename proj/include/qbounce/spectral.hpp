#pragma once
#include <complex>
#include <vector>

#include "qbounce/airy.hpp"
#include "qbounce/units.hpp"

namespace qbounce {

// Expansion of the initial packet over the bound states of the mirror:
// chi_n(z) = Ai(z / l_g - lambda_n) / (sqrt(l_g) Ai'(-lambda_n)),
// E_n = e_g lambda_n.  Coefficients come from the closed-form overlap of a
// Gaussian packet with chi_n.
struct SpectralDecomposition {
    WavePacketParams params;
    UnitSet units;
    int n_gqs = 0;
    std::vector<double> lambda;              // lambda_n, ascending
    std::vector<double> aip;                 // Ai'(-lambda_n)
    std::vector<std::complex<double>> coeff; // c_n

    // sum |c_n|^2 - 1; negative when weight is missing above n_gqs.
    double defect() const;
    // Mean of lambda_n under |c_n|^2, normalized by the captured weight.
    double mean_lambda() const;
};

SpectralDecomposition decompose(const WavePacketParams& params, int n_gqs,
                                const PhysicalConstants& pc = {});

// Smallest multiple of `granularity` at which the captured weight is within
// `tol` of one.  Throws ConvergenceError if `cap` modes do not suffice.
int truncation_order(const WavePacketParams& params, double tol,
                     int granularity = 500, int cap = 1000000,
                     const PhysicalConstants& pc = {});

namespace kernels {
void coefficients(const WavePacketParams& params, const UnitSet& units,
                  const std::vector<double>& lambda,
                  const std::vector<double>& aip, const PhysicalConstants& pc,
                  std::vector<std::complex<double>>& out);
void coefficients_serial(const WavePacketParams& params, const UnitSet& units,
                         const std::vector<double>& lambda,
                         const std::vector<double>& aip,
                         const PhysicalConstants& pc,
                         std::vector<std::complex<double>>& out);
} // namespace kernels

} // namespace qbounce
