#include "qbounce/wavepacket.hpp"

#include <cmath>

#include "qbounce/errors.hpp"

namespace qbounce {

namespace {

std::complex<double> packet_value(double z, const WavePacketParams& p,
                                  double amp, double kv) {
    const double u = z - p.z0;
    const double envelope =
        amp * std::exp(-u * u / (4.0 * p.sigma_z * p.sigma_z));
    return std::polar(envelope, kv * u);
}

} // namespace

namespace kernels {

void gaussian_fill(const Grid& grid, const WavePacketParams& params,
                   const PhysicalConstants& pc,
                   std::vector<std::complex<double>>& out) {
    out.resize(grid.n_z);
    const double amp =
        std::pow(2.0 * kPi * params.sigma_z * params.sigma_z, -0.25);
    const double kv = params.m * params.v0 / pc.hbar;
    const auto n = static_cast<std::int64_t>(grid.n_z);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j)
        out[static_cast<std::size_t>(j)] =
            packet_value(grid.z(static_cast<std::size_t>(j)), params, amp, kv);
}

void gaussian_fill_serial(const Grid& grid, const WavePacketParams& params,
                          const PhysicalConstants& pc,
                          std::vector<std::complex<double>>& out) {
    out.resize(grid.n_z);
    const double amp =
        std::pow(2.0 * kPi * params.sigma_z * params.sigma_z, -0.25);
    const double kv = params.m * params.v0 / pc.hbar;
    for (std::size_t j = 0; j < grid.n_z; ++j)
        out[j] = packet_value(grid.z(j), params, amp, kv);
}

} // namespace kernels

WaveField initial_wavepacket(const Grid& grid, const WavePacketParams& params,
                             const PhysicalConstants& pc) {
    params.validate();
    if (grid.z_min() > params.z0 - 8.0 * params.sigma_z ||
        grid.z(grid.n_z - 1) < params.z0 + 8.0 * params.sigma_z)
        throw ConfigError(
            "initial_wavepacket: grid does not span z0 +/- 8 sigma_z");
    WaveField field;
    field.grid = grid;
    kernels::gaussian_fill(grid, params, pc, field.values);
    return field;
}

} // namespace qbounce
