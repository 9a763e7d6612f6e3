#include "qbounce/freefall.hpp"

#include <cmath>

#include "qbounce/errors.hpp"
#include "qbounce/fft.hpp"

namespace qbounce {

namespace kernels {

namespace {

std::complex<double> kinetic_phase(double p, double m, double g, double T,
                                   double hbar) {
    const double ps = p - m * g * T;
    const double theta = -T / hbar *
                         (ps * ps / (2.0 * m) + g * ps * T / 2.0 +
                          m * g * g * T * T / 6.0);
    return std::polar(1.0, theta);
}

} // namespace

void freefall_phase(const MomentumGrid& mg, double m, double g, double T,
                    double hbar, std::vector<std::complex<double>>& spectrum) {
    const auto n = static_cast<std::int64_t>(spectrum.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        const auto u = static_cast<std::size_t>(j);
        spectrum[u] *= kinetic_phase(mg.p(u), m, g, T, hbar);
    }
}

void freefall_phase_serial(const MomentumGrid& mg, double m, double g,
                           double T, double hbar,
                           std::vector<std::complex<double>>& spectrum) {
    for (std::size_t u = 0; u < spectrum.size(); ++u)
        spectrum[u] *= kinetic_phase(mg.p(u), m, g, T, hbar);
}

void linear_z_phase(const Grid& grid, double k,
                    std::vector<std::complex<double>>& values) {
    const auto n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        const auto u = static_cast<std::size_t>(j);
        values[u] *= std::polar(1.0, k * grid.z(u));
    }
}

void linear_z_phase_serial(const Grid& grid, double k,
                           std::vector<std::complex<double>>& values) {
    for (std::size_t u = 0; u < values.size(); ++u)
        values[u] *= std::polar(1.0, k * grid.z(u));
}

} // namespace kernels

namespace detail {

WaveField freefall_impl(const WaveField& psi, const WavePacketParams& params,
                        double T, bool apply_z_phase,
                        const PhysicalConstants& pc) {
    if (!(T >= 0.0) || !std::isfinite(T))
        throw DomainError("freefall: T must be nonnegative and finite");
    if (!(params.m > 0.0) || !(params.g >= 0.0) ||
        !std::isfinite(params.m) || !std::isfinite(params.g))
        throw DomainError("freefall: need m > 0 and g >= 0");
    if (psi.values.size() != psi.grid.n_z)
        throw DomainError("freefall: value count does not match the grid");

    const double norm_before = field_norm2(psi);
    const std::size_t edge = psi.grid.n_z / 200;
    double edge_before = 0.0;
    for (std::size_t j = 0; j < edge; ++j)
        edge_before += std::norm(psi.values[j]) +
                       std::norm(psi.values[psi.values.size() - 1 - j]);
    edge_before *= psi.grid.delta_z;

    WaveField out;
    out.grid = psi.grid;
    out.values = psi.values;
    fft_forward(out.values);
    const MomentumGrid mg = momentum_grid(psi.grid, pc);
    kernels::freefall_phase(mg, params.m, params.g, T, pc.hbar, out.values);
    fft_inverse(out.values);
    if (apply_z_phase)
        kernels::linear_z_phase(out.grid,
                                -params.m * params.g * T / pc.hbar,
                                out.values);

    double norm_after = 0.0;
    double edge_after = 0.0;
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        const double rho = std::norm(out.values[j]);
        norm_after += rho;
        if (j < edge || j >= out.values.size() - edge) edge_after += rho;
    }
    norm_after *= psi.grid.delta_z;
    edge_after *= psi.grid.delta_z;

    if (std::fabs(norm_after - norm_before) > 1e-10 * norm_before)
        throw NumericalError("freefall: norm not preserved by the step");
    if (edge_after > edge_before + 1e-6 * norm_after)
        throw LeakageError(
            "freefall: more than 1e-6 of the mass leaked into the outer "
            "percent of the grid; extend the grid");
    return out;
}

} // namespace detail

WaveField freefall_propagate(const WaveField& psi,
                             const WavePacketParams& params, double T,
                             const PhysicalConstants& pc) {
    return detail::freefall_impl(psi, params, T, true, pc);
}

WaveField snapshot_freefall(const WaveField& psi_d_ext,
                            const WavePacketParams& params, double t,
                            const PhysicalConstants& pc) {
    if (!(t >= 0.0) || !(t <= params.fall_time()))
        throw DomainError("snapshot_freefall: t must lie in [0, (D-d)/V]");
    return detail::freefall_impl(psi_d_ext, params, t, true, pc);
}

WaveField embed_field(const WaveField& psi, const Grid& target) {
    if (target.delta_z != psi.grid.delta_z)
        throw ConfigError("embed_field: grids must share delta_z");
    if (target.i_min > psi.grid.i_min ||
        target.i_min + static_cast<std::int64_t>(target.n_z) <
            psi.grid.i_min + static_cast<std::int64_t>(psi.grid.n_z))
        throw ConfigError("embed_field: target does not contain the source");
    WaveField out;
    out.grid = target;
    out.values.assign(target.n_z, 0.0);
    const auto j0 = static_cast<std::size_t>(psi.grid.i_min - target.i_min);
    for (std::size_t j = 0; j < psi.values.size(); ++j)
        out.values[j0 + j] = psi.values[j];
    return out;
}

} // namespace qbounce
