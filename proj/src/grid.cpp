#include "qbounce/grid.hpp"

#include <algorithm>
#include <cmath>

#include "qbounce/airy.hpp"
#include "qbounce/errors.hpp"

namespace qbounce {

std::size_t next_pow2(std::size_t x) {
    std::size_t p = 1;
    while (p < x) {
        if (p > (std::size_t{1} << 62))
            throw CapacityError("next_pow2: overflow");
        p <<= 1;
    }
    return p;
}

double nyquist_spacing(const UnitSet& units, int n_gqs, double safety) {
    if (n_gqs < 1)
        throw ConfigError("nyquist_spacing: n_gqs must be at least 1");
    if (!(safety > 0.0) || !(safety <= 0.5))
        throw ConfigError("nyquist_spacing: safety must lie in (0, 0.5]");
    const double lam = airy_zero(n_gqs);
    return safety * kPi * units.l_g / std::sqrt(lam);
}

Grid first_phase_grid(const UnitSet& units, int n_gqs, double delta_z,
                      double x_max, std::size_t memory_cap) {
    if (n_gqs < 1)
        throw ConfigError("first_phase_grid: n_gqs must be at least 1");
    if (!(delta_z > 0.0) || !std::isfinite(delta_z))
        throw ConfigError("first_phase_grid: delta_z must be positive and finite");
    if (!(x_max > 0.0) || !std::isfinite(x_max))
        throw ConfigError("first_phase_grid: x_max must be positive and finite");
    const double lam = airy_zero(n_gqs);
    const double bound = kPi * units.l_g / std::sqrt(lam);
    if (delta_z > 0.5 * bound)
        throw ConfigError(
            "first_phase_grid: delta_z exceeds half the Nyquist bound for the "
            "highest retained mode");
    const double zmax_req = (lam + x_max) * units.l_g;
    const auto nhalf =
        static_cast<std::size_t>(std::ceil(zmax_req / delta_z));
    const std::size_t n_z = next_pow2(2 * nhalf);
    if (n_z > memory_cap)
        throw CapacityError("first_phase_grid: grid of " + std::to_string(n_z) +
                            " samples exceeds the memory cap of " +
                            std::to_string(memory_cap));
    Grid g;
    g.delta_z = delta_z;
    g.n_z = n_z;
    g.i_min = -static_cast<std::int64_t>(n_z / 2);
    return g;
}

Grid extend_for_freefall(const Grid& grid, const WavePacketParams& params,
                         const FieldMoments& moments, double T,
                         std::size_t memory_cap) {
    if (!(T >= 0.0) || !std::isfinite(T))
        throw DomainError("extend_for_freefall: T must be nonnegative and finite");
    if (!(moments.norm2 > 0.0))
        throw DomainError("extend_for_freefall: field has zero norm");

    const double m = params.m;
    const double g = params.g;
    const PhysicalConstants pc;

    const double z_cl =
        moments.mean_z + (moments.mean_p / m) * T - 0.5 * g * T * T;

    // Spread acquired during the fall, on top of what the field already has.
    const double var_boost =
        (T / m) * (T / m) * moments.var_p + 2.0 * (T / m) * moments.cov_zp;
    const double sigma_margin = std::sqrt(std::max(0.0, var_boost));

    // Local fringe scale of the interference pattern at the detector.
    const double sigma_z_now = std::sqrt(std::max(0.0, moments.var_z));
    const double lambda_est =
        sigma_z_now > 0.0 ? 2.0 * kPi * pc.hbar * T / (m * 4.0 * sigma_z_now)
                          : 0.0;

    double z_min_req = z_cl - std::max(20.0 * sigma_margin, 50.0 * lambda_est);
    z_min_req = std::min(z_min_req, grid.z_min());

    const double span = grid.z_max_edge() - z_min_req;
    const auto n_req =
        static_cast<std::size_t>(std::ceil(span / grid.delta_z));
    const std::size_t n_ext = next_pow2(std::max(n_req, grid.n_z));
    if (n_ext > memory_cap)
        throw CapacityError("extend_for_freefall: grid of " +
                            std::to_string(n_ext) +
                            " samples exceeds the memory cap of " +
                            std::to_string(memory_cap));
    Grid out;
    out.delta_z = grid.delta_z;
    out.n_z = n_ext;
    out.i_min = grid.i_min + static_cast<std::int64_t>(grid.n_z) -
                static_cast<std::int64_t>(n_ext);
    return out;
}

MomentumGrid momentum_grid(const Grid& grid, const PhysicalConstants& pc) {
    if (grid.n_z == 0)
        throw DomainError("momentum_grid: empty grid");
    MomentumGrid mg;
    mg.n = grid.n_z;
    mg.delta_p = 2.0 * kPi * pc.hbar /
                 (static_cast<double>(grid.n_z) * grid.delta_z);
    return mg;
}

} // namespace qbounce
