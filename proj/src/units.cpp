#include "qbounce/units.hpp"

#include <cmath>

#include "qbounce/errors.hpp"

namespace qbounce {

UnitSet gqs_units(double mass, double g, const PhysicalConstants& pc) {
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw DomainError("gqs_units: mass must be positive and finite");
    if (!(g > 0.0) || !std::isfinite(g))
        throw DomainError("gqs_units: g must be positive and finite");
    UnitSet u;
    u.l_g = std::cbrt(pc.hbar * pc.hbar / (2.0 * g * mass * mass));
    u.e_g = mass * g * u.l_g;
    u.t_g = pc.hbar / u.e_g;
    return u;
}

double WavePacketParams::sigma_v(const PhysicalConstants& pc) const {
    return pc.hbar / (2.0 * m * sigma_z);
}

void WavePacketParams::validate() const {
    if (!(m > 0.0) || !std::isfinite(m))
        throw ConfigError("params: mass must be positive and finite");
    if (!(g > 0.0) || !std::isfinite(g))
        throw ConfigError("params: g must be positive and finite");
    if (!(z0 > 0.0) || !std::isfinite(z0))
        throw ConfigError("params: z0 must be positive and finite");
    if (!std::isfinite(v0))
        throw ConfigError("params: v0 must be finite");
    if (!(sigma_z > 0.0) || !std::isfinite(sigma_z))
        throw ConfigError("params: sigma_z must be positive and finite");
    if (!(V > 0.0) || !std::isfinite(V))
        throw ConfigError("params: V must be positive and finite");
    if (!(d > 0.0) || !std::isfinite(d))
        throw ConfigError("params: d must be positive and finite");
    if (!(D >= d) || !std::isfinite(D))
        throw ConfigError("params: D must be finite and at least d");
}

} // namespace qbounce
