#include "qbounce/wavefield.hpp"

#include <cmath>

#include "qbounce/errors.hpp"
#include "qbounce/fft.hpp"

namespace qbounce {

double field_norm2(const WaveField& field) {
    double s = 0.0;
    for (const auto& v : field.values) s += std::norm(v);
    return s * field.grid.delta_z;
}

ZStats field_zstats(const WaveField& field) {
    if (field.values.size() != field.grid.n_z)
        throw DomainError("field_zstats: value count does not match the grid");
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < field.values.size(); ++j) {
        const double rho = std::norm(field.values[j]);
        const double z = field.grid.z(j);
        s0 += rho;
        s1 += rho * z;
        s2 += rho * z * z;
    }
    if (!(s0 > 0.0))
        throw DomainError("field_zstats: field has zero norm");
    ZStats st;
    st.norm2 = s0 * field.grid.delta_z;
    st.mean_z = s1 / s0;
    st.sigma_z = std::sqrt(std::max(0.0, s2 / s0 - st.mean_z * st.mean_z));
    return st;
}

FieldMoments field_moments(const WaveField& field, const PhysicalConstants& pc) {
    if (field.values.size() != field.grid.n_z)
        throw DomainError("field_moments: value count does not match the grid");
    const std::size_t n = field.grid.n_z;
    const double dz = field.grid.delta_z;

    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double rho = std::norm(field.values[j]);
        const double z = field.grid.z(j);
        s0 += rho;
        s1 += rho * z;
        s2 += rho * z * z;
    }
    if (!(s0 > 0.0))
        throw DomainError("field_moments: field has zero norm");

    FieldMoments mom;
    mom.norm2 = s0 * dz;
    mom.mean_z = s1 / s0;
    mom.var_z = std::max(0.0, s2 / s0 - mom.mean_z * mom.mean_z);

    auto spectrum = field.values;
    fft_forward(spectrum);
    const MomentumGrid mg = momentum_grid(field.grid, pc);

    double w0 = 0.0, w1 = 0.0, w2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::norm(spectrum[j]);
        const double k = mg.p(j) / pc.hbar;
        w0 += w;
        w1 += w * k;
        w2 += w * k * k;
    }
    const double mean_k = w1 / w0;
    const double var_k = std::max(0.0, w2 / w0 - mean_k * mean_k);
    mom.mean_p = pc.hbar * mean_k;
    mom.var_p = pc.hbar * pc.hbar * var_k;

    // Spatial derivative via the spectrum, then the symmetrized covariance
    // <zp + pz>/2 - <z><p> as an imaginary-part integral.
    for (std::size_t j = 0; j < n; ++j) {
        const double k = mg.p(j) / pc.hbar;
        spectrum[j] *= std::complex<double>(0.0, k);
    }
    fft_inverse(spectrum);
    double c = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::complex<double> t =
            std::conj(field.values[j]) * field.grid.z(j) * spectrum[j];
        c += t.imag();
    }
    mom.cov_zp = pc.hbar * c * dz / mom.norm2 - mom.mean_z * mom.mean_p;
    return mom;
}

} // namespace qbounce
