#include "qbounce/spectral.hpp"

#include <cmath>
#include <string>

#include "qbounce/errors.hpp"

namespace qbounce {

namespace {

// Scales shared by every mode of one decomposition.
struct OverlapScales {
    double z0l;      // z0 / l_g
    double s2;       // (sigma_z / l_g)^2
    double vred;     // v0 t_g / l_g
    double prefac;   // (8 pi)^{1/4} sqrt(sigma_z / l_g)
};

OverlapScales overlap_scales(const WavePacketParams& p, const UnitSet& u) {
    OverlapScales s;
    s.z0l = p.z0 / u.l_g;
    const double sl = p.sigma_z / u.l_g;
    s.s2 = sl * sl;
    s.vred = p.v0 * u.t_g / u.l_g;
    s.prefac = std::pow(8.0 * kPi, 0.25) * std::sqrt(sl);
    return s;
}

std::complex<double> mode_coefficient(const OverlapScales& s, double lambda_n,
                                      double aip_n) {
    const std::complex<double> xi(s.z0l - lambda_n + s.s2 * s.s2,
                                  s.vred * s.s2);
    const std::complex<double> eta(
        s.s2 * (s.z0l - lambda_n - s.vred * s.vred / 4.0 +
                2.0 * s.s2 * s.s2 / 3.0),
        s.s2 * s.s2 * s.vred);
    const std::complex<double> ai = airy_ai(xi);
    if (ai == 0.0 && eta.real() > 600.0)
        throw RangeError(
            "mode coefficient: overlap under/overflows; sigma_z is too large "
            "relative to l_g for the closed-form route");
    const std::complex<double> c =
        s.prefac / aip_n * ai * std::exp(eta);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw RangeError("mode coefficient: nonfinite overlap");
    return c;
}

// Runs fn(n) for n in [0, count) and rethrows the lowest-index failure, so
// the surfaced error does not depend on the thread count.
template <typename Fn>
void parallel_modes(std::size_t count, Fn&& fn) {
    std::vector<std::string> errors(count);
    bool failed = false;
    const auto nn = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < nn; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
#pragma omp atomic write
            failed = true;
        }
    }
    if (failed)
        for (std::size_t i = 0; i < count; ++i)
            if (!errors[i].empty())
                throw RangeError("mode " + std::to_string(i + 1) + ": " +
                                 errors[i]);
}

} // namespace

namespace kernels {

void coefficients(const WavePacketParams& params, const UnitSet& units,
                  const std::vector<double>& lambda,
                  const std::vector<double>& aip, const PhysicalConstants&,
                  std::vector<std::complex<double>>& out) {
    const OverlapScales s = overlap_scales(params, units);
    out.resize(lambda.size());
    parallel_modes(lambda.size(), [&](std::size_t i) {
        out[i] = mode_coefficient(s, lambda[i], aip[i]);
    });
}

void coefficients_serial(const WavePacketParams& params, const UnitSet& units,
                         const std::vector<double>& lambda,
                         const std::vector<double>& aip,
                         const PhysicalConstants&,
                         std::vector<std::complex<double>>& out) {
    const OverlapScales s = overlap_scales(params, units);
    out.resize(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        try {
            out[i] = mode_coefficient(s, lambda[i], aip[i]);
        } catch (const std::exception& e) {
            throw RangeError("mode " + std::to_string(i + 1) + ": " +
                             e.what());
        }
    }
}

} // namespace kernels

double SpectralDecomposition::defect() const {
    double s = 0.0;
    for (const auto& c : coeff) s += std::norm(c);
    return s - 1.0;
}

double SpectralDecomposition::mean_lambda() const {
    double w = 0.0, wl = 0.0;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        const double q = std::norm(coeff[i]);
        w += q;
        wl += q * lambda[i];
    }
    if (!(w > 0.0))
        throw DomainError("mean_lambda: decomposition carries no weight");
    return wl / w;
}

SpectralDecomposition decompose(const WavePacketParams& params, int n_gqs,
                                const PhysicalConstants& pc) {
    params.validate();
    if (n_gqs < 1)
        throw ConfigError("decompose: n_gqs must be at least 1");
    SpectralDecomposition dec;
    dec.params = params;
    dec.units = gqs_units(params.m, params.g, pc);
    dec.n_gqs = n_gqs;
    ZeroTable table = airy_zeros(n_gqs);
    dec.lambda = std::move(table.lambda);
    dec.aip = std::move(table.aip);
    kernels::coefficients(params, dec.units, dec.lambda, dec.aip, pc,
                          dec.coeff);
    return dec;
}

int truncation_order(const WavePacketParams& params, double tol,
                     int granularity, int cap, const PhysicalConstants& pc) {
    params.validate();
    if (!(tol > 0.0))
        throw ConfigError("truncation_order: tol must be positive");
    if (granularity < 1)
        throw ConfigError("truncation_order: granularity must be at least 1");
    if (cap < granularity)
        throw ConfigError("truncation_order: cap must be at least granularity");
    const UnitSet units = gqs_units(params.m, params.g, pc);
    const OverlapScales s = overlap_scales(params, units);
    double weight = 0.0;
    for (int n = 1; n <= cap; ++n) {
        const double lam = airy_zero(n);
        const double aip_n = airy_ai_pair(-lam).aip;
        std::complex<double> c;
        try {
            c = mode_coefficient(s, lam, aip_n);
        } catch (const std::exception& e) {
            throw RangeError("mode " + std::to_string(n) + ": " + e.what());
        }
        weight += std::norm(c);
        if (n % granularity == 0 && std::fabs(weight - 1.0) <= tol)
            return n;
    }
    throw ConvergenceError(
        "truncation_order: captured weight not within " + std::to_string(tol) +
        " of one by mode " + std::to_string(cap));
}

} // namespace qbounce
