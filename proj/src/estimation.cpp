#include "qbounce/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <string>
#include <utility>

#include "qbounce/constants.hpp"
#include "qbounce/errors.hpp"
#include "qbounce/fft.hpp"
#include "qbounce/rng.hpp"

namespace qbounce {
namespace {

std::vector<double> trapezoid_cdf(const std::vector<double>& pdf, double dz) {
    std::vector<double> cdf(pdf.size(), 0.0);
    for (std::size_t j = 1; j < pdf.size(); ++j) {
        cdf[j] = cdf[j - 1] + 0.5 * (pdf[j - 1] + pdf[j]) * dz;
    }
    const double total = cdf.back();
    if (!(total > 0.0)) {
        throw DomainError("detection density has no mass");
    }
    for (double& c : cdf) {
        c /= total;
    }
    cdf.back() = 1.0;
    return cdf;
}

DetectionDensity finalize_density(const Grid& grid, std::vector<double> pdf,
                                  double g_value) {
    double mass = 0.0;
    for (double p : pdf) {
        mass += p;
    }
    mass *= grid.delta_z;
    if (!(mass > 0.0)) {
        throw DomainError("detection density has no mass");
    }
    for (double& p : pdf) {
        p /= mass;
    }
    DetectionDensity density;
    density.grid = grid;
    density.cdf = trapezoid_cdf(pdf, grid.delta_z);
    density.pdf = std::move(pdf);
    density.g_value = g_value;
    return density;
}

// Linear interpolation of one density at position z; zero outside the
// window.
double density_at(const DetectionDensity& density, double z) {
    const Grid& grid = density.grid;
    const double u = (z - grid.z_min()) / grid.delta_z;
    if (!(u >= 0.0) || u > static_cast<double>(grid.n_z - 1)) {
        return 0.0;
    }
    std::size_t j = static_cast<std::size_t>(u);
    if (j > grid.n_z - 2) {
        j = grid.n_z - 2;
    }
    const double t = u - static_cast<double>(j);
    return (1.0 - t) * density.pdf[j] + t * density.pdf[j + 1];
}

} // namespace

DetectionDensity detection_density(const DetectorRun& run,
                                   const WindowSpec& window) {
    const Grid& grid = run.psi_det.grid;
    if (window.count < 2 || window.stride == 0) {
        throw ConfigError("detection window is degenerate");
    }
    const std::size_t last =
        window.start + (window.count - 1) * window.stride;
    if (last >= grid.n_z) {
        throw ConfigError("detection window does not fit the detector grid");
    }
    const auto stride = static_cast<std::int64_t>(window.stride);
    if ((grid.i_min + static_cast<std::int64_t>(window.start)) % stride != 0) {
        throw ConfigError("detection window start is not stride aligned");
    }

    Grid decimated;
    decimated.delta_z = grid.delta_z * static_cast<double>(window.stride);
    decimated.i_min =
        (grid.i_min + static_cast<std::int64_t>(window.start)) / stride;
    decimated.n_z = window.count;

    std::vector<double> pdf(window.count);
    for (std::size_t j = 0; j < window.count; ++j) {
        pdf[j] = std::norm(run.psi_det.values[window.start + j * window.stride]);
    }
    return finalize_density(decimated, std::move(pdf), run.dec.params.g);
}

DetectionDensity resolution_blur(const DetectionDensity& density,
                                 double sigma_det) {
    if (!std::isfinite(sigma_det) || sigma_det < 0.0) {
        throw DomainError("sigma_det must be finite and nonnegative");
    }
    if (sigma_det == 0.0) {
        return density;
    }
    const std::size_t n = density.pdf.size();
    std::vector<std::complex<double>> work(n);
    for (std::size_t j = 0; j < n; ++j) {
        work[j] = density.pdf[j];
    }
    fft_forward(work);
    const double dz = density.grid.delta_z;
    for (std::size_t j = 0; j < n; ++j) {
        const double wrapped = j < (n + 1) / 2
                                   ? static_cast<double>(j)
                                   : static_cast<double>(j) -
                                         static_cast<double>(n);
        const double k = 2.0 * kPi * wrapped / (static_cast<double>(n) * dz);
        work[j] *= std::exp(-0.5 * sigma_det * sigma_det * k * k);
    }
    fft_inverse(work);
    std::vector<double> pdf(n);
    for (std::size_t j = 0; j < n; ++j) {
        pdf[j] = std::max(0.0, work[j].real());
    }
    return finalize_density(density.grid, std::move(pdf), density.g_value);
}

std::vector<double> sample_events(const DetectionDensity& density,
                                  std::size_t n, std::uint64_t seed) {
    const std::vector<double>& cdf = density.cdf;
    if (cdf.size() < 2) {
        throw DomainError("density is too short to sample");
    }
    SplitMix64 rng(seed);
    std::vector<double> events(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto j = static_cast<std::size_t>(it - cdf.begin());
        const double lo = cdf[j - 1];
        const double width = cdf[j] - lo;
        const double frac = width > 0.0 ? (u - lo) / width : 0.0;
        events[i] = density.grid.z(j - 1) + frac * density.grid.delta_z;
    }
    return events;
}

DensityFamily build_density_family(const WavePacketParams& params,
                                   const PipelineOptions& opts, int count,
                                   double halfwidth_rel, double sigma_det,
                                   const PhysicalConstants& pc) {
    if (count < 3 || count % 2 == 0) {
        throw ConfigError("family count must be odd and at least 3");
    }
    if (!std::isfinite(halfwidth_rel) || halfwidth_rel <= 0.0) {
        throw ConfigError("family halfwidth must be positive");
    }

    const DetectorRun reference = propagate_to_detector(params, opts, pc);
    const SharedGeometry geometry = shared_geometry(reference);
    const WindowSpec window = detection_window(reference);

    DensityFamily family;
    family.params = params;
    family.g_grid.resize(static_cast<std::size_t>(count));
    family.densities.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double offset =
            halfwidth_rel * (2.0 * static_cast<double>(i) /
                                 static_cast<double>(count - 1) -
                             1.0);
        family.g_grid[static_cast<std::size_t>(i)] = params.g * (1.0 + offset);
    }
    family.g_grid[static_cast<std::size_t>(count) / 2] = params.g;

    for (double g : family.g_grid) {
        WavePacketParams shifted = params;
        shifted.g = g;
        const DetectorRun run =
            propagate_to_detector(shifted, opts, geometry, pc);
        family.densities.push_back(
            resolution_blur(detection_density(run, window), sigma_det));
    }
    return family;
}

double log_likelihood(const DensityFamily& family,
                      const std::vector<double>& events, double g) {
    if (family.densities.size() < 2) {
        throw DomainError("density family is too small");
    }
    const std::vector<double>& gs = family.g_grid;
    if (!(g >= gs.front()) || !(g <= gs.back())) {
        throw DomainError("g is outside the family span");
    }
    const double step = (gs.back() - gs.front()) /
                        static_cast<double>(gs.size() - 1);
    double u = (g - gs.front()) / step;
    std::size_t i = static_cast<std::size_t>(u);
    if (i > gs.size() - 2) {
        i = gs.size() - 2;
    }
    const double w = u - static_cast<double>(i);

    const double neg_inf = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double z : events) {
        const double lo = density_at(family.densities[i], z);
        const double hi = density_at(family.densities[i + 1], z);
        const double p = (1.0 - w) * lo + w * hi;
        if (!(p > 0.0)) {
            return neg_inf;
        }
        acc += std::log(p);
    }
    return acc;
}

double mle_estimate(const DensityFamily& family,
                    const std::vector<double>& events) {
    if (events.empty()) {
        throw DomainError("cannot estimate g from zero events");
    }
    const std::size_t count = family.g_grid.size();
    std::vector<double> ll(count);
    for (std::size_t i = 0; i < count; ++i) {
        ll[i] = log_likelihood(family, events, family.g_grid[i]);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i) {
        if (ll[i] > ll[best]) {
            best = i;
        }
    }
    if (!std::isfinite(ll[best])) {
        throw DomainError("events are outside the support of every family member");
    }
    if (best == 0 || best == count - 1) {
        throw WindowError("likelihood peaks at the family boundary");
    }

    const double lm = ll[best - 1];
    const double l0 = ll[best];
    const double lp = ll[best + 1];
    if (!std::isfinite(lm) || !std::isfinite(lp)) {
        return family.g_grid[best];
    }
    const double curvature = lm - 2.0 * l0 + lp;
    if (!(curvature < 0.0)) {
        return family.g_grid[best];
    }
    const double step = family.g_grid[best + 1] - family.g_grid[best];
    const double shift = 0.5 * (lm - lp) / curvature;
    return family.g_grid[best] + shift * step;
}

double fisher_between(const DetectionDensity& plus,
                      const DetectionDensity& minus, double delta_g_rel) {
    if (plus.grid.delta_z != minus.grid.delta_z ||
        plus.grid.i_min != minus.grid.i_min ||
        plus.pdf.size() != minus.pdf.size()) {
        throw ConfigError("Fisher difference requires densities on one grid");
    }
    if (!(delta_g_rel > 0.0)) {
        throw DomainError("delta_g_rel must be positive");
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < plus.pdf.size(); ++j) {
        const double diff =
            (std::sqrt(plus.pdf[j]) - std::sqrt(minus.pdf[j])) /
            (2.0 * delta_g_rel);
        acc += diff * diff;
    }
    return 4.0 * acc * plus.grid.delta_z;
}

FisherResult fisher_information(const WavePacketParams& params,
                                const PipelineOptions& opts,
                                double delta_g_rel, double sigma_det,
                                const PhysicalConstants& pc) {
    if (!std::isfinite(delta_g_rel) || delta_g_rel <= 0.0 ||
        delta_g_rel >= 0.5) {
        throw ConfigError("delta_g_rel must lie in (0, 0.5)");
    }

    const DetectorRun reference = propagate_to_detector(params, opts, pc);
    const SharedGeometry geometry = shared_geometry(reference);
    const WindowSpec window = detection_window(reference);

    auto density_at_g = [&](double rel) {
        WavePacketParams shifted = params;
        shifted.g = params.g * (1.0 + rel);
        const DetectorRun run =
            propagate_to_detector(shifted, opts, geometry, pc);
        return resolution_blur(detection_density(run, window), sigma_det);
    };

    FisherResult result;
    result.plus = density_at_g(delta_g_rel);
    result.minus = density_at_g(-delta_g_rel);
    const double coarse =
        fisher_between(result.plus, result.minus, delta_g_rel);
    const double fine = fisher_between(density_at_g(0.5 * delta_g_rel),
                                       density_at_g(-0.5 * delta_g_rel),
                                       0.5 * delta_g_rel);
    if (!(fine > 0.0)) {
        result.value = fine;
        result.richardson_rel = 0.0;
        return result;
    }
    result.richardson_rel = std::abs(coarse - fine) / fine;
    if (result.richardson_rel > 0.05) {
        throw StepSizeError(
            "Fisher information does not survive step halving; "
            "shrink delta_g_rel");
    }
    result.value = fine;
    return result;
}

double cramer_rao(std::size_t n_events, double fisher) {
    if (n_events == 0) {
        throw DomainError("Cramer-Rao bound needs at least one event");
    }
    if (!(fisher > 0.0)) {
        throw DomainError("Fisher information must be positive");
    }
    return 1.0 / std::sqrt(static_cast<double>(n_events) * fisher);
}

EstimationReport campaign_on_family(const DensityFamily& family,
                                    std::size_t n_events, std::size_t m_reps,
                                    std::uint64_t seed) {
    if (n_events == 0 || m_reps == 0) {
        throw ConfigError("campaign needs n_events >= 1 and m_reps >= 1");
    }
    const DetectionDensity& truth = family.densities[family.center()];

    EstimationReport report;
    report.g_true = family.g_grid[family.center()];
    report.n_events = n_events;
    report.m_reps = m_reps;
    report.seed = seed;
    report.estimates.assign(m_reps, 0.0);

    std::vector<std::exception_ptr> failures(m_reps);
    const auto reps = static_cast<std::int64_t>(m_reps);
#pragma omp parallel for schedule(static)
    for (std::int64_t rep = 0; rep < reps; ++rep) {
        try {
            const std::vector<double> events = sample_events(
                truth, n_events,
                substream_seed(seed, static_cast<std::uint64_t>(rep)));
            report.estimates[static_cast<std::size_t>(rep)] =
                mle_estimate(family, events);
        } catch (...) {
            failures[static_cast<std::size_t>(rep)] = std::current_exception();
        }
    }
    for (const std::exception_ptr& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    double mean = 0.0;
    for (double estimate : report.estimates) {
        mean += estimate;
    }
    mean /= static_cast<double>(m_reps);
    report.mean_g = mean;
    if (m_reps == 1) {
        report.sigma_g = std::numeric_limits<double>::quiet_NaN();
    } else {
        double ss = 0.0;
        for (double estimate : report.estimates) {
            ss += (estimate - mean) * (estimate - mean);
        }
        report.sigma_g = std::sqrt(ss / static_cast<double>(m_reps - 1));
    }
    return report;
}

EstimationReport monte_carlo_campaign(const WavePacketParams& params,
                                      const PipelineOptions& opts,
                                      std::size_t n_events,
                                      std::size_t m_reps, std::uint64_t seed,
                                      double delta_g_rel, double sigma_det,
                                      int family_count,
                                      double family_halfwidth_rel,
                                      const PhysicalConstants& pc) {
    const FisherResult fisher =
        fisher_information(params, opts, delta_g_rel, sigma_det, pc);
    const double sigma_cr = cramer_rao(n_events, fisher.value);
    const double halfwidth =
        std::max(family_halfwidth_rel, 10.0 * sigma_cr);
    const DensityFamily family = build_density_family(
        params, opts, family_count, halfwidth, sigma_det, pc);

    EstimationReport report =
        campaign_on_family(family, n_events, m_reps, seed);
    report.fisher = fisher.value;
    report.sigma_cr_rel = sigma_cr;
    return report;
}

double sample_skewness(const std::vector<double>& x) {
    const std::size_t m = x.size();
    if (m < 2) {
        throw DomainError("skewness needs at least two samples");
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(m);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(m);
    m3 /= static_cast<double>(m);
    if (!(m2 > 0.0)) {
        throw DomainError("skewness of a constant sample");
    }
    return m3 / std::pow(m2, 1.5);
}

double sample_excess_kurtosis(const std::vector<double>& x) {
    const std::size_t m = x.size();
    if (m < 2) {
        throw DomainError("kurtosis needs at least two samples");
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(m);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(m);
    m4 /= static_cast<double>(m);
    if (!(m2 > 0.0)) {
        throw DomainError("kurtosis of a constant sample");
    }
    return m4 / (m2 * m2) - 3.0;
}

double skewness_stderr(std::size_t m) {
    if (m < 4) {
        throw DomainError("skewness standard error needs m >= 4");
    }
    const double n = static_cast<double>(m);
    return std::sqrt(6.0 * n * (n - 1.0) /
                     ((n - 2.0) * (n + 1.0) * (n + 3.0)));
}

double kurtosis_stderr(std::size_t m) {
    if (m < 6) {
        throw DomainError("kurtosis standard error needs m >= 6");
    }
    const double n = static_cast<double>(m);
    return 2.0 * skewness_stderr(m) *
           std::sqrt((n * n - 1.0) / ((n - 3.0) * (n + 5.0)));
}

} // namespace qbounce
