#include "qbounce/fringe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "qbounce/errors.hpp"
#include "qbounce/fft.hpp"

namespace qbounce {
namespace {

struct Extremum {
    double z = 0.0;
    double value = 0.0;
};

// Three-point parabola through (j-1, j, j+1).
Extremum refine(const DetectionDensity& density, std::size_t j) {
    const std::vector<double>& p = density.pdf;
    const double lm = p[j - 1];
    const double l0 = p[j];
    const double lp = p[j + 1];
    const double curvature = lm - 2.0 * l0 + lp;
    Extremum e;
    if (curvature == 0.0) {
        e.z = density.grid.z(j);
        e.value = l0;
        return e;
    }
    const double shift = 0.5 * (lm - lp) / curvature;
    e.z = density.grid.z(j) + shift * density.grid.delta_z;
    e.value = std::max(0.0, l0 - 0.25 * (lm - lp) * shift);
    return e;
}

bool is_max(const std::vector<double>& p, std::size_t j) {
    return p[j] >= p[j - 1] && p[j] > p[j + 1];
}

bool is_min(const std::vector<double>& p, std::size_t j) {
    return p[j] <= p[j - 1] && p[j] < p[j + 1];
}

} // namespace

FringeStats fringe_stats(const DetectionDensity& density, int per_side) {
    const std::vector<double>& p = density.pdf;
    if (p.size() < 5 || per_side < 1) {
        throw DomainError("pattern is too short for fringe analysis");
    }

    std::size_t peak = 0;
    for (std::size_t j = 1; j < p.size(); ++j) {
        if (p[j] > p[peak]) {
            peak = j;
        }
    }
    if (peak == 0 || peak == p.size() - 1) {
        throw DomainError("pattern peaks at the window edge");
    }

    std::vector<Extremum> maxima;
    std::vector<Extremum> minima;
    maxima.push_back(refine(density, peak));

    int found = 0;
    for (std::size_t j = peak + 1; j + 1 < p.size() && found < per_side; ++j) {
        if (is_max(p, j)) {
            maxima.push_back(refine(density, j));
            ++found;
        } else if (is_min(p, j)) {
            minima.push_back(refine(density, j));
        }
    }
    found = 0;
    for (std::size_t j = peak - 1; j >= 1 && found < per_side; --j) {
        if (is_max(p, j)) {
            maxima.push_back(refine(density, j));
            ++found;
        } else if (is_min(p, j)) {
            minima.push_back(refine(density, j));
        }
    }
    if (maxima.size() < 2) {
        throw DomainError("fewer than two fringe maxima found");
    }

    auto by_z = [](const Extremum& a, const Extremum& b) { return a.z < b.z; };
    std::sort(maxima.begin(), maxima.end(), by_z);
    std::sort(minima.begin(), minima.end(), by_z);

    FringeStats stats;
    stats.peak_z = maxima[0].z;
    stats.peak_pdf = maxima[0].value;
    for (const Extremum& e : maxima) {
        if (e.value > stats.peak_pdf) {
            stats.peak_z = e.z;
            stats.peak_pdf = e.value;
        }
        stats.maxima_z.push_back(e.z);
        stats.maxima_pdf.push_back(e.value);
    }

    const double lo = stats.maxima_z.front();
    const double hi = stats.maxima_z.back();
    double deepest = stats.peak_pdf;
    for (const Extremum& e : minima) {
        if (e.z < lo || e.z > hi) {
            continue;
        }
        deepest = std::min(deepest, e.value);
        stats.minima_z.push_back(e.z);
        stats.minima_pdf.push_back(e.value);
    }
    stats.min_ratio =
        stats.peak_pdf > 0.0 ? deepest / stats.peak_pdf : 1.0;

    std::vector<double> gaps;
    for (std::size_t i = 1; i < stats.maxima_z.size(); ++i) {
        gaps.push_back(stats.maxima_z[i] - stats.maxima_z[i - 1]);
    }
    std::sort(gaps.begin(), gaps.end());
    const std::size_t mid = gaps.size() / 2;
    stats.period = gaps.size() % 2 == 1
                       ? gaps[mid]
                       : 0.5 * (gaps[mid - 1] + gaps[mid]);
    return stats;
}

double fringe_shift(const DetectionDensity& reference,
                    const DetectionDensity& shifted) {
    const std::size_t n = reference.pdf.size();
    if (shifted.pdf.size() != n ||
        shifted.grid.delta_z != reference.grid.delta_z) {
        throw ConfigError("fringe shift requires densities on one grid");
    }
    if (n < 4) {
        throw DomainError("pattern is too short for cross-correlation");
    }

    std::vector<std::complex<double>> a(n);
    std::vector<std::complex<double>> b(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = reference.pdf[j];
        b[j] = shifted.pdf[j];
    }
    fft_forward(a);
    fft_forward(b);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = std::conj(a[j]) * b[j];
    }
    fft_inverse(a);

    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (a[j].real() > a[best].real()) {
            best = j;
        }
    }
    const double lm = a[(best + n - 1) % n].real();
    const double l0 = a[best].real();
    const double lp = a[(best + 1) % n].real();
    const double curvature = lm - 2.0 * l0 + lp;
    const double frac = curvature < 0.0 ? 0.5 * (lm - lp) / curvature : 0.0;

    double lag = static_cast<double>(best) + frac;
    if (lag > 0.5 * static_cast<double>(n)) {
        lag -= static_cast<double>(n);
    }
    return lag * reference.grid.delta_z;
}

double fringe_visibility(const DetectionDensity& density, double sigma_blur,
                         double window_sigma) {
    if (!(sigma_blur > 0.0) || !(window_sigma > 0.0)) {
        throw DomainError("visibility needs positive blur and window widths");
    }
    const DetectionDensity envelope = resolution_blur(density, sigma_blur);

    double norm = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (std::size_t j = 0; j < envelope.pdf.size(); ++j) {
        const double z = envelope.grid.z(j);
        norm += envelope.pdf[j];
        s1 += envelope.pdf[j] * z;
        s2 += envelope.pdf[j] * z * z;
    }
    const double mean = s1 / norm;
    const double var = s2 / norm - mean * mean;
    const double sigma = std::sqrt(std::max(0.0, var));
    const double lo = mean - window_sigma * sigma;
    const double hi = mean + window_sigma * sigma;

    double pmax = 0.0;
    double pmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < density.pdf.size(); ++j) {
        const double z = density.grid.z(j);
        if (z < lo || z > hi) {
            continue;
        }
        pmax = std::max(pmax, density.pdf[j]);
        pmin = std::min(pmin, density.pdf[j]);
    }
    if (!(pmax > 0.0) || !std::isfinite(pmin)) {
        throw DomainError("visibility window contains no samples");
    }
    return (pmax - pmin) / (pmax + pmin);
}

} // namespace qbounce
