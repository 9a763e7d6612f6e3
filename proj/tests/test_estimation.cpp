#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "qbounce/errors.hpp"
#include "qbounce/estimation.hpp"
#include "qbounce/fringe.hpp"
#include "qbounce/pipeline.hpp"
#include "qbounce/rng.hpp"
#include "qbounce/wavepacket.hpp"

using namespace qbounce;

namespace {

// Short drop from 0.2 mm at rest: a few hundred modes and modest grids, so
// the whole statistical chain stays affordable inside one test binary.
WavePacketParams drop_params() {
    WavePacketParams p;
    p.z0 = 2e-4;
    p.v0 = 0.0;
    p.sigma_z = 2e-6;
    return p;
}

PipelineOptions drop_options() {
    PipelineOptions o;
    o.n_gqs = 200;
    o.nyquist_safety = 0.45;
    return o;
}

struct Fixture {
    WavePacketParams params = drop_params();
    PipelineOptions opts = drop_options();
    FisherResult fisher;
    DensityFamily family; // 41 nodes, +/- 1.5e-3 relative
};

const Fixture& fx() {
    static const Fixture f = [] {
        Fixture x;
        x.fisher = fisher_information(x.params, x.opts);
        x.family = build_density_family(x.params, x.opts, 41, 1.5e-3, 0.0);
        return x;
    }();
    return f;
}

double pdf_mass(const DetectionDensity& d) {
    double acc = 0.0;
    for (double p : d.pdf) acc += p;
    return acc * d.grid.delta_z;
}

double l1_distance(const DetectionDensity& a, const DetectionDensity& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.pdf.size(); ++j) {
        acc += std::abs(a.pdf[j] - b.pdf[j]);
    }
    return acc * a.grid.delta_z;
}

// Kolmogorov-Smirnov distance between draws and the sampling CDF.
double ks_distance(const DetectionDensity& d, std::vector<double> events) {
    std::sort(events.begin(), events.end());
    const double n = static_cast<double>(events.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double u = (events[i] - d.grid.z_min()) / d.grid.delta_z;
        std::size_t j = static_cast<std::size_t>(std::max(0.0, u));
        j = std::min(j, d.grid.n_z - 2);
        const double t = u - static_cast<double>(j);
        const double f = d.cdf[j] + t * (d.cdf[j + 1] - d.cdf[j]);
        worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
        worst = std::max(worst, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return worst;
}

DetectionDensity rolled(const DetectionDensity& src, std::int64_t lag) {
    DetectionDensity out = src;
    const auto n = static_cast<std::int64_t>(src.pdf.size());
    for (std::int64_t j = 0; j < n; ++j) {
        out.pdf[static_cast<std::size_t>(j)] =
            src.pdf[static_cast<std::size_t>(((j - lag) % n + n) % n)];
    }
    return out;
}

} // namespace

TEST_CASE("detection density invariants") {
    const DetectionDensity& d = fx().family.densities[fx().family.center()];

    CHECK(d.g_value == 9.81);
    CHECK(d.pdf.size() == d.grid.n_z);
    CHECK(d.cdf.size() == d.grid.n_z);
    CHECK((d.grid.n_z & (d.grid.n_z - 1)) == 0);
    CHECK(pdf_mass(d) == doctest::Approx(1.0).epsilon(1e-12).scale(0.0));
    CHECK(d.cdf.front() == 0.0);
    CHECK(d.cdf.back() == 1.0);
    for (double p : d.pdf) REQUIRE(p >= 0.0);
    for (std::size_t j = 1; j < d.cdf.size(); ++j) {
        REQUIRE(d.cdf[j] >= d.cdf[j - 1]);
    }
}

TEST_CASE("detection window decimates onto grid nodes") {
    // Synthetic detector field: Gaussian envelope on a fine grid so the
    // minimum detector spacing forces stride 2.
    Grid g;
    g.delta_z = 5e-8;
    g.n_z = std::size_t{1} << 15;
    g.i_min = -(std::int64_t{1} << 14) + 1; // odd i_min exercises alignment
    WavePacketParams p = drop_params();
    p.sigma_z = 1e-5;
    p.z0 = 3.3e-5;
    p.v0 = 0.0;

    DetectorRun run;
    run.psi_det.grid = g;
    kernels::gaussian_fill_serial(g, p, PhysicalConstants{},
                                  run.psi_det.values);
    run.dec.params = p;

    const WindowSpec w = detection_window(run);
    CHECK(w.stride == 2);
    CHECK((w.count & (w.count - 1)) == 0);
    CHECK(w.start + (w.count - 1) * w.stride < g.n_z);
    CHECK((g.i_min + static_cast<std::int64_t>(w.start)) %
              static_cast<std::int64_t>(w.stride) ==
          0);

    const DetectionDensity d = detection_density(run, w);
    CHECK(d.grid.n_z == w.count);
    CHECK(d.grid.delta_z == doctest::Approx(1e-7).epsilon(1e-12).scale(0.0));
    for (std::size_t j = 0; j < d.grid.n_z; j += 977) {
        const double direct = g.z(w.start + j * w.stride);
        REQUIRE(d.grid.z(j) == doctest::Approx(direct).epsilon(1e-13).scale(0.0));
    }
    // The window covers the packet: density mass centered near z0.
    double mean = 0.0;
    for (std::size_t j = 0; j < d.pdf.size(); ++j) {
        mean += d.pdf[j] * d.grid.z(j);
    }
    mean *= d.grid.delta_z;
    CHECK(mean == doctest::Approx(p.z0).epsilon(1e-3).scale(0.0));

    WindowSpec bad = w;
    bad.start += 1; // breaks stride alignment
    CHECK_THROWS_AS((void)detection_density(run, bad), ConfigError);
    bad = w;
    bad.count = 0;
    CHECK_THROWS_AS((void)detection_density(run, bad), ConfigError);
    bad = w;
    bad.count = g.n_z * 2;
    CHECK_THROWS_AS((void)detection_density(run, bad), ConfigError);
}

TEST_CASE("inverse-CDF sampling follows the density") {
    const DetectionDensity& d = fx().family.densities[fx().family.center()];

    const std::vector<double> events = sample_events(d, 20000, 77);
    REQUIRE(events.size() == 20000);
    for (double z : events) {
        REQUIRE(z >= d.grid.z_min());
        REQUIRE(z <= d.grid.z_min() +
                         d.grid.delta_z * static_cast<double>(d.grid.n_z - 1));
    }
    CHECK(ks_distance(d, events) < 1.5 * 1.36 / std::sqrt(20000.0));

    CHECK(sample_events(d, 64, 77) ==
          std::vector<double>(events.begin(), events.begin() + 64));
    const std::vector<double> other =
        sample_events(d, 64, substream_seed(77, 1));
    CHECK(other != std::vector<double>(events.begin(), events.begin() + 64));

    CHECK(sample_events(d, 0, 1).empty());
}

TEST_CASE("log-likelihood is additive and windowed") {
    const DensityFamily& fam = fx().family;
    const double g0 = fx().params.g;
    const DetectionDensity& truth = fam.densities[fam.center()];

    const std::vector<double> events = sample_events(truth, 400, 11);
    const std::vector<double> head(events.begin(), events.begin() + 150);
    const std::vector<double> tail(events.begin() + 150, events.end());

    const double whole = log_likelihood(fam, events, g0);
    const double parts =
        log_likelihood(fam, head, g0) + log_likelihood(fam, tail, g0);
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12).scale(0.0));

    // With this many draws the center beats both family edges.
    CHECK(whole > log_likelihood(fam, events, fam.g_grid.front()));
    CHECK(whole > log_likelihood(fam, events, fam.g_grid.back()));

    std::vector<double> poisoned = head;
    poisoned.push_back(10.0); // far outside the detection window
    CHECK(log_likelihood(fam, poisoned, g0) ==
          -std::numeric_limits<double>::infinity());

    CHECK_THROWS_AS((void)log_likelihood(fam, events, g0 * (1.0 + 2e-3)),
                    DomainError);
    CHECK_THROWS_AS((void)log_likelihood(fam, events, g0 * (1.0 - 2e-3)),
                    DomainError);
}

TEST_CASE("maximum-likelihood estimate recovers g") {
    const DensityFamily& fam = fx().family;
    const double g0 = fx().params.g;
    const DetectionDensity& truth = fam.densities[fam.center()];
    const double sigma_cr = cramer_rao(5000, fx().fisher.value);

    const std::vector<double> events = sample_events(truth, 5000, 5);
    const double ghat = mle_estimate(fam, events);
    CHECK(std::abs(ghat / g0 - 1.0) < 5.0 * sigma_cr);

    // A family that sits entirely below the truth peaks at its upper edge.
    DensityFamily low;
    low.params = fam.params;
    low.g_grid.assign(fam.g_grid.begin(), fam.g_grid.begin() + 5);
    low.densities.assign(fam.densities.begin(), fam.densities.begin() + 5);
    CHECK_THROWS_AS((void)mle_estimate(low, events), WindowError);

    const std::vector<double> lost(3, 10.0);
    CHECK_THROWS_AS((void)mle_estimate(fam, lost), DomainError);
    CHECK_THROWS_AS((void)mle_estimate(fam, {}), DomainError);
}

TEST_CASE("campaign statistics and determinism") {
    const DensityFamily& fam = fx().family;
    const double g0 = fx().params.g;

    const EstimationReport rep = campaign_on_family(fam, 200, 100, 20250818);
    CHECK(rep.estimates.size() == 100);
    CHECK(rep.n_events == 200);
    CHECK(rep.m_reps == 100);
    CHECK(rep.seed == 20250818);
    CHECK(rep.g_true == g0);

    const EstimationReport again = campaign_on_family(fam, 200, 100, 20250818);
    CHECK(rep.estimates == again.estimates);

    // Estimator dispersion tracks the Cramer-Rao bound.
    const double sigma_cr = cramer_rao(200, fx().fisher.value);
    const double ratio = rep.sigma_g / g0 / sigma_cr;
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.4);
    CHECK(std::abs(rep.mean_g / g0 - 1.0) <
          5.0 * rep.sigma_g / g0 / std::sqrt(100.0));

    const EstimationReport single = campaign_on_family(fam, 50, 1, 3);
    CHECK(std::isnan(single.sigma_g));
    CHECK(single.mean_g == single.estimates[0]);

    // Every repetition hits the boundary of this misplaced family.
    DensityFamily low;
    low.params = fam.params;
    low.g_grid.assign(fam.g_grid.begin(), fam.g_grid.begin() + 5);
    low.densities.assign(fam.densities.begin(), fam.densities.begin() + 5);
    CHECK_THROWS_AS((void)campaign_on_family(low, 50, 3, 1), WindowError);

    CHECK_THROWS_AS((void)campaign_on_family(fam, 0, 3, 1), ConfigError);
    CHECK_THROWS_AS((void)campaign_on_family(fam, 50, 0, 1), ConfigError);
}

TEST_CASE("Fisher information with step-halving control") {
    const FisherResult& fr = fx().fisher;

    CHECK(fr.value == doctest::Approx(2.4962565e5).epsilon(1e-3).scale(0.0));
    CHECK(fr.richardson_rel >= 0.0);
    CHECK(fr.richardson_rel < 5e-3);
    CHECK(fr.plus.g_value ==
          doctest::Approx(9.81 * (1.0 + 1e-7)).epsilon(1e-15).scale(0.0));
    CHECK(fr.minus.g_value ==
          doctest::Approx(9.81 * (1.0 - 1e-7)).epsilon(1e-15).scale(0.0));

    CHECK(cramer_rao(1000, fr.value) ==
          doctest::Approx(6.329296e-5).epsilon(1e-3).scale(0.0));
    CHECK(fisher_between(fr.plus, fr.plus, 1e-7) == 0.0);

    CHECK_THROWS_AS(
        (void)fisher_information(fx().params, fx().opts, 1e-2), StepSizeError);
    CHECK_THROWS_AS((void)fisher_information(fx().params, fx().opts, 0.0),
                    ConfigError);
    CHECK_THROWS_AS((void)cramer_rao(0, fr.value), DomainError);
    CHECK_THROWS_AS((void)cramer_rao(100, 0.0), DomainError);

    DetectionDensity offgrid = fr.minus;
    offgrid.grid.delta_z *= 2.0;
    CHECK_THROWS_AS((void)fisher_between(fr.plus, offgrid, 1e-7), ConfigError);
}

TEST_CASE("resolution blur widens the density and costs information") {
    const DetectionDensity& d = fx().family.densities[fx().family.center()];

    const DetectionDensity same = resolution_blur(d, 0.0);
    CHECK(same.pdf == d.pdf);

    // A detector width of a fifth of the fringe period.
    const DetectionDensity wide = resolution_blur(d, 2e-4);
    CHECK(pdf_mass(wide) == doctest::Approx(1.0).epsilon(1e-9).scale(0.0));
    CHECK(*std::max_element(wide.pdf.begin(), wide.pdf.end()) <
          *std::max_element(d.pdf.begin(), d.pdf.end()));

    const double raw =
        fisher_between(fx().fisher.plus, fx().fisher.minus, 1e-7);
    const double blurred =
        fisher_between(resolution_blur(fx().fisher.plus, 2e-4),
                       resolution_blur(fx().fisher.minus, 2e-4), 1e-7);
    CHECK(blurred / raw == doctest::Approx(0.6037).epsilon(2e-2).scale(0.0));

    CHECK_THROWS_AS((void)resolution_blur(d, -1e-6), DomainError);
}

TEST_CASE("density family brackets g symmetrically") {
    const DensityFamily& fam = fx().family;
    const double g0 = fx().params.g;

    REQUIRE(fam.g_grid.size() == 41);
    REQUIRE(fam.densities.size() == 41);
    CHECK(fam.g_grid[fam.center()] == g0);
    CHECK(fam.g_grid.front() ==
          doctest::Approx(g0 * (1.0 - 1.5e-3)).epsilon(1e-15).scale(0.0));
    CHECK(fam.g_grid.back() ==
          doctest::Approx(g0 * (1.0 + 1.5e-3)).epsilon(1e-15).scale(0.0));
    for (std::size_t i = 1; i < fam.g_grid.size(); ++i) {
        REQUIRE(fam.g_grid[i] > fam.g_grid[i - 1]);
    }
    for (std::size_t k = 1; k <= fam.center(); ++k) {
        const double above = fam.g_grid[fam.center() + k] - g0;
        const double below = g0 - fam.g_grid[fam.center() - k];
        REQUIRE(above == doctest::Approx(below).epsilon(1e-9).scale(0.0));
    }

    // All members share the center grid, and the pattern really moves.
    for (const DetectionDensity& d : fam.densities) {
        REQUIRE(d.grid.delta_z == fam.densities[0].grid.delta_z);
        REQUIRE(d.grid.i_min == fam.densities[0].grid.i_min);
    }
    const double gap =
        l1_distance(fam.densities.back(), fam.densities[fam.center()]);
    CHECK(gap == doctest::Approx(0.477858).epsilon(5e-3).scale(0.0));
    CHECK(l1_distance(fam.densities.front(), fam.densities[fam.center()]) >
          0.4);

    CHECK_THROWS_AS((void)build_density_family(fx().params, fx().opts, 10,
                                               1.5e-3, 0.0),
                    ConfigError);
    CHECK_THROWS_AS((void)build_density_family(fx().params, fx().opts, 1,
                                               1.5e-3, 0.0),
                    ConfigError);
    CHECK_THROWS_AS((void)build_density_family(fx().params, fx().opts, 5, 0.0,
                                               0.0),
                    ConfigError);
}

TEST_CASE("fringe statistics on the drop pattern") {
    const DetectionDensity& d = fx().family.densities[fx().family.center()];
    const FringeStats stats = fringe_stats(d);

    CHECK(stats.maxima_z.size() == 11);
    CHECK(stats.period == doctest::Approx(1.015159e-3).epsilon(2e-3).scale(0.0));
    CHECK(stats.min_ratio ==
          doctest::Approx(1.8081e-5).epsilon(1e-2).scale(0.0));
    CHECK(stats.minima_z.size() >= stats.maxima_z.size() - 1);
    for (std::size_t i = 1; i < stats.maxima_z.size(); ++i) {
        REQUIRE(stats.maxima_z[i] > stats.maxima_z[i - 1]);
    }
    for (double v : stats.maxima_pdf) REQUIRE(v <= stats.peak_pdf);

    DetectionDensity flat = d;
    std::fill(flat.pdf.begin(), flat.pdf.end(), 1.0);
    CHECK_THROWS_AS((void)fringe_stats(flat), DomainError);
}

TEST_CASE("fringe shift sign and magnitude") {
    const DensityFamily& fam = fx().family;
    const DetectionDensity& center = fam.densities[fam.center()];

    // Pattern displaced toward +z by construction.
    const DetectionDensity moved = rolled(center, 37);
    const double lag = fringe_shift(center, moved);
    CHECK(lag ==
          doctest::Approx(37.0 * center.grid.delta_z).epsilon(1e-6).scale(0.0));
    CHECK(fringe_shift(center, rolled(center, -21)) ==
          doctest::Approx(-21.0 * center.grid.delta_z).epsilon(1e-6).scale(0.0));

    // Larger g pulls the fringes down, smaller g pushes them up.
    const double up = fringe_shift(center, fam.densities.front());
    const double down = fringe_shift(center, fam.densities.back());
    CHECK(up == doctest::Approx(6.070515e-4).epsilon(5e-3).scale(0.0));
    CHECK(down == doctest::Approx(-up).epsilon(5e-3).scale(0.0));

    DetectionDensity offgrid = center;
    offgrid.grid.delta_z *= 2.0;
    CHECK_THROWS_AS((void)fringe_shift(center, offgrid), ConfigError);
}

TEST_CASE("fringe visibility responds to blur") {
    const DetectionDensity& d = fx().family.densities[fx().family.center()];

    const double sharp = fringe_visibility(d);
    CHECK(sharp == doctest::Approx(0.999964).epsilon(1e-4).scale(0.0));
    CHECK(sharp <= 1.0);

    // Synthetic modulated Gaussian: blur at the fringe scale must lower the
    // contrast, while a much finer blur must not.
    DetectionDensity synth;
    synth.grid.delta_z = 1e-6;
    synth.grid.i_min = -512;
    synth.grid.n_z = 1024;
    synth.pdf.resize(1024);
    for (std::size_t j = 0; j < synth.pdf.size(); ++j) {
        const double z = synth.grid.z(j);
        const double env = std::exp(-z * z / (2.0 * 9e-9));
        synth.pdf[j] =
            env * (1.0 + 0.8 * std::cos(2.0 * kPi * z / 4e-5)) + 1e-12;
    }
    const double v_sharp = fringe_visibility(synth, 1e-6);
    const double v_soft = fringe_visibility(resolution_blur(synth, 4e-5), 1e-6);
    CHECK(v_soft < v_sharp - 0.05);

    CHECK_THROWS_AS((void)fringe_visibility(d, 0.0), DomainError);
    CHECK_THROWS_AS((void)fringe_visibility(d, 5e-6, 0.0), DomainError);
}

TEST_CASE("shape statistics") {
    const std::vector<double> tent{1.0, 2.0, 3.0, 4.0};
    CHECK(std::abs(sample_skewness(tent)) < 1e-14);
    CHECK(sample_excess_kurtosis(tent) == doctest::Approx(-1.36).epsilon(1e-12).scale(0.0));

    // Box-Muller normals from the campaign generator.
    SplitMix64 rng(123);
    std::vector<double> normal(20000);
    for (std::size_t i = 0; i < normal.size(); i += 2) {
        const double u1 = 1.0 - rng.uniform();
        const double u2 = rng.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        normal[i] = r * std::cos(2.0 * kPi * u2);
        normal[i + 1] = r * std::sin(2.0 * kPi * u2);
    }
    CHECK(std::abs(sample_skewness(normal)) < 5.0 * skewness_stderr(20000));
    CHECK(std::abs(sample_excess_kurtosis(normal)) <
          5.0 * kurtosis_stderr(20000));

    CHECK(skewness_stderr(10) == doctest::Approx(0.6870429186215167).scale(0.0));
    CHECK(kurtosis_stderr(10) == doctest::Approx(1.334248769989982).scale(0.0));
    CHECK(skewness_stderr(100) < skewness_stderr(10));

    CHECK_THROWS_AS((void)sample_skewness({1.0}), DomainError);
    CHECK_THROWS_AS((void)sample_skewness({2.0, 2.0, 2.0}), DomainError);
    CHECK_THROWS_AS((void)skewness_stderr(3), DomainError);
    CHECK_THROWS_AS((void)kurtosis_stderr(5), DomainError);
}

TEST_CASE("self-contained campaign widens the family as needed") {
    const EstimationReport rep = monte_carlo_campaign(
        fx().params, fx().opts, 50, 20, 42, 1e-7, 0.0, 11, 1e-5);

    CHECK(rep.n_events == 50);
    CHECK(rep.m_reps == 20);
    CHECK(rep.fisher == doctest::Approx(fx().fisher.value).epsilon(1e-9).scale(0.0));
    CHECK(rep.sigma_cr_rel ==
          doctest::Approx(cramer_rao(50, fx().fisher.value)).epsilon(1e-9).scale(0.0));
    // 10 sigma of Cramer-Rao at N = 50 exceeds the 1e-5 floor, so every
    // estimate has room inside the widened family.
    CHECK(10.0 * rep.sigma_cr_rel > 1e-5);
    CHECK(rep.sigma_g / rep.g_true < 3.0 * rep.sigma_cr_rel);
}
