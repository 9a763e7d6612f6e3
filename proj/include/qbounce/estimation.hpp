#pragma once
#include <cstdint>

#include "qbounce/pipeline.hpp"

namespace qbounce {

// Arrival-position density on a stride-decimated window of the detector
// grid, normalized over the window.
struct DetectionDensity {
    Grid grid;
    std::vector<double> pdf;   // sum pdf * delta_z == 1
    std::vector<double> cdf;   // trapezoid accumulation, 0 at front, 1 at back
    double g_value = 0.0;
};

DetectionDensity detection_density(const DetectorRun& run,
                                   const WindowSpec& window);

// Gaussian detector response of width sigma_det, applied in the spectral
// domain.  sigma_det = 0 returns the input unchanged.
DetectionDensity resolution_blur(const DetectionDensity& density,
                                 double sigma_det);

// Inverse-CDF draws of arrival positions.
std::vector<double> sample_events(const DetectionDensity& density,
                                  std::size_t n, std::uint64_t seed);

// Densities on one shared window for a symmetric grid of g values; odd
// count, exact g0 at the center.
struct DensityFamily {
    WavePacketParams params;
    std::vector<double> g_grid;
    std::vector<DetectionDensity> densities;
    std::size_t center() const { return g_grid.size() / 2; }
};

DensityFamily build_density_family(const WavePacketParams& params,
                                   const PipelineOptions& opts, int count,
                                   double halfwidth_rel, double sigma_det,
                                   const PhysicalConstants& pc = {});

// Log-likelihood of the events at g, bilinear in position and g.  Events
// outside the window give -inf; g outside the family span throws.
double log_likelihood(const DensityFamily& family,
                      const std::vector<double>& events, double g);

// Maximum-likelihood g: argmax over the family nodes refined by a parabola
// through the top three.  A boundary argmax throws WindowError; events that
// no family member supports throw DomainError.
double mle_estimate(const DensityFamily& family,
                    const std::vector<double>& events);

struct FisherResult {
    double value = 0.0;          // per-event information w.r.t. relative g
    double richardson_rel = 0.0; // step-halving agreement
    DetectionDensity plus;       // at g0 (1 + delta_g_rel)
    DetectionDensity minus;      // at g0 (1 - delta_g_rel)
};

// Central-difference Fisher information with a step-halving check: the
// half-step value must agree within 5% or StepSizeError is thrown.
FisherResult fisher_information(const WavePacketParams& params,
                                const PipelineOptions& opts,
                                double delta_g_rel = 1e-7,
                                double sigma_det = 0.0,
                                const PhysicalConstants& pc = {});

double fisher_between(const DetectionDensity& plus,
                      const DetectionDensity& minus, double delta_g_rel);

// Relative one-sigma Cramer-Rao bound for n events.
double cramer_rao(std::size_t n_events, double fisher);

struct EstimationReport {
    std::vector<double> estimates;
    double g_true = 0.0;
    double mean_g = 0.0;
    double sigma_g = 0.0;   // sample standard deviation; NaN when m_reps == 1
    std::size_t n_events = 0;
    std::size_t m_reps = 0;
    double fisher = 0.0;
    double sigma_cr_rel = 0.0;
    std::uint64_t seed = 0;
};

// Repeat: draw n events from the central density, estimate g, collect.
// Repetition r uses the substream seed mixed from (seed, r).
EstimationReport campaign_on_family(const DensityFamily& family,
                                    std::size_t n_events, std::size_t m_reps,
                                    std::uint64_t seed);

// Self-contained campaign: Fisher information first, then a family wide
// enough for the expected estimator scatter, then the campaign itself.
EstimationReport monte_carlo_campaign(const WavePacketParams& params,
                                      const PipelineOptions& opts,
                                      std::size_t n_events,
                                      std::size_t m_reps, std::uint64_t seed,
                                      double delta_g_rel = 1e-7,
                                      double sigma_det = 0.0,
                                      int family_count = 41,
                                      double family_halfwidth_rel = 1e-5,
                                      const PhysicalConstants& pc = {});

// Population-moment shape statistics and their large-sample standard errors.
double sample_skewness(const std::vector<double>& x);
double sample_excess_kurtosis(const std::vector<double>& x);
double skewness_stderr(std::size_t m);
double kurtosis_stderr(std::size_t m);

} // namespace qbounce
