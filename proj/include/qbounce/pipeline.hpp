#pragma once
#include "qbounce/bounce.hpp"
#include "qbounce/freefall.hpp"
#include "qbounce/spectral.hpp"

namespace qbounce {

// Knobs for one end-to-end propagation.  Zeros mean "derive": the mode count
// from the captured-weight tolerance, the spacing from the Nyquist rule.
struct PipelineOptions {
    int n_gqs = 12000;
    double truncation_tol = 1e-4;
    int granularity = 500;
    int truncation_cap = 1000000;
    double delta_z = 0.0;
    double nyquist_safety = 0.05;
    double x_max = 10.0;
    std::size_t memory_cap = kDefaultMemoryCap;
};

// Everything produced by one propagation from release to detector station.
struct DetectorRun {
    SpectralDecomposition dec;
    Grid first_grid;
    Grid ext_grid;
    WaveField psi_d;      // end of the mirror, on first_grid
    FieldMoments mom_d;   // moments of psi_d
    WaveField psi_det;    // at the detector, on ext_grid
    double T = 0.0;       // fall duration
};

// Grids and mode tables pinned by a reference run, so that a family of runs
// at perturbed g shares one spatial sampling and one detection window.
struct SharedGeometry {
    Grid first_grid;
    Grid ext_grid;
    std::vector<double> lambda;
    std::vector<double> aip;
};

DetectorRun propagate_to_detector(const WavePacketParams& params,
                                  const PipelineOptions& opts = {},
                                  const PhysicalConstants& pc = {});

DetectorRun propagate_to_detector(const WavePacketParams& params,
                                  const PipelineOptions& opts,
                                  const SharedGeometry& geometry,
                                  const PhysicalConstants& pc = {});

SharedGeometry shared_geometry(const DetectorRun& run);

// Stride-decimated index window on the detector grid, centered on the
// arrived packet: +/- sigma_mult standard deviations, sampled no finer than
// min_spacing, with a power-of-two count and stride-aligned start.
struct WindowSpec {
    std::size_t start = 0;
    std::size_t stride = 1;
    std::size_t count = 0;
};

WindowSpec detection_window(const DetectorRun& run, double sigma_mult = 14.0,
                            double min_spacing = 1.45e-7);

} // namespace qbounce
