#pragma once
#include "qbounce/estimation.hpp"

namespace qbounce {

// Extrema of an interference pattern, walked outward from the global peak.
// Positions and values are refined with a three-point parabola.
struct FringeStats {
    double peak_z = 0.0;
    double peak_pdf = 0.0;
    std::vector<double> maxima_z;   // ascending, peak included
    std::vector<double> maxima_pdf;
    std::vector<double> minima_z;
    std::vector<double> minima_pdf;
    double period = 0.0;    // median spacing of adjacent maxima
    double min_ratio = 1.0; // deepest interior minimum over the peak
};

// Collect up to per_side maxima on each side of the global peak, with the
// minima between them.  Throws DomainError when the pattern has fewer than
// two maxima.
FringeStats fringe_stats(const DetectionDensity& density, int per_side = 5);

// Displacement of `shifted` relative to `reference` by circular
// cross-correlation with parabolic subsample refinement.  Positive result
// means the pattern moved toward larger z.
double fringe_shift(const DetectionDensity& reference,
                    const DetectionDensity& shifted);

// Michelson contrast (max - min) / (max + min) of the raw pattern inside
// +/- window_sigma standard deviations of the blur-smoothed envelope.
double fringe_visibility(const DetectionDensity& density,
                         double sigma_blur = 5e-6, double window_sigma = 2.0);

} // namespace qbounce
