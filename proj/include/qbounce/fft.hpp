#pragma once
#include <complex>
#include <vector>

namespace qbounce {

// In-place complex-to-complex FFTs.  Plans are created per call with the
// deterministic (estimate-only) planner and destroyed immediately, so
// results are reproducible across runs and thread counts.  Not thread-safe;
// call only from a single thread.
void fft_forward(std::vector<std::complex<double>>& a);

// Inverse transform, scaled by 1/n.
void fft_inverse(std::vector<std::complex<double>>& a);

} // namespace qbounce
