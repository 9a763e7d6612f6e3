#include "qbounce/fft.hpp"

#include <fftw3.h>

#include "qbounce/errors.hpp"

namespace qbounce {

namespace {

void run_plan(std::vector<std::complex<double>>& a, int sign) {
    if (a.empty())
        throw DomainError("fft: empty input");
    auto* ptr = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(a.size()), ptr, ptr,
                                      sign, FFTW_ESTIMATE);
    if (plan == nullptr)
        throw NumericalError("fft: planner failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

} // namespace

void fft_forward(std::vector<std::complex<double>>& a) {
    run_plan(a, FFTW_FORWARD);
}

void fft_inverse(std::vector<std::complex<double>>& a) {
    run_plan(a, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= scale;
}

} // namespace qbounce
