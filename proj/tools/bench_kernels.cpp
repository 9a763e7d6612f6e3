#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <vector>

#include <omp.h>

#include "qbounce/bounce.hpp"
#include "qbounce/fft.hpp"
#include "qbounce/freefall.hpp"
#include "qbounce/spectral.hpp"
#include "qbounce/wavepacket.hpp"

namespace {

using qbounce::Grid;

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

double max_abs_diff(const std::vector<std::complex<double>>& a,
                    const std::vector<std::complex<double>>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void report(const char* name, double serial_ms, double parallel_ms,
            double diff) {
    std::printf("%-22s %10.2f %12.2f %9.2fx %13.3e\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, diff);
}

} // namespace

int main() {
    using namespace qbounce;

    const WavePacketParams params;
    const PhysicalConstants pc;
    const UnitSet units = gqs_units(params.m, params.g, pc);

    std::printf("kernel benchmark, omp_max_threads = %d\n",
                omp_get_max_threads());
    std::printf("%-22s %10s %12s %10s %13s\n", "kernel", "serial_ms",
                "parallel_ms", "speedup", "max_abs_diff");

    // Map kernels on a 2^20 grid centered on the release point.
    Grid grid;
    grid.delta_z = 4.0 * params.sigma_z / 1024.0;
    grid.n_z = std::size_t{1} << 20;
    grid.i_min = -static_cast<std::int64_t>(grid.n_z / 2);

    {
        std::vector<double> a_s, ap_s, a_p, ap_p;
        const double serial =
            time_ms([&] { kernels::airy_row_serial(grid, units.l_g, a_s, ap_s); });
        const double parallel =
            time_ms([&] { kernels::airy_row(grid, units.l_g, a_p, ap_p); });
        report("airy_row", serial, parallel,
               std::max(max_abs_diff(a_s, a_p), max_abs_diff(ap_s, ap_p)));
    }
    {
        std::vector<std::complex<double>> out_s, out_p;
        const double serial = time_ms(
            [&] { kernels::gaussian_fill_serial(grid, params, pc, out_s); });
        const double parallel =
            time_ms([&] { kernels::gaussian_fill(grid, params, pc, out_p); });
        report("gaussian_fill", serial, parallel, max_abs_diff(out_s, out_p));
    }
    {
        const MomentumGrid mg = momentum_grid(grid, pc);
        std::vector<std::complex<double>> spec(grid.n_z, {1.0, 0.5});
        std::vector<std::complex<double>> spec_s = spec, spec_p = spec;
        const double serial = time_ms([&] {
            spec_s = spec;
            kernels::freefall_phase_serial(mg, params.m, params.g, 0.27,
                                           pc.hbar, spec_s);
        });
        const double parallel = time_ms([&] {
            spec_p = spec;
            kernels::freefall_phase(mg, params.m, params.g, 0.27, pc.hbar,
                                    spec_p);
        });
        report("freefall_phase", serial, parallel, max_abs_diff(spec_s, spec_p));
    }
    {
        std::vector<std::complex<double>> v(grid.n_z, {0.3, -0.7});
        std::vector<std::complex<double>> v_s = v, v_p = v;
        const double k = params.m * params.g * 0.27 / pc.hbar;
        const double serial = time_ms([&] {
            v_s = v;
            kernels::linear_z_phase_serial(grid, k, v_s);
        });
        const double parallel = time_ms([&] {
            v_p = v;
            kernels::linear_z_phase(grid, k, v_p);
        });
        report("linear_z_phase", serial, parallel, max_abs_diff(v_s, v_p));
    }

    // Mode-table kernels at the reference mode count.
    const int n_modes = 12000;
    const ZeroTable table = airy_zeros(n_modes);
    {
        std::vector<std::complex<double>> c_s, c_p;
        const double serial = time_ms([&] {
            kernels::coefficients_serial(params, units, table.lambda, table.aip,
                                         pc, c_s);
        });
        const double parallel = time_ms([&] {
            kernels::coefficients(params, units, table.lambda, table.aip, pc,
                                  c_p);
        });
        report("coefficients", serial, parallel, max_abs_diff(c_s, c_p));
    }
    {
        SpectralDecomposition dec;
        dec.params = params;
        dec.units = units;
        dec.n_gqs = n_modes;
        dec.lambda = table.lambda;
        dec.aip = table.aip;
        kernels::coefficients(params, units, table.lambda, table.aip, pc,
                              dec.coeff);
        const std::vector<std::complex<double>> b =
            bn_coefficients(dec, params.mirror_time());

        const double dz = nyquist_spacing(units, n_modes, 0.25);
        const Grid comb_grid = first_phase_grid(units, n_modes, dz);
        kernels::SplineCombs combs_s, combs_p;
        const double serial = time_ms([&] {
            kernels::build_combs_serial(table.lambda, b, units.l_g, comb_grid,
                                        combs_s);
        });
        const double parallel = time_ms([&] {
            kernels::build_combs(table.lambda, b, units.l_g, comb_grid,
                                 combs_p);
        });
        report("build_combs", serial, parallel,
               std::max(max_abs_diff(combs_s.comb_a, combs_p.comb_a),
                        max_abs_diff(combs_s.comb_ap, combs_p.comb_ap)));
    }
    {
        const int n_small = 200;
        ZeroTable small = airy_zeros(n_small);
        std::vector<std::complex<double>> b(n_small);
        for (int n = 0; n < n_small; ++n)
            b[n] = std::complex<double>(1.0 / (1.0 + n), 0.5 / (1.0 + n));
        Grid sum_grid;
        sum_grid.delta_z = small.lambda.back() * units.l_g / 2048.0;
        sum_grid.n_z = 4096;
        sum_grid.i_min = -1024;
        std::vector<std::complex<double>> out_s, out_p;
        const double serial = time_ms([&] {
            kernels::direct_sum_serial(small.lambda, b, units.l_g, sum_grid,
                                       out_s);
        });
        const double parallel = time_ms([&] {
            kernels::direct_sum(small.lambda, b, units.l_g, sum_grid, out_p);
        });
        report("direct_sum", serial, parallel, max_abs_diff(out_s, out_p));
    }

    // FFT reference point: the transform cost the spline route amortizes.
    {
        std::vector<std::complex<double>> v(grid.n_z, {1.0, -1.0});
        const double forward = time_ms([&] { fft_forward(v); });
        const double inverse = time_ms([&] { fft_inverse(v); });
        std::printf("%-22s %10.2f %12.2f %9s %13s\n", "fft_2^20", forward,
                    inverse, "-", "-");
    }
    return 0;
}
