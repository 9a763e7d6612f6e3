#include "qbounce/bounce.hpp"

#include <algorithm>
#include <cmath>

#include "qbounce/airy.hpp"
#include "qbounce/errors.hpp"
#include "qbounce/fft.hpp"

namespace qbounce {

namespace {

// Cubic Hermite basis on [0, 1].
double h00(double t) { return (2.0 * t - 3.0) * t * t + 1.0; }
double h10(double t) { return ((t - 2.0) * t + 1.0) * t; }
double h01(double t) { return (3.0 - 2.0 * t) * t * t; }
double h11(double t) { return (t - 1.0) * t * t; }

void check_mode_coverage(const std::vector<double>& lambda, double l_g,
                         const Grid& grid) {
    if (lambda.empty())
        throw DomainError("bounce: empty decomposition");
    const double top = lambda.back() * l_g;
    if (top > -grid.z_min())
        throw ConfigError(
            "bounce: grid does not reach down to the highest mode's kernel");
    const auto k_top = static_cast<std::int64_t>(std::floor(
        top / grid.delta_z));
    if (k_top + 1 >= static_cast<std::int64_t>(grid.n_z))
        throw ConfigError("bounce: comb index exceeds the grid");
}

} // namespace

namespace kernels {

void airy_row(const Grid& grid, double l_g, std::vector<double>& a,
              std::vector<double>& ap) {
    a.resize(grid.n_z);
    ap.resize(grid.n_z);
    const auto n = static_cast<std::int64_t>(grid.n_z);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        const auto u = static_cast<std::size_t>(j);
        const AiryPair p = airy_ai_pair(grid.z(u) / l_g);
        a[u] = p.ai;
        ap[u] = p.aip / l_g;
    }
}

void airy_row_serial(const Grid& grid, double l_g, std::vector<double>& a,
                     std::vector<double>& ap) {
    a.resize(grid.n_z);
    ap.resize(grid.n_z);
    for (std::size_t j = 0; j < grid.n_z; ++j) {
        const AiryPair p = airy_ai_pair(grid.z(j) / l_g);
        a[j] = p.ai;
        ap[j] = p.aip / l_g;
    }
}

namespace {

// Shared slot accumulator: contributions to slot s come from modes whose
// integer shift is s (value basis) and s - 1 (far-end basis).  Modes arrive
// sorted by lambda, so both groups are contiguous index ranges and every
// slot can be filled independently in a fixed order.
struct CombPlan {
    std::vector<std::int64_t> k;
    std::vector<double> tau;
    std::int64_t k_front = 0;
    std::int64_t k_back = 0;
};

CombPlan comb_plan(const std::vector<double>& lambda, double l_g,
                   const Grid& grid) {
    CombPlan plan;
    plan.k.resize(lambda.size());
    plan.tau.resize(lambda.size());
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        const double shift = lambda[n] * l_g / grid.delta_z;
        const double kf = std::floor(shift);
        plan.k[n] = static_cast<std::int64_t>(kf);
        plan.tau[n] = shift - kf;
    }
    plan.k_front = plan.k.front();
    plan.k_back = plan.k.back();
    return plan;
}

void fill_slot(const CombPlan& plan,
               const std::vector<std::complex<double>>& b, double dz,
               std::int64_t s, std::complex<double>& slot_a,
               std::complex<double>& slot_ap) {
    std::complex<double> acc_a = 0.0;
    std::complex<double> acc_ap = 0.0;
    const auto lo_prev = std::lower_bound(plan.k.begin(), plan.k.end(), s - 1);
    const auto lo_here = std::lower_bound(lo_prev, plan.k.end(), s);
    const auto lo_next = std::lower_bound(lo_here, plan.k.end(), s + 1);
    for (auto it = lo_prev; it != lo_here; ++it) {
        const auto n = static_cast<std::size_t>(it - plan.k.begin());
        acc_a += b[n] * h01(plan.tau[n]);
        acc_ap += b[n] * (dz * h11(plan.tau[n]));
    }
    for (auto it = lo_here; it != lo_next; ++it) {
        const auto n = static_cast<std::size_t>(it - plan.k.begin());
        acc_a += b[n] * h00(plan.tau[n]);
        acc_ap += b[n] * (dz * h10(plan.tau[n]));
    }
    slot_a = acc_a;
    slot_ap = acc_ap;
}

} // namespace

void build_combs(const std::vector<double>& lambda,
                 const std::vector<std::complex<double>>& b, double l_g,
                 const Grid& grid, SplineCombs& out) {
    check_mode_coverage(lambda, l_g, grid);
    const CombPlan plan = comb_plan(lambda, l_g, grid);
    out.comb_a.assign(2 * grid.n_z, 0.0);
    out.comb_ap.assign(2 * grid.n_z, 0.0);
    const auto lo = plan.k_front;
    const auto hi = plan.k_back + 1;
#pragma omp parallel for schedule(static)
    for (std::int64_t s = lo; s <= hi; ++s)
        fill_slot(plan, b, grid.delta_z, s,
                  out.comb_a[static_cast<std::size_t>(s)],
                  out.comb_ap[static_cast<std::size_t>(s)]);
}

void build_combs_serial(const std::vector<double>& lambda,
                        const std::vector<std::complex<double>>& b, double l_g,
                        const Grid& grid, SplineCombs& out) {
    check_mode_coverage(lambda, l_g, grid);
    const CombPlan plan = comb_plan(lambda, l_g, grid);
    out.comb_a.assign(2 * grid.n_z, 0.0);
    out.comb_ap.assign(2 * grid.n_z, 0.0);
    for (std::int64_t s = plan.k_front; s <= plan.k_back + 1; ++s)
        fill_slot(plan, b, grid.delta_z, s,
                  out.comb_a[static_cast<std::size_t>(s)],
                  out.comb_ap[static_cast<std::size_t>(s)]);
}

void direct_sum(const std::vector<double>& lambda,
                const std::vector<std::complex<double>>& b, double l_g,
                const Grid& grid, std::vector<std::complex<double>>& out) {
    out.assign(grid.n_z, 0.0);
    const auto n = static_cast<std::int64_t>(grid.n_z);
    const std::int64_t j0 = grid.i_min < 0 ? -grid.i_min : 0;
#pragma omp parallel for schedule(static)
    for (std::int64_t j = j0; j < n; ++j) {
        const auto u = static_cast<std::size_t>(j);
        const double x = grid.z(u) / l_g;
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < lambda.size(); ++m)
            acc += b[m] * airy_ai(x - lambda[m]);
        out[u] = acc;
    }
}

void direct_sum_serial(const std::vector<double>& lambda,
                       const std::vector<std::complex<double>>& b, double l_g,
                       const Grid& grid,
                       std::vector<std::complex<double>>& out) {
    out.assign(grid.n_z, 0.0);
    const auto n = static_cast<std::int64_t>(grid.n_z);
    const std::int64_t j0 = grid.i_min < 0 ? -grid.i_min : 0;
    for (std::int64_t j = j0; j < n; ++j) {
        const auto u = static_cast<std::size_t>(j);
        const double x = grid.z(u) / l_g;
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < lambda.size(); ++m)
            acc += b[m] * airy_ai(x - lambda[m]);
        out[u] = acc;
    }
}

} // namespace kernels

std::vector<std::complex<double>> bn_coefficients(
    const SpectralDecomposition& dec, double t) {
    const double sql = std::sqrt(dec.units.l_g);
    std::vector<std::complex<double>> b(dec.coeff.size());
    for (std::size_t n = 0; n < b.size(); ++n)
        b[n] = dec.coeff[n] *
               std::polar(1.0, -dec.lambda[n] * t / dec.units.t_g) /
               (sql * dec.aip[n]);
    return b;
}

WaveField snapshot_on_mirror(const SpectralDecomposition& dec, double t,
                             const Grid& grid) {
    if (!(t >= 0.0) || !(t <= dec.params.mirror_time()))
        throw DomainError(
            "snapshot_on_mirror: t must lie in [0, d/V]");
    if (2 * grid.n_z > kDefaultMemoryCap)
        throw CapacityError(
            "snapshot_on_mirror: grid too large for the convolution route");
    check_mode_coverage(dec.lambda, dec.units.l_g, grid);

    const std::vector<std::complex<double>> b = bn_coefficients(dec, t);
    kernels::SplineCombs combs;
    kernels::build_combs(dec.lambda, b, dec.units.l_g, grid, combs);

    std::vector<double> a, ap;
    kernels::airy_row(grid, dec.units.l_g, a, ap);
    std::vector<std::complex<double>> pad(2 * grid.n_z, 0.0);
    for (std::size_t j = 0; j < grid.n_z; ++j) pad[j] = a[j];

    fft_forward(combs.comb_a);
    fft_forward(pad);
    for (std::size_t j = 0; j < pad.size(); ++j) combs.comb_a[j] *= pad[j];
    fft_inverse(combs.comb_a);

    std::fill(pad.begin(), pad.end(), std::complex<double>(0.0));
    for (std::size_t j = 0; j < grid.n_z; ++j) pad[j] = ap[j];
    fft_forward(combs.comb_ap);
    fft_forward(pad);
    for (std::size_t j = 0; j < pad.size(); ++j) combs.comb_ap[j] *= pad[j];
    fft_inverse(combs.comb_ap);

    WaveField field;
    field.grid = grid;
    field.values.resize(grid.n_z);
    const std::size_t first_nonneg =
        grid.i_min >= 0 ? 0 : static_cast<std::size_t>(-grid.i_min);
    for (std::size_t j = 0; j < grid.n_z; ++j)
        field.values[j] = j < first_nonneg
                              ? std::complex<double>(0.0)
                              : combs.comb_a[j] - combs.comb_ap[j];
    return field;
}

WaveField psi_d_spline(const SpectralDecomposition& dec, const Grid& grid) {
    return snapshot_on_mirror(dec, dec.params.mirror_time(), grid);
}

WaveField psi_d_direct(const SpectralDecomposition& dec, const Grid& grid) {
    check_mode_coverage(dec.lambda, dec.units.l_g, grid);
    const std::vector<std::complex<double>> b =
        bn_coefficients(dec, dec.params.mirror_time());
    WaveField field;
    field.grid = grid;
    kernels::direct_sum(dec.lambda, b, dec.units.l_g, grid, field.values);
    return field;
}

} // namespace qbounce
