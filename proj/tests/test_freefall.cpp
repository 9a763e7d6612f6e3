#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qbounce/errors.hpp"
#include "qbounce/freefall.hpp"
#include "qbounce/grid.hpp"
#include "qbounce/rng.hpp"
#include "qbounce/units.hpp"
#include "qbounce/wavefield.hpp"
#include "qbounce/wavepacket.hpp"

using namespace qbounce;

namespace {

Grid make_grid(double dz, std::size_t n) {
    Grid g;
    g.delta_z = dz;
    g.n_z = n;
    g.i_min = -static_cast<std::int64_t>(n / 2);
    return g;
}

WaveField make_packet(const Grid& g, const WavePacketParams& p) {
    WaveField f;
    f.grid = g;
    kernels::gaussian_fill_serial(g, p, PhysicalConstants{}, f.values);
    return f;
}

double rel_l2(const std::vector<std::complex<double>>& a,
              const std::vector<std::complex<double>>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        num += std::norm(a[j] - b[j]);
        den += std::norm(b[j]);
    }
    return std::sqrt(num / den);
}

// Spreading Gaussian in free space (g = 0).
std::complex<double> free_gaussian(double z, double t,
                                   const WavePacketParams& p) {
    const std::complex<double> beta(
        1.0, kHbar * t / (2.0 * p.m * p.sigma_z * p.sigma_z));
    const double zc = p.z0 + p.v0 * t;
    const std::complex<double> arg =
        -(z - zc) * (z - zc) / (4.0 * p.sigma_z * p.sigma_z * beta);
    const std::complex<double> carrier(
        0.0, p.m * p.v0 * (z - p.z0 - 0.5 * p.v0 * t) / kHbar);
    return std::pow(2.0 * kPi * p.sigma_z * p.sigma_z, -0.25) /
           std::sqrt(beta) * std::exp(arg + carrier);
}

} // namespace

TEST_CASE("zero fall time is a numerical identity") {
    WavePacketParams p;
    p.sigma_z = 1e-5;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 16);
    const WaveField in = make_packet(g, p);
    const WaveField out = freefall_propagate(in, p, 0.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n_z; ++j)
        worst = std::max(worst, std::abs(out.values[j] - in.values[j]));
    CHECK(worst < 1e-13);
    CHECK(std::fabs(field_norm2(out) - field_norm2(in)) < 1e-13);
}

TEST_CASE("field-free flight matches the spreading Gaussian") {
    WavePacketParams p;
    p.z0 = 1e-3;
    p.v0 = -91.5e-3;
    p.sigma_z = 0.4e-6;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 21);
    const WaveField in = make_packet(g, p);

    WavePacketParams free_space = p;
    free_space.g = 0.0;
    const double T = 0.15;
    const WaveField out = freefall_propagate(in, free_space, T);

    std::vector<std::complex<double>> want(g.n_z);
    for (std::size_t j = 0; j < g.n_z; ++j)
        want[j] = free_gaussian(g.z(j), T, p);
    CHECK(rel_l2(out.values, want) < 1e-8);
}

TEST_CASE("flight steps compose") {
    WavePacketParams p;
    p.z0 = 1e-3;
    p.v0 = -0.05;
    p.sigma_z = 1e-3;
    const Grid g = make_grid(2.40276e-7, std::size_t{1} << 21);
    const WaveField in = make_packet(g, p);

    const WaveField one = freefall_propagate(in, p, 0.060);
    const WaveField two =
        freefall_propagate(freefall_propagate(in, p, 0.035), p, 0.025);
    CHECK(rel_l2(two.values, one.values) < 1e-10);
}

TEST_CASE("moments follow the classical map") {
    WavePacketParams p;
    p.z0 = 1e-3;
    p.v0 = -0.05;
    p.sigma_z = 1e-4;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 20);
    const WaveField in = make_packet(g, p);
    const FieldMoments m0 = field_moments(in);

    const double T = 0.06;
    const WaveField out = freefall_propagate(in, p, T);
    const FieldMoments m1 = field_moments(out);

    const double z_want =
        m0.mean_z + (m0.mean_p / p.m) * T - 0.5 * p.g * T * T;
    const double p_want = m0.mean_p - p.m * p.g * T;
    const double var_want = m0.var_z + 2.0 * (T / p.m) * m0.cov_zp +
                            (T / p.m) * (T / p.m) * m0.var_p;
    const double cov_want = m0.cov_zp + (T / p.m) * m0.var_p;

    CHECK(std::fabs(m1.mean_z - z_want) < 1e-8 * std::fabs(z_want));
    CHECK(std::fabs(m1.mean_p - p_want) < 1e-10 * std::fabs(p_want));
    CHECK(std::fabs(m1.var_z - var_want) < 1e-8 * var_want);
    CHECK(std::fabs(m1.cov_zp - cov_want) < 1e-8 * std::fabs(cov_want));
    CHECK(std::fabs(m1.var_p - m0.var_p) < 1e-6 * m0.var_p);
}

TEST_CASE("mass reaching the grid edge raises LeakageError") {
    WavePacketParams p;
    p.z0 = 1e-3;
    p.v0 = 0.0;
    p.sigma_z = 5e-4;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 16);
    const WaveField in = make_packet(g, p);
    CHECK_NOTHROW(freefall_propagate(in, p, 0.03));
    CHECK_THROWS_AS(freefall_propagate(in, p, 0.0425), LeakageError);
}

TEST_CASE("galilean boost shifts the drop point") {
    WavePacketParams p;
    p.z0 = 1e-3;
    p.v0 = -0.02;
    p.sigma_z = 1e-4;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 20);
    const WaveField in = make_packet(g, p);
    const double T = 0.05;

    const double u = 0.08;
    WaveField boosted = in;
    kernels::linear_z_phase_serial(g, p.m * u / kHbar, boosted.values);

    const FieldMoments a = field_moments(freefall_propagate(in, p, T));
    const FieldMoments b = field_moments(freefall_propagate(boosted, p, T));
    CHECK(std::fabs(b.mean_z - (a.mean_z + u * T)) < 1e-9);
    CHECK(std::fabs(b.mean_p - (a.mean_p + p.m * u)) <
          1e-10 * std::fabs(p.m * u));
}

TEST_CASE("two dropped packets interfere at the two-source spacing") {
    WavePacketParams p;
    p.z0 = 1e-3;
    p.v0 = 0.0;
    p.sigma_z = 5e-6;
    const double sep = 1e-4;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 19);

    WavePacketParams shifted = p;
    shifted.z0 = p.z0 + sep;
    WaveField in = make_packet(g, p);
    const WaveField other = make_packet(g, shifted);
    for (std::size_t j = 0; j < g.n_z; ++j) in.values[j] += other.values[j];

    const double T = 0.1;
    const WaveField out = freefall_propagate(in, p, T);
    const ZStats st = field_zstats(out);

    std::vector<double> maxima;
    for (std::size_t j = 1; j + 1 < g.n_z; ++j) {
        const double z = g.z(j);
        if (std::fabs(z - st.mean_z) > 2.0 * st.sigma_z) continue;
        const double r0 = std::norm(out.values[j - 1]);
        const double r1 = std::norm(out.values[j]);
        const double r2 = std::norm(out.values[j + 1]);
        if (r1 > r0 && r1 > r2) maxima.push_back(z);
    }
    REQUIRE(maxima.size() >= 4);
    std::vector<double> gaps;
    for (std::size_t i = 1; i < maxima.size(); ++i)
        gaps.push_back(maxima[i] - maxima[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    const double med = gaps[gaps.size() / 2];
    const double want = 2.0 * kPi * kHbar * T / (p.m * sep);
    CHECK(std::fabs(med - want) < 0.03 * want);
}

TEST_CASE("snapshot time window") {
    WavePacketParams p;
    p.sigma_z = 1e-4;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 16);
    const WaveField in = make_packet(g, p);
    CHECK_NOTHROW(snapshot_freefall(in, p, 0.002));
    CHECK_THROWS_AS(snapshot_freefall(in, p, -0.1), DomainError);
    CHECK_THROWS_AS(snapshot_freefall(in, p, p.fall_time() + 1e-9),
                    DomainError);
    CHECK_THROWS_AS(freefall_propagate(in, p, std::nan("")), DomainError);
}

TEST_CASE("embedding into a larger grid") {
    WavePacketParams p;
    p.sigma_z = 1e-5;
    const Grid g = make_grid(2.5e-7, std::size_t{1} << 12);
    const WaveField in = make_packet(g, p);

    Grid big = g;
    big.n_z = g.n_z * 4;
    big.i_min = g.i_min + static_cast<std::int64_t>(g.n_z) -
                static_cast<std::int64_t>(big.n_z);
    const WaveField out = embed_field(in, big);
    CHECK(out.values.size() == big.n_z);
    const auto j0 = static_cast<std::size_t>(g.i_min - big.i_min);
    bool same = true;
    for (std::size_t j = 0; j < g.n_z; ++j)
        if (out.values[j0 + j] != in.values[j]) { same = false; break; }
    CHECK(same);
    for (std::size_t j = 0; j < j0; ++j)
        CHECK(out.values[j] == std::complex<double>(0.0));
    CHECK(field_norm2(out) == field_norm2(in));

    Grid wrong = big;
    wrong.delta_z = 2.6e-7;
    CHECK_THROWS_AS(embed_field(in, wrong), ConfigError);
    Grid small = make_grid(2.5e-7, 1 << 10);
    CHECK_THROWS_AS(embed_field(in, small), ConfigError);
}

TEST_CASE("freefall kernels agree bitwise") {
    const Grid g = make_grid(1.7e-7, std::size_t{1} << 14);
    const MomentumGrid mg = momentum_grid(g);
    SplitMix64 rng(7);
    std::vector<std::complex<double>> a(g.n_z);
    for (auto& v : a) v = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    auto b = a;
    kernels::freefall_phase(mg, kMassHydrogen, 9.81, 0.2, kHbar, a);
    kernels::freefall_phase_serial(mg, kMassHydrogen, 9.81, 0.2, kHbar, b);
    CHECK(a == b);

    kernels::linear_z_phase(g, 1234.5, a);
    kernels::linear_z_phase_serial(g, 1234.5, b);
    CHECK(a == b);
}
