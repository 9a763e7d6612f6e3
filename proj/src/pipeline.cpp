#include "qbounce/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "qbounce/errors.hpp"

namespace qbounce {

namespace {

void validate_options(const PipelineOptions& opts) {
    if (opts.n_gqs < 0)
        throw ConfigError("pipeline: n_gqs must be nonnegative");
    if (!(opts.delta_z >= 0.0) || !std::isfinite(opts.delta_z))
        throw ConfigError("pipeline: delta_z must be nonnegative and finite");
}

DetectorRun finish_run(SpectralDecomposition dec, const Grid& first,
                       const Grid& ext, const WavePacketParams& params,
                       const PhysicalConstants& pc) {
    DetectorRun run;
    run.T = params.fall_time();
    run.first_grid = first;
    run.ext_grid = ext;
    run.psi_d = psi_d_spline(dec, first);
    run.mom_d = field_moments(run.psi_d, pc);
    const WaveField embedded = embed_field(run.psi_d, ext);
    run.psi_det = detail::freefall_impl(embedded, params, run.T, true, pc);
    run.dec = std::move(dec);
    return run;
}

} // namespace

DetectorRun propagate_to_detector(const WavePacketParams& params,
                                  const PipelineOptions& opts,
                                  const PhysicalConstants& pc) {
    params.validate();
    validate_options(opts);
    const UnitSet units = gqs_units(params.m, params.g, pc);
    const int n = opts.n_gqs > 0
                      ? opts.n_gqs
                      : truncation_order(params, opts.truncation_tol,
                                         opts.granularity, opts.truncation_cap,
                                         pc);
    const double dz = opts.delta_z > 0.0
                          ? opts.delta_z
                          : nyquist_spacing(units, n, opts.nyquist_safety);
    const Grid first =
        first_phase_grid(units, n, dz, opts.x_max, opts.memory_cap);

    SpectralDecomposition dec = decompose(params, n, pc);
    WaveField psi_d = psi_d_spline(dec, first);
    const FieldMoments mom = field_moments(psi_d, pc);
    const Grid ext = extend_for_freefall(first, params, mom,
                                         params.fall_time(), opts.memory_cap);

    DetectorRun run;
    run.T = params.fall_time();
    run.first_grid = first;
    run.ext_grid = ext;
    run.mom_d = mom;
    const WaveField embedded = embed_field(psi_d, ext);
    run.psi_det = detail::freefall_impl(embedded, params, run.T, true, pc);
    run.psi_d = std::move(psi_d);
    run.dec = std::move(dec);
    return run;
}

DetectorRun propagate_to_detector(const WavePacketParams& params,
                                  const PipelineOptions& opts,
                                  const SharedGeometry& geometry,
                                  const PhysicalConstants& pc) {
    params.validate();
    validate_options(opts);
    if (geometry.lambda.empty() || geometry.lambda.size() != geometry.aip.size())
        throw ConfigError("pipeline: invalid shared geometry tables");

    SpectralDecomposition dec;
    dec.params = params;
    dec.units = gqs_units(params.m, params.g, pc);
    dec.n_gqs = static_cast<int>(geometry.lambda.size());
    dec.lambda = geometry.lambda;
    dec.aip = geometry.aip;
    kernels::coefficients(params, dec.units, dec.lambda, dec.aip, pc,
                          dec.coeff);
    return finish_run(std::move(dec), geometry.first_grid, geometry.ext_grid,
                      params, pc);
}

SharedGeometry shared_geometry(const DetectorRun& run) {
    SharedGeometry geo;
    geo.first_grid = run.first_grid;
    geo.ext_grid = run.ext_grid;
    geo.lambda = run.dec.lambda;
    geo.aip = run.dec.aip;
    return geo;
}

WindowSpec detection_window(const DetectorRun& run, double sigma_mult,
                            double min_spacing) {
    if (!(sigma_mult > 0.0))
        throw ConfigError("detection_window: sigma_mult must be positive");
    const ZStats st = field_zstats(run.psi_det);
    const Grid& g = run.psi_det.grid;

    WindowSpec w;
    w.stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(min_spacing / g.delta_z)));

    const double lo = st.mean_z - sigma_mult * st.sigma_z;
    const double hi = st.mean_z + sigma_mult * st.sigma_z;
    const auto lo_idx = static_cast<std::int64_t>(
        std::floor((lo - g.z_min()) / g.delta_z));
    const auto hi_idx = static_cast<std::int64_t>(
        std::ceil((hi - g.z_min()) / g.delta_z));
    const auto span = static_cast<std::size_t>(
        std::max<std::int64_t>(hi_idx - lo_idx, 1));

    std::size_t count = next_pow2((span + w.stride - 1) / w.stride + 1);
    while (count > 1 && (count - 1) * w.stride + 1 > g.n_z) count /= 2;
    w.count = count;

    const auto center =
        static_cast<std::int64_t>(std::llround((st.mean_z - g.z_min()) /
                                               g.delta_z));
    std::int64_t start =
        center - static_cast<std::int64_t>(count / 2 * w.stride);
    const auto max_start = static_cast<std::int64_t>(
        g.n_z - ((count - 1) * w.stride + 1));
    start = std::clamp<std::int64_t>(start, 0, max_start);

    // Keep decimated nodes on exact multiples of stride * delta_z.
    const auto stride_i = static_cast<std::int64_t>(w.stride);
    const std::int64_t misalign = ((g.i_min + start) % stride_i + stride_i) %
                                  stride_i;
    start -= misalign;
    if (start < 0) start += stride_i;
    if (start > max_start) start = max_start - ((g.i_min + max_start) % stride_i + stride_i) % stride_i;
    if (start < 0)
        throw ConfigError("detection_window: grid too small for the window");
    w.start = static_cast<std::size_t>(start);
    return w;
}

} // namespace qbounce
