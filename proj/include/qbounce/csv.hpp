#pragma once
#include <ostream>
#include <string>
#include <vector>

#include "qbounce/config.hpp"
#include "qbounce/estimation.hpp"

namespace qbounce {

// Common header block carried by every output file: code version, config
// hash, physical constants, seed and substream rule, and the canonical
// config echo.  No timestamps; identical runs produce identical bytes.
void write_manifest_header(std::ostream& os, const RunConfig& cfg);

// Columns z_m, density_per_m.
void write_density_csv(const std::string& path, const RunConfig& cfg,
                       const DetectionDensity& density);

// |psi|^2 of a propagation snapshot, same schema, station recorded in the
// header.
void write_field_density_csv(const std::string& path, const RunConfig& cfg,
                             const WaveField& field, double x_station);

// Columns g_hat_rel, count: estimator histogram over hist_bins uniform
// bins.  Zero-width data collapses to a single row.
void write_histogram_csv(const std::string& path, const RunConfig& cfg,
                         const EstimationReport& report);

// One-row campaign summary.
void write_summary_csv(const std::string& path, const RunConfig& cfg,
                       const EstimationReport& report);

// Columns n_events, sigma_cr_rel over fisher_n_list; rows are
// sigma_cr(1)/sqrt(n) so the square-root law holds exactly.
void write_fisher_csv(const std::string& path, const RunConfig& cfg,
                      const FisherResult& fisher);

struct ScanRow {
    double value = 0.0;
    double fisher = 0.0;
    double sigma_cr_rel = 0.0;
};

// Columns param_value, fisher, sigma_cr_rel; failed points carry nan.
void write_scan_csv(const std::string& path, const RunConfig& cfg,
                    const std::vector<ScanRow>& rows);

// Grid sizes, mode count, window, and mirror-exit statistics of one run.
void write_run_manifest(const std::string& path, const RunConfig& cfg,
                        const DetectorRun& run, const WindowSpec& window);

} // namespace qbounce
