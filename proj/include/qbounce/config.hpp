#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "qbounce/pipeline.hpp"

namespace qbounce {

// Flat key = value run configuration.  Field names are the config keys;
// unit suffixes name the SI unit.  Defaults describe the reference setup:
// hydrogen released 1 mm above a 30 mm mirror, detected at 300 mm.
struct RunConfig {
    double mass_kg = kMassHydrogen;
    double g_m_per_s2 = 9.81;
    double z0_m = 1e-3;
    double v0_m_per_s = -91.5e-3;
    double sigma_z_m = 0.4e-6;
    double v_horizontal_m_per_s = 1.0;
    double d_mirror_m = 30e-3;
    double d_detector_m = 300e-3;

    long long n_gqs = 12000;          // 0 derives the count from truncation_tol
    double truncation_tol = 1e-4;
    long long truncation_granularity = 500;
    long long truncation_cap = 1000000;
    double delta_z_m = 0.0;           // 0 derives the spacing from the Nyquist rule
    double nyquist_safety = 0.05;
    double x_max = 10.0;
    unsigned long long memory_cap = 67108864ULL;

    long long family_count = 41;
    double family_halfwidth_rel = 1e-5;
    long long n_events = 1000;
    long long m_repetitions = 500;
    unsigned long long seed = 20250818ULL;
    double sigma_det_m = 0.0;
    double delta_g_rel = 1e-7;
    double reflection_efficiency = 1.0;
    long long hist_bins = 40;

    std::vector<double> snapshot_x_m;
    std::vector<long long> fisher_n_list = {1, 10, 50, 100, 200, 500, 1000, 10000};
    std::string scan_param = "z0_m";
    std::vector<double> scan_values;
    std::string out_dir = "out";

    WavePacketParams params() const;
    PipelineOptions options() const;
    void validate() const;
};

// Parse a key = value document ('#' starts a comment).  Unknown, duplicate,
// or malformed entries throw ConfigError naming the line.  Every key has a
// default, so the empty document parses to the reference configuration.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

// Canonical form: every key once, declaration order, %.17g for reals.
// parse_config(serialize_config(cfg)) reproduces cfg exactly.
std::string serialize_config(const RunConfig& cfg);

// FNV-1a 64 over the canonical form.
std::uint64_t config_hash(const RunConfig& cfg);

// Parameter names accepted by the scan pipeline.
const std::vector<std::string>& scannable_params();

// Copy of cfg with the named scannable parameter replaced.
RunConfig with_scan_value(const RunConfig& cfg, const std::string& param,
                          double value);

} // namespace qbounce
