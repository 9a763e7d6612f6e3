#pragma once
#include <string>
#include <vector>

#include "qbounce/config.hpp"

namespace qbounce {

// Detector densities at g0 and g0(1 +/- 1e-4), optional propagation
// snapshots at the configured x = V t stations, and the run manifest.
void run_simulate(const RunConfig& cfg);

// Monte-Carlo campaign: estimator histogram and summary row.
void run_estimate(const RunConfig& cfg);

// Fisher information and the Cramer-Rao bound over fisher_n_list.
void run_fisher(const RunConfig& cfg);

// Fisher information per scan_values point; failures become nan rows.
void run_scan(const RunConfig& cfg);

// Full driver: subcommand dispatch, config load, flag overrides, and the
// error to exit-code mapping (0 ok, 2 config, 3 numerical, 4 capacity).
// args excludes the program name.
int cli_main(const std::vector<std::string>& args);

} // namespace qbounce
