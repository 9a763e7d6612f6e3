#include "qbounce/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qbounce/errors.hpp"

namespace qbounce {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_hash(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("csv: cannot write '" + path + "'");
    return os;
}

} // namespace

void write_manifest_header(std::ostream& os, const RunConfig& cfg) {
    const PhysicalConstants pc;
    const UnitSet units = gqs_units(cfg.mass_kg, cfg.g_m_per_s2, pc);
    os << "# " << kCodeVersion << '\n';
    os << "# config_hash = " << fmt_hash(config_hash(cfg)) << '\n';
    os << "# hbar_J_s = " << fmt17(pc.hbar) << '\n';
    os << "# amu_kg = " << fmt17(pc.amu) << '\n';
    os << "# l_g_m = " << fmt17(units.l_g) << '\n';
    os << "# e_g_J = " << fmt17(units.e_g) << '\n';
    os << "# t_g_s = " << fmt17(units.t_g) << '\n';
    os << "# seed = " << cfg.seed << '\n';
    os << "# substream r: splitmix64_next(seed xor (0x9E3779B97F4A7C15 * (r + 1)))" << '\n';
    std::istringstream cfg_lines(serialize_config(cfg));
    std::string line;
    while (std::getline(cfg_lines, line))
        os << "# cfg: " << line << '\n';
}

void write_density_csv(const std::string& path, const RunConfig& cfg,
                       const DetectionDensity& density) {
    std::ofstream os = open_out(path);
    write_manifest_header(os, cfg);
    os << "# g_value_m_per_s2 = " << fmt17(density.g_value) << '\n';
    os << "z_m,density_per_m\n";
    for (std::size_t j = 0; j < density.pdf.size(); ++j)
        os << fmt17(density.grid.z(j)) << ',' << fmt17(density.pdf[j]) << '\n';
}

void write_field_density_csv(const std::string& path, const RunConfig& cfg,
                             const WaveField& field, double x_station) {
    std::ofstream os = open_out(path);
    write_manifest_header(os, cfg);
    os << "# x_station_m = " << fmt17(x_station) << '\n';
    os << "z_m,density_per_m\n";
    for (std::size_t j = 0; j < field.values.size(); ++j)
        os << fmt17(field.grid.z(j)) << ',' << fmt17(std::norm(field.values[j]))
           << '\n';
}

void write_histogram_csv(const std::string& path, const RunConfig& cfg,
                         const EstimationReport& report) {
    std::ofstream os = open_out(path);
    write_manifest_header(os, cfg);
    os << "g_hat_rel,count\n";
    if (report.estimates.empty()) return;
    std::vector<double> rel(report.estimates.size());
    for (std::size_t i = 0; i < rel.size(); ++i)
        rel[i] = report.estimates[i] / report.g_true;
    const auto [lo_it, hi_it] = std::minmax_element(rel.begin(), rel.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) {
        os << fmt17(lo) << ',' << rel.size() << '\n';
        return;
    }
    const auto bins = static_cast<std::size_t>(cfg.hist_bins);
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> count(bins, 0);
    for (double x : rel) {
        auto k = static_cast<std::size_t>((x - lo) / width);
        if (k >= bins) k = bins - 1;
        ++count[k];
    }
    for (std::size_t k = 0; k < bins; ++k) {
        const double center = lo + (static_cast<double>(k) + 0.5) * width;
        os << fmt17(center) << ',' << count[k] << '\n';
    }
}

void write_summary_csv(const std::string& path, const RunConfig& cfg,
                       const EstimationReport& report) {
    std::ofstream os = open_out(path);
    write_manifest_header(os, cfg);
    os << "mean_g_m_per_s2,sigma_g_m_per_s2,sigma_g_rel,sigma_cr_rel,fisher,"
          "n_events,m_repetitions,seed\n";
    os << fmt17(report.mean_g) << ',' << fmt17(report.sigma_g) << ','
       << fmt17(report.sigma_g / report.g_true) << ','
       << fmt17(report.sigma_cr_rel) << ',' << fmt17(report.fisher) << ','
       << report.n_events << ',' << report.m_reps << ',' << report.seed
       << '\n';
}

void write_fisher_csv(const std::string& path, const RunConfig& cfg,
                      const FisherResult& fisher) {
    std::ofstream os = open_out(path);
    write_manifest_header(os, cfg);
    os << "# fisher = " << fmt17(fisher.value) << '\n';
    os << "# richardson_rel = " << fmt17(fisher.richardson_rel) << '\n';
    os << "n_events,sigma_cr_rel\n";
    const double sigma1 = cramer_rao(1, fisher.value);
    for (long long n : cfg.fisher_n_list)
        os << n << ',' << fmt17(sigma1 / std::sqrt(static_cast<double>(n)))
           << '\n';
}

void write_scan_csv(const std::string& path, const RunConfig& cfg,
                    const std::vector<ScanRow>& rows) {
    std::ofstream os = open_out(path);
    write_manifest_header(os, cfg);
    os << "# scan_param = " << cfg.scan_param << '\n';
    os << "param_value,fisher,sigma_cr_rel\n";
    for (const ScanRow& row : rows)
        os << fmt17(row.value) << ',' << fmt17(row.fisher) << ','
           << fmt17(row.sigma_cr_rel) << '\n';
}

void write_run_manifest(const std::string& path, const RunConfig& cfg,
                        const DetectorRun& run, const WindowSpec& window) {
    std::ofstream os = open_out(path);
    write_manifest_header(os, cfg);
    os << "# n_gqs_used = " << run.dec.lambda.size() << '\n';
    os << "# first_grid: delta_z_m = " << fmt17(run.first_grid.delta_z)
       << ", i_min = " << run.first_grid.i_min
       << ", n_z = " << run.first_grid.n_z << '\n';
    os << "# ext_grid: delta_z_m = " << fmt17(run.ext_grid.delta_z)
       << ", i_min = " << run.ext_grid.i_min
       << ", n_z = " << run.ext_grid.n_z << '\n';
    os << "# fall_time_s = " << fmt17(run.T) << '\n';
    os << "# window: start = " << window.start << ", stride = " << window.stride
       << ", count = " << window.count << '\n';
    os << "# psi_d: norm2 = " << fmt17(run.mom_d.norm2)
       << ", mean_z_m = " << fmt17(run.mom_d.mean_z)
       << ", sigma_z_m = " << fmt17(std::sqrt(run.mom_d.var_z)) << '\n';
}

} // namespace qbounce
