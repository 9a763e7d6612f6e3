#include "qbounce/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "CLI11.hpp"
#include "qbounce/csv.hpp"
#include "qbounce/errors.hpp"

namespace qbounce {

namespace {

// Relative g offset of the shifted fringe curves.
constexpr double kFringeShiftRel = 1e-4;

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void note_written(const std::string& path) {
    std::printf("wrote %s\n", path.c_str());
}

} // namespace

void run_simulate(const RunConfig& cfg) {
    const WavePacketParams params = cfg.params();
    const PipelineOptions opts = cfg.options();
    const DetectorRun run = propagate_to_detector(params, opts);
    const SharedGeometry geometry = shared_geometry(run);
    const WindowSpec window = detection_window(run);

    const auto density_at = [&](const DetectorRun& r) {
        return resolution_blur(detection_density(r, window), cfg.sigma_det_m);
    };
    const auto shifted_run = [&](double g_scale) {
        WavePacketParams p = params;
        p.g = params.g * g_scale;
        return propagate_to_detector(p, opts, geometry);
    };

    std::string path = out_path(cfg, "density_g0.csv");
    write_density_csv(path, cfg, density_at(run));
    note_written(path);
    path = out_path(cfg, "density_gplus.csv");
    write_density_csv(path, cfg, density_at(shifted_run(1.0 + kFringeShiftRel)));
    note_written(path);
    path = out_path(cfg, "density_gminus.csv");
    write_density_csv(path, cfg, density_at(shifted_run(1.0 - kFringeShiftRel)));
    note_written(path);

    if (!cfg.snapshot_x_m.empty()) {
        const WaveField psi_d_ext = embed_field(run.psi_d, run.ext_grid);
        for (std::size_t i = 0; i < cfg.snapshot_x_m.size(); ++i) {
            const double x = cfg.snapshot_x_m[i];
            const double t = x / params.V;
            WaveField field;
            if (t <= params.mirror_time())
                field = snapshot_on_mirror(run.dec, t, run.first_grid);
            else
                field = snapshot_freefall(psi_d_ext, params,
                                          t - params.mirror_time());
            char name[32];
            std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", i);
            path = out_path(cfg, name);
            write_field_density_csv(path, cfg, field, x);
            note_written(path);
        }
    }

    path = out_path(cfg, "manifest.txt");
    write_run_manifest(path, cfg, run, window);
    note_written(path);
}

void run_estimate(const RunConfig& cfg) {
    const double scaled =
        static_cast<double>(cfg.n_events) * cfg.reflection_efficiency;
    const auto n_eff = static_cast<std::size_t>(
        std::max(1LL, std::llround(scaled)));
    const EstimationReport report = monte_carlo_campaign(
        cfg.params(), cfg.options(), n_eff,
        static_cast<std::size_t>(cfg.m_repetitions), cfg.seed,
        cfg.delta_g_rel, cfg.sigma_det_m, static_cast<int>(cfg.family_count),
        cfg.family_halfwidth_rel);

    std::string path = out_path(cfg, "histogram.csv");
    write_histogram_csv(path, cfg, report);
    note_written(path);
    path = out_path(cfg, "summary.csv");
    write_summary_csv(path, cfg, report);
    note_written(path);
}

void run_fisher(const RunConfig& cfg) {
    const FisherResult fisher = fisher_information(
        cfg.params(), cfg.options(), cfg.delta_g_rel, cfg.sigma_det_m);
    const std::string path = out_path(cfg, "fisher.csv");
    write_fisher_csv(path, cfg, fisher);
    note_written(path);
}

void run_scan(const RunConfig& cfg) {
    std::vector<ScanRow> rows;
    rows.reserve(cfg.scan_values.size());
    for (double value : cfg.scan_values) {
        ScanRow row;
        row.value = value;
        row.fisher = std::numeric_limits<double>::quiet_NaN();
        row.sigma_cr_rel = std::numeric_limits<double>::quiet_NaN();
        try {
            const RunConfig point = with_scan_value(cfg, cfg.scan_param, value);
            const FisherResult fisher = fisher_information(
                point.params(), point.options(), point.delta_g_rel,
                point.sigma_det_m);
            row.fisher = fisher.value;
            row.sigma_cr_rel = cramer_rao(
                static_cast<std::size_t>(point.n_events), fisher.value);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "scan: %s = %.17g failed: %s\n",
                         cfg.scan_param.c_str(), value, e.what());
        }
        rows.push_back(row);
    }
    const std::string path = out_path(cfg, "scan.csv");
    write_scan_csv(path, cfg, rows);
    note_written(path);
}

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"single-bounce quantum gravimeter simulation and estimation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned long long seed = 0;
    long long n_events = 0;
    long long m_reps = 0;
    bool has_out = false, has_seed = false, has_n = false, has_m = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (key = value)");
        sub->add_option("--out", out_dir, "output directory")
            ->each([&](const std::string&) { has_out = true; });
        sub->add_option("--seed", seed, "campaign seed")
            ->each([&](const std::string&) { has_seed = true; });
        sub->add_option("--N", n_events, "events per experiment")
            ->each([&](const std::string&) { has_n = true; });
        sub->add_option("--M", m_reps, "experiment repetitions")
            ->each([&](const std::string&) { has_m = true; });
    };
    CLI::App* simulate = app.add_subcommand("simulate", "detector densities and snapshots");
    CLI::App* estimate = app.add_subcommand("estimate", "Monte-Carlo estimator campaign");
    CLI::App* fisher = app.add_subcommand("fisher", "Fisher information and Cramer-Rao table");
    CLI::App* scan = app.add_subcommand("scan", "parameter scan of the Fisher information");
    for (CLI::App* sub : {simulate, estimate, fisher, scan}) add_common(sub);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{}
                                            : load_config_file(config_path);
        if (has_out) cfg.out_dir = out_dir;
        if (has_seed) cfg.seed = seed;
        if (has_n) cfg.n_events = n_events;
        if (has_m) cfg.m_repetitions = m_reps;
        cfg.validate();

        if (simulate->parsed()) run_simulate(cfg);
        if (estimate->parsed()) run_estimate(cfg);
        if (fisher->parsed()) run_fisher(cfg);
        if (scan->parsed()) run_scan(cfg);
        return 0;
    } catch (const QbError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace qbounce
