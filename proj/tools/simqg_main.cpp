// simqg — Ramsey-Borde interferometry with Planck-scale-modified dispersion.
//
// Subcommands: run, phase, paths, trace, spectrum, bounds, recover, noise, fig.
// Exit codes: 0 success, 2 configuration error, 3 numeric-convergence failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "simqg/analysis.hpp"
#include "simqg/figures.hpp"

using namespace simqg;
namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int quadrature_order = 0;
    long mc_samples = 0;
};

Config load_effective_config(const GlobalOpts& g) {
    Config cfg;
    if (!g.config_path.empty()) cfg = load_config(g.config_path);
    if (g.seed != 0) cfg.numerics.seed = g.seed;
    if (g.quadrature_order > 0) cfg.numerics.quadrature_order = g.quadrature_order;
    if (g.mc_samples > 0) cfg.numerics.mc_samples = g.mc_samples;
    return cfg;
}

std::vector<double> build_grid(const Config& cfg, double tmin, double tmax, int points,
                               int periods, int per_period) {
    if (tmax > 0.0) {
        std::vector<double> grid(points);
        for (int i = 0; i < points; ++i)
            grid[i] = tmin + (tmax - tmin) * i / std::max(points - 1, 1);
        return grid;
    }
    const DispersionParams d{cfg.xi1, cfg.xi2};
    double f = d.mu(cfg.particle) * cfg.recoil.hk_mag() / M_PI; // 2 mu hbar k / 2 pi
    if (f <= 0.0)
        f = constants::hbar * cfg.recoil.k * cfg.recoil.k / (2.0 * M_PI * cfg.particle.mass);
    return fringe_grid(f, periods, per_period);
}

void print_phase_report(const Config& cfg) {
    const DispersionParams d{cfg.xi1, cfg.xi2};
    const auto pr = closed_pair_phase(cfg.state.p0, cfg.particle, d, cfg.recoil, cfg.timing,
                                      cfg.laser, cfg.environment,
                                      cfg.numerics.quad_abs_tol, cfg.numerics.quad_rel_tol);
    const auto groups = dimensionless_groups(cfg.particle, cfg.recoil, cfg.timing,
                                             cfg.environment, d);
    std::printf("closed-pair interferometer phase [rad]\n");
    std::printf("  total       % .12e\n", pr.total);
    std::printf("  zero order  % .12e\n", pr.zero_order);
    std::printf("  gravity     % .12e\n", pr.gravity);
    std::printf("  xi1         % .12e\n", pr.xi1);
    std::printf("  xi2         % .12e\n", pr.xi2);
    std::printf("  laser       % .12e\n", pr.laser);
    std::printf("dimensionless groups\n");
    std::printf("  x           % .6e\n", groups.x);
    std::printf("  sigma~      % .6e\n", groups.sigma_tilde);
    std::printf("  T~          % .6e\n", groups.T_tilde);
    std::printf("  chi_grav~   % .6e\n", groups.chi_grav_tilde);
}

void print_bounds_report(const Config& cfg) {
    BoundInputs in;
    const RecoilSpec rec = cfg.recoil;
    struct Row {
        const char* name;
        BoundPair nano;
        BoundPair cs;
    };
    const auto nano = cfg.particle;
    const auto cs = ParticleSpec::atom_preset("Cs");
    const auto cin = cs_reference_inputs();
    const Row rows[] = {
        {"shot noise", shot_noise_bounds(in, nano, rec), shot_noise_bounds(cin, cs, rec)},
        {"laser frequency", laser_frequency_bounds(in, nano, rec),
         laser_frequency_bounds(cin, cs, rec)},
        {"mass precision", mass_precision_bounds(in, nano, rec),
         mass_precision_bounds(cin, cs, rec)},
        {"fine structure", fine_structure_bounds(in, nano, rec),
         fine_structure_bounds(cin, cs, rec)},
    };
    std::printf("imprecision bounds (N=%.0f, T=%.0f us | Cs: N=%.0e, T=%.0f ms)\n",
                in.repetitions, in.T * 1e6, cin.repetitions, cin.T * 1e3);
    std::printf("%-18s %12s %12s %12s %12s\n", "source", "dxi1", "dxi2", "dxi1(Cs)",
                "dxi2(Cs)");
    for (const auto& r : rows)
        std::printf("%-18s %12.4e %12.4e %12.4e %12.4e\n", r.name, r.nano.dxi1, r.nano.dxi2,
                    r.cs.dxi1, r.cs.dxi2);
    const auto prior = prior_work_xi2_bounds();
    std::printf("prior-work xi2 anchors: Cs %.3e, Rb %.3e\n", prior.cs_xi2, prior.rb_xi2);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ramsey-Borde interferometry with modified energy dispersion"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON configuration file");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "override numerics.seed");
    app.add_option("--quadrature-order", g.quadrature_order, "Gauss-Hermite order per axis");
    app.add_option("--mc-samples", g.mc_samples, "Monte-Carlo sample count");

    auto* cmd_run = app.add_subcommand("run", "trace + spectrum + phase report");
    auto* cmd_phase = app.add_subcommand("phase", "closed-pair phase components");
    auto* cmd_paths = app.add_subcommand("paths", "eight-path table as CSV");
    auto* cmd_trace = app.add_subcommand("trace", "population trace as CSV");
    auto* cmd_spec = app.add_subcommand("spectrum", "trace + DFT spectrum as CSV");
    auto* cmd_bounds = app.add_subcommand("bounds", "imprecision-bound report and sweep");
    auto* cmd_recover = app.add_subcommand("recover", "momentum-inversion recovery trace");
    auto* cmd_noise = app.add_subcommand("noise", "visibility-loss sweeps");
    auto* cmd_fig = app.add_subcommand("fig", "emit a predefined study dataset");

    std::string mode_name = "closed-pairs";
    std::string drive_name = "free-fall";
    double tmin = 1e-6, tmax = 0.0;
    int points = 256, periods = 25, per_period = 64;
    for (auto* c : {cmd_run, cmd_trace, cmd_spec}) {
        c->add_option("--mode", mode_name, "trace mode");
        c->add_option("--drive", drive_name, "free-fall | designed | inversion");
        c->add_option("--tmin", tmin, "grid start [s]");
        c->add_option("--tmax", tmax, "grid end [s] (0: auto fringe grid)");
        c->add_option("--points", points, "grid points (with --tmax)");
        c->add_option("--periods", periods, "fringe periods (auto grid)");
        c->add_option("--per-period", per_period, "samples per period (auto grid)");
    }
    std::string window_name = "rectangular";
    cmd_spec->add_option("--window", window_name, "rectangular | hann");

    std::string rec_mode = "xi1-only";
    double rec_tmax = 200e-6;
    int rec_points = 200;
    cmd_recover->add_option("--mode", rec_mode,
                            "xi1-only | with-zero-order | closed-paths | all-paths");
    cmd_recover->add_option("--tmax", rec_tmax, "grid end [s]");
    cmd_recover->add_option("--points", rec_points, "grid points");

    std::string fig_id;
    cmd_fig->add_option("--id", fig_id, "2 | 3 | 4a | 4b | 5c | 6a | 6-table | 7 | 9 | 10 | table2")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const Config cfg = load_effective_config(g);
        const fs::path out = g.out_dir;

        if (cmd_phase->parsed()) {
            print_phase_report(cfg);
            return 0;
        }
        if (cmd_bounds->parsed()) {
            print_bounds_report(cfg);
            fs::create_directories(out);
            figure_bounds(out, cfg);
            std::printf("sweep written to %s\n", out.string().c_str());
            return 0;
        }
        if (cmd_paths->parsed()) {
            fs::create_directories(out);
            const auto files = figure_path_table(out, cfg);
            for (const auto& f : files.files) std::printf("%s\n", f.c_str());
            return 0;
        }
        if (cmd_noise->parsed()) {
            fs::create_directories(out);
            const auto files = figure_noise(out, cfg);
            for (const auto& f : files.files) std::printf("%s\n", f.c_str());
            return 0;
        }
        if (cmd_fig->parsed()) {
            const auto files = reproduce_figure(fig_id, cfg, out);
            for (const auto& f : files.files) std::printf("%s\n", f.c_str());
            return 0;
        }
        if (cmd_recover->parsed()) {
            fs::create_directories(out);
            const DispersionParams d{cfg.xi1, cfg.xi2};
            RecoveryMode m = RecoveryMode::Xi1Only;
            if (rec_mode == "with-zero-order") m = RecoveryMode::WithZeroOrder;
            else if (rec_mode == "closed-paths") m = RecoveryMode::ClosedPaths;
            else if (rec_mode == "all-paths") m = RecoveryMode::AllPaths;
            else if (rec_mode != "xi1-only") throw ConfigError("unknown recover mode " + rec_mode);
            std::vector<double> grid(rec_points);
            for (int i = 0; i < rec_points; ++i) grid[i] = rec_tmax * (i + 1) / rec_points;
            const auto tr = simulate_recovery(cfg.particle, d, cfg.recoil, cfg.environment,
                                              grid, cfg.numerics, m, cfg.recovery.zeta, true);
            CsvTable t;
            t.columns = {"T_s", "population", "envelope", "p10_z_kg_m_s", "tau_s"};
            for (std::size_t i = 0; i < grid.size(); ++i)
                t.rows.push_back({tr.T[i], tr.population[i], tr.envelope[i], tr.p10_z[i],
                                  tr.tau[i]});
            write_csv(out / "recover_trace.csv", t);
            const auto des = design_recovery(cfg.particle, d, cfg.recoil, rec_tmax,
                                             cfg.environment, cfg.recovery.zeta);
            const auto groups = dimensionless_groups(cfg.particle, cfg.recoil, cfg.timing,
                                                     cfg.environment, d);
            write_manifest(out / "recover_manifest.json", cfg,
                           {{"mode", rec_mode},
                            {"design_at_tmax",
                             {{"p10_z_kg_m_s", des.p10.z},
                              {"tau_s", des.tau},
                              {"zeta", des.zeta},
                              {"sigma_exceeds_gravity", des.sigma_exceeds_gravity}}},
                            {"groups",
                             {{"x", groups.x},
                              {"sigma_tilde", groups.sigma_tilde},
                              {"T_tilde", groups.T_tilde},
                              {"chi_grav_tilde", groups.chi_grav_tilde}}}});
            std::printf("recover: p10_z=%.6e kg m/s, tau=%.6e s, warn_sigma=%d -> %s\n",
                        des.p10.z, des.tau, des.sigma_exceeds_gravity ? 1 : 0,
                        (out / "recover_trace.csv").string().c_str());
            return 0;
        }

        // run / trace / spectrum share the trace pipeline
        const TraceMode mode = trace_mode_from_name(mode_name);
        DriveKind drive = DriveKind::FreeFall;
        if (drive_name == "designed") drive = DriveKind::Designed;
        else if (drive_name == "inversion") drive = DriveKind::SymmetricInversion;
        else if (drive_name != "free-fall") throw ConfigError("unknown drive " + drive_name);

        const auto grid = build_grid(cfg, tmin, tmax, points, periods, per_period);
        const auto tr = interference_trace(cfg, grid, mode, drive);
        fs::create_directories(out);
        write_csv(out / "trace.csv", trace_to_table(tr));
        write_manifest(out / "trace_manifest.json", cfg,
                       {{"mode", tr.mode}, {"drive", tr.drive}});
        std::printf("trace: %zu points -> %s\n", tr.T.size(),
                    (out / "trace.csv").string().c_str());

        if (cmd_spec->parsed() || cmd_run->parsed()) {
            Window w = Window::Rectangular;
            if (window_name == "hann") w = Window::Hann;
            else if (window_name != "rectangular")
                throw ConfigError("unknown window " + window_name);
            const auto sp = spectrum(tr, w);
            write_csv(out / "spectrum.csv", spectrum_to_table(sp));
            std::printf("spectrum: %zu bins -> %s\n", sp.freq.size(),
                        (out / "spectrum.csv").string().c_str());
        }
        if (cmd_run->parsed()) print_phase_report(cfg);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "numeric error: %s (achieved %.6e +- %.2e)\n", e.what(), e.value,
                     e.error);
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
