#pragma once

/**
 * @file figures.hpp
 * @brief Predefined study datasets: each id emits CSV data plus a JSON
 *        manifest sufficient to replot the corresponding panel.
 */

#include <filesystem>
#include <string>
#include <vector>

#include "analysis.hpp"

namespace simqg {

struct FigureOutput {
    std::vector<std::string> files;
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

inline std::string put(const std::filesystem::path& dir, const std::string& name,
                       const CsvTable& t) {
    const auto p = dir / name;
    write_csv(p, t);
    return p.string();
}

// Synthetic dimensionless recovery setup: given x and sigma-tilde, choose a
// wavevector that realizes x under standard gravity and a temperature that
// realizes sigma-tilde.
inline Config dimensionless_recovery_config(double x, double sigma_tilde, double zeta) {
    Config cfg;
    cfg.particle = ParticleSpec::from_radius(50e-9, presets::diamond_density);
    cfg.recoil.k = std::sqrt(constants::planck_mass * constants::g_std /
                             (x * constants::hbar * constants::c));
    cfg.environment.g_vec = Vec3{0.0, 0.0, constants::g_std};
    const double sigma = sigma_tilde * cfg.recoil.hk_mag();
    cfg.environment.temperature = sigma * sigma / (cfg.particle.mass * constants::k_B);
    cfg.environment.trap_freqs = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI};
    cfg.xi1 = 1.0;
    cfg.xi2 = 0.0;
    cfg.recovery.zeta = zeta;
    return cfg;
}

} // namespace detail

inline FigureOutput figure_frequency_budget(const std::filesystem::path& dir, Config cfg) {
    FigureOutput out;
    const DispersionParams d{1.0, 1.0}; // unit priors: curves show the scale
    CsvTable t;
    t.columns = {"radius_m", "mass_kg", "f_zero_Hz", "f_xi1_Hz", "f_xi2_Hz",
                 "max_split_m_at_100us"};
    for (double r : detail::log_grid(1e-9, 100e-9, 200)) {
        const auto p = ParticleSpec::from_radius(r, presets::diamond_density);
        const auto f = phase_frequency_contributions(p, cfg.recoil, d);
        t.rows.push_back({r, p.mass, f.f_zero, f.f_xi1, f.f_xi2,
                          max_path_splitting(p, cfg.recoil, 100e-6)});
    }
    out.files.push_back(detail::put(dir, "fig2_nanodiamond.csv", t));

    const auto cs = ParticleSpec::atom_preset("Cs");
    const auto fcs = phase_frequency_contributions(cs, cfg.recoil, d);
    CsvTable tc;
    tc.columns = {"mass_kg", "f_zero_Hz", "f_xi1_Hz", "f_xi2_Hz", "max_split_m_at_100us"};
    tc.rows.push_back(
        {cs.mass, fcs.f_zero, fcs.f_xi1, fcs.f_xi2, max_path_splitting(cs, cfg.recoil, 100e-6)});
    out.files.push_back(detail::put(dir, "fig2_cs.csv", tc));
    write_manifest(dir / "fig2_manifest.json", cfg, {{"figure", "2"}});
    out.files.push_back((dir / "fig2_manifest.json").string());
    return out;
}

inline FigureOutput figure_bounds(const std::filesystem::path& dir, Config cfg) {
    FigureOutput out;
    BoundInputs in; // nanodiamond defaults: N = 1000, T = 500 us
    CsvTable t;
    t.columns = {"radius_m",      "mass_kg",        "dxi1_shot_noise", "dxi1_laser_freq",
                 "dxi1_mass",     "dxi1_fine_struct", "dxi2_shot_noise", "dxi2_laser_freq",
                 "dxi2_mass",     "dxi2_fine_struct"};
    for (const auto& row :
         bound_sweep(detail::log_grid(1e-9, 100e-9, 200), in, cfg.recoil)) {
        t.rows.push_back({row.radius, row.mass, row.shot_noise.dxi1, row.laser_frequency.dxi1,
                          row.mass_precision.dxi1, row.fine_structure.dxi1,
                          row.shot_noise.dxi2, row.laser_frequency.dxi2,
                          row.mass_precision.dxi2, row.fine_structure.dxi2});
    }
    out.files.push_back(detail::put(dir, "fig3_nanodiamond.csv", t));

    const auto cs = ParticleSpec::atom_preset("Cs");
    const auto cin = cs_reference_inputs();
    CsvTable tc;
    tc.columns = {"mass_kg",      "dxi1_shot_noise", "dxi1_laser_freq", "dxi1_mass",
                  "dxi1_fine_struct", "dxi2_shot_noise", "dxi2_laser_freq", "dxi2_mass",
                  "dxi2_fine_struct"};
    const auto sn = shot_noise_bounds(cin, cs, cfg.recoil);
    const auto lf = laser_frequency_bounds(cin, cs, cfg.recoil);
    const auto mp = mass_precision_bounds(cin, cs, cfg.recoil);
    const auto fs = fine_structure_bounds(cin, cs, cfg.recoil);
    tc.rows.push_back({cs.mass, sn.dxi1, lf.dxi1, mp.dxi1, fs.dxi1, sn.dxi2, lf.dxi2, mp.dxi2,
                       fs.dxi2});
    out.files.push_back(detail::put(dir, "fig3_cs.csv", tc));
    write_manifest(dir / "fig3_manifest.json", cfg,
                   {{"figure", "3"},
                    {"nanodiamond", {{"N", in.repetitions}, {"T_s", in.T},
                                     {"delta_detuning_rad_s", in.delta_detuning}}},
                    {"cs", {{"N", cin.repetitions}, {"T_s", cin.T},
                            {"dm_over_m", cin.dm_over_m}}}});
    out.files.push_back((dir / "fig3_manifest.json").string());
    return out;
}

inline FigureOutput figure_phase_vs_momentum(const std::filesystem::path& dir, Config cfg) {
    FigureOutput out;
    const DispersionParams d{cfg.xi1, cfg.xi2};
    const double T = cfg.timing.T;
    CsvTable t;
    t.columns = {"p_over_hk", "phi_norm_parallel", "phi_norm_antiparallel",
                 "phi_norm_orthogonal"};
    for (int i = 0; i <= 500; ++i) {
        const double ptilde = 5.0 * i / 500.0;
        const double p = ptilde * cfg.recoil.hk_mag();
        t.rows.push_back(
            {ptilde,
             stability_phase_surface(p, p, StabilityGeometry::ParallelParallel, d,
                                     cfg.particle, cfg.recoil, T),
             stability_phase_surface(p, p, StabilityGeometry::AntiparallelAntiparallel, d,
                                     cfg.particle, cfg.recoil, T),
             stability_phase_surface(p, p, StabilityGeometry::Orthogonal, d, cfg.particle,
                                     cfg.recoil, T)});
    }
    out.files.push_back(detail::put(dir, "fig4a_phase_suppression.csv", t));
    write_manifest(dir / "fig4a_manifest.json", cfg, {{"figure", "4a"}});
    out.files.push_back((dir / "fig4a_manifest.json").string());
    return out;
}

inline FigureOutput figure_frequency_distribution(const std::filesystem::path& dir,
                                                  Config cfg) {
    FigureOutput out;
    CsvTable t;
    t.columns = {"x", "density_sigma_0p1", "density_sigma_1", "density_sigma_10"};
    std::vector<FrequencyDistribution> dists;
    for (double st : {0.1, 1.0, 10.0}) {
        ThermalState s;
        const double hk = cfg.recoil.hk_mag();
        s.sigma_p2 = {0.0, 0.0, st * st * hk * hk};
        dists.push_back(
            frequency_distribution(s, cfg.recoil, RecoilOrientation::Perpendicular));
    }
    for (std::size_t b = 0; b < dists[0].x.size(); ++b)
        t.rows.push_back(
            {dists[0].x[b], dists[0].density[b], dists[1].density[b], dists[2].density[b]});
    out.files.push_back(detail::put(dir, "fig4b_frequency_distribution.csv", t));
    write_manifest(dir / "fig4b_manifest.json", cfg,
                   {{"figure", "4b"}, {"sigma_tilde", {0.1, 1.0, 10.0}}});
    out.files.push_back((dir / "fig4b_manifest.json").string());
    return out;
}

/// Dimensionless recovery demonstration (x = 5, sigma-tilde = 100, zeta = 5).
inline FigureOutput figure_recovery_dimensionless(const std::filesystem::path& dir,
                                                  Config base) {
    FigureOutput out;
    const double x = 5.0, sigma_tilde = 100.0, zeta = 5.0;
    Config cfg = detail::dimensionless_recovery_config(x, sigma_tilde, zeta);
    cfg.numerics = base.numerics;
    const DispersionParams d{cfg.xi1, cfg.xi2};
    const double mu_hk = d.mu(cfg.particle) * cfg.recoil.hk_mag();

    std::vector<double> T_grid;
    const int n = 240;
    for (int i = 1; i <= n; ++i)
        T_grid.push_back((4.0 * M_PI * i / n) / (2.0 * mu_hk));

    const auto rec = simulate_recovery(cfg.particle, d, cfg.recoil, cfg.environment, T_grid,
                                       cfg.numerics, RecoveryMode::Xi1Only, zeta, true);
    // non-adjusted references: tau = 0, p0 = 0, gravity parallel / orthogonal
    EnvironmentSpec env_perp = cfg.environment;
    env_perp.g_vec = Vec3{cfg.environment.g_vec.norm(), 0.0, 0.0};
    const auto sup_par =
        simulate_recovery(cfg.particle, d, cfg.recoil, cfg.environment, T_grid, cfg.numerics,
                          RecoveryMode::Xi1Only, zeta, false);
    const auto sup_perp =
        simulate_recovery(cfg.particle, d, cfg.recoil, env_perp, T_grid, cfg.numerics,
                          RecoveryMode::Xi1Only, zeta, false);

    CsvTable t;
    t.columns = {"T_tilde",          "p_recovery",   "envelope_recovery",
                 "p_optimal",        "p_normal_gpar", "p_normal_gperp",
                 "p10_z_over_hk",    "tau_s"};
    for (std::size_t i = 0; i < T_grid.size(); ++i) {
        const double T_tilde = 2.0 * mu_hk * T_grid[i];
        t.rows.push_back({T_tilde, rec.population[i], rec.envelope[i],
                          0.125 * (1.0 + std::cos(T_tilde)), sup_par.population[i],
                          sup_perp.population[i], rec.p10_z[i] / cfg.recoil.hk_mag(),
                          rec.tau[i]});
    }
    out.files.push_back(detail::put(dir, "fig5c_recovery.csv", t));
    write_manifest(dir / "fig5c_manifest.json", cfg,
                   {{"figure", "5c"}, {"x", x}, {"sigma_tilde", sigma_tilde}, {"zeta", zeta}});
    out.files.push_back((dir / "fig5c_manifest.json").string());
    return out;
}

/// Overdamped gravitational suppression: phase and fringe vs T-tilde.
inline FigureOutput figure_gravity_suppression(const std::filesystem::path& dir, Config base) {
    FigureOutput out;
    CsvTable t;
    t.columns = {"T_tilde",     "phi_x_0p5",  "phi_x_1",    "phi_x_5",
                 "pg_x_0p5",    "pg_x_1",     "pg_x_5",     "phi_overdamped_x_5"};
    const double sigma_tilde = 0.0, zeta = 1.0;
    std::vector<Config> cfgs;
    for (double x : {0.5, 1.0, 5.0}) {
        Config c = detail::dimensionless_recovery_config(x, 1e-6, zeta);
        c.environment.temperature = 0.0;
        c.environment.g_vec = Vec3{c.environment.g_vec.norm(), 0.0, 0.0}; // orthogonal
        c.numerics = base.numerics;
        cfgs.push_back(c);
    }
    (void)sigma_tilde;
    const int n = 200;
    for (int i = 1; i <= n; ++i) {
        const double T_tilde = 12.0 * i / n;
        std::vector<double> phis, pgs;
        for (auto& c : cfgs) {
            const DispersionParams d{c.xi1, c.xi2};
            const double mu_hk = d.mu(c.particle) * c.recoil.hk_mag();
            const double T = T_tilde / (2.0 * mu_hk);
            TimingSpec timing;
            timing.T = T;
            const auto c1 = MomentumSchedule::free_fall(
                Vec3::zero(), c.environment.g_vec, c.particle.mass, 0.0, T);
            const auto c2 = MomentumSchedule::free_fall(
                Vec3::zero() - c.environment.g_vec * (c.particle.mass * T), c.environment.g_vec,
                c.particle.mass, T, 2.0 * T);
            const double phi = xi1_phase(c1, c2, d, c.particle, c.recoil, 1e-12, 1e-9);
            phis.push_back(phi);
            pgs.push_back(0.125 * (1.0 + std::cos(phi)));
        }
        t.rows.push_back({T_tilde, phis[0], phis[1], phis[2], pgs[0], pgs[1], pgs[2],
                          gravity_overdamped_phase(5.0, T_tilde)});
    }
    out.files.push_back(detail::put(dir, "fig6a_gravity_suppression.csv", t));
    write_manifest(dir / "fig6a_manifest.json", base, {{"figure", "6a"}});
    out.files.push_back((dir / "fig6a_manifest.json").string());
    return out;
}

/// Eight-path table: momentum gains, separations and phase parts relative to
/// the second path from below (the all-ground path).
inline FigureOutput figure_path_table(const std::filesystem::path& dir, Config cfg) {
    FigureOutput out;
    const DispersionParams d{cfg.xi1, cfg.xi2};
    TimingSpec timing = cfg.timing;
    const auto paths = enumerate_paths(4, InternalState::Ground, cfg.recoil, timing);

    // stability drive if gravity is present along the recoil, otherwise plain
    Drive drive = Drive::free_fall(cfg.state.p0, cfg.environment.g_vec, cfg.particle.mass,
                                   timing);
    if (cfg.environment.g_vec.dot(cfg.recoil.direction) > 0.0) {
        const auto des = design_recovery(cfg.particle, d, cfg.recoil, timing.T,
                                         cfg.environment, cfg.recovery.zeta);
        timing.tau = des.tau;
        drive = Drive::free_fall(des.p10, cfg.environment.g_vec, cfg.particle.mass, timing);
    }

    const Path* ref = nullptr; // all-ground path
    for (const auto& p : paths)
        if (p.k_inv == 0) ref = &p;

    const double seg_len[3] = {timing.T, timing.tau, timing.T};
    struct Row {
        double zrel;
        std::vector<double> cells;
    };
    std::vector<Row> rows;
    for (const auto& p : paths) {
        double dz = 0.0;
        for (int s = 0; s < 3; ++s)
            dz += (p.segment_kicks[s] - ref->segment_kicks[s]) * seg_len[s];
        dz *= cfg.recoil.hk_mag() / cfg.particle.mass;
        const PairPhaseDiff quad_only(p, *ref, Vec3::zero(), cfg.particle, d, cfg.recoil,
                                      timing, drive, true, false, true);
        const PairPhaseDiff xi1_only(p, *ref, Vec3::zero(), cfg.particle, d, cfg.recoil,
                                     timing, drive, false, true, false);
        const double bits = p.transitions[0] * 1000 + p.transitions[1] * 100 +
                            p.transitions[2] * 10 + p.transitions[3];
        rows.push_back(Row{dz,
                           {bits, static_cast<double>(p.k_inv), p.eta().real(),
                            p.eta().imag(), static_cast<double>(p.p_f_units), dz,
                            quad_only(Vec3::zero()), xi1_only(Vec3::zero())}});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.zrel < b.zrel;
    });

    CsvTable t;
    t.columns = {"pulse_bits", "inversions", "eta_re",        "eta_im",
                 "p_f_hk",     "z_f_rel_m",  "phi0_rel_rad",  "phi_xi1_rel_rad"};
    for (const auto& r : rows) t.rows.push_back(r.cells);
    out.files.push_back(detail::put(dir, "fig6_path_table.csv", t));
    write_manifest(dir / "fig6_manifest.json", cfg, {{"figure", "6-table"}});
    out.files.push_back((dir / "fig6_manifest.json").string());
    return out;
}

/// 50 nm recovery at 1 mK with the gravitational inversion design.
inline FigureOutput figure_recovery_50nm(const std::filesystem::path& dir, Config base) {
    FigureOutput out;
    Config cfg = base;
    cfg.particle = ParticleSpec::from_radius(50e-9, presets::diamond_density);
    cfg.recoil.k = presets::k_raman_637;
    cfg.recoil.direction = Vec3::unit_z();
    cfg.environment.temperature = 1e-3;
    cfg.environment.trap_freqs = {2.0 * M_PI * 165e3, 2.0 * M_PI * 165e3, 2.0 * M_PI * 165e3};
    cfg.environment.g_vec = Vec3{0.0, 0.0, constants::g_std};
    cfg.xi1 = 1.0;
    cfg.xi2 = 0.0;
    const DispersionParams d{cfg.xi1, cfg.xi2};
    const double zeta = cfg.recovery.zeta;

    std::vector<double> T_grid;
    for (int i = 1; i <= 200; ++i) T_grid.push_back(200e-6 * i / 200.0);

    const auto full = simulate_recovery(cfg.particle, d, cfg.recoil, cfg.environment, T_grid,
                                        cfg.numerics, RecoveryMode::WithZeroOrder, zeta, true);
    const auto qg = simulate_recovery(cfg.particle, d, cfg.recoil, cfg.environment, T_grid,
                                      cfg.numerics, RecoveryMode::Xi1Only, zeta, true);
    const DispersionParams d0{0.0, 0.0};
    const auto zero = simulate_recovery(cfg.particle, d0, cfg.recoil, cfg.environment, T_grid,
                                        cfg.numerics, RecoveryMode::WithZeroOrder, zeta, true);
    EnvironmentSpec env_perp = cfg.environment;
    env_perp.g_vec = Vec3{constants::g_std, 0.0, 0.0};
    const auto sup_par = simulate_recovery(cfg.particle, d, cfg.recoil, cfg.environment,
                                           T_grid, cfg.numerics, RecoveryMode::Xi1Only, zeta,
                                           false);
    const auto sup_perp = simulate_recovery(cfg.particle, d, cfg.recoil, env_perp, T_grid,
                                            cfg.numerics, RecoveryMode::Xi1Only, zeta, false);

    const double mu_hk = d.mu(cfg.particle) * cfg.recoil.hk_mag();
    CsvTable t;
    t.columns = {"T_s",          "p_full",        "p_xi1",     "p_zero_order",
                 "p_optimal_xi1", "p_suppressed_gpar", "p_suppressed_gperp",
                 "launch_velocity_m_s"};
    for (std::size_t i = 0; i < T_grid.size(); ++i) {
        t.rows.push_back({T_grid[i], full.population[i], qg.population[i], zero.population[i],
                          0.125 * (1.0 + std::cos(2.0 * mu_hk * T_grid[i])),
                          sup_par.population[i], sup_perp.population[i],
                          full.p10_z[i] / cfg.particle.mass});
    }
    out.files.push_back(detail::put(dir, "fig7_recovery_50nm.csv", t));
    write_manifest(dir / "fig7_manifest.json", cfg, {{"figure", "7"}, {"zeta", zeta}});
    out.files.push_back((dir / "fig7_manifest.json").string());
    return out;
}

/// Multi-path interference traces and spectra.
inline FigureOutput figure_multipath(const std::filesystem::path& dir, Config base) {
    FigureOutput out;
    auto make_cfg = [&](double radius) {
        Config c = base;
        c.particle = ParticleSpec::from_radius(radius, presets::diamond_density);
        c.recoil.k = presets::k_raman_637;
        c.recoil.direction = Vec3::unit_z();
        c.environment.temperature = 1e-3;
        c.environment.trap_freqs = {2.0 * M_PI * 165e3, 2.0 * M_PI * 165e3,
                                    2.0 * M_PI * 165e3};
        c.environment.g_vec = Vec3::zero();
        c.timing.tau = 0.0;
        c.xi1 = 1.0;
        c.xi2 = 0.0;
        return c;
    };

    auto emit = [&](const char* tag, const Trace& tr) {
        out.files.push_back(detail::put(dir, std::string("fig9_trace_") + tag + ".csv",
                                        trace_to_table(tr)));
        out.files.push_back(detail::put(dir, std::string("fig9_spectrum_") + tag + ".csv",
                                        spectrum_to_table(spectrum(tr))));
    };

    // (i) both closed pairs, 10 nm, stability inversion
    {
        Config c = make_cfg(10e-9);
        const DispersionParams d{c.xi1, c.xi2};
        const auto st = thermal_state(c.particle, c.environment);
        c.state.p0 = Vec3{0.0, 0.0, 20.0 * std::sqrt(2.0 * st.sigma_p2.z)};
        const double f = d.mu(c.particle) * c.recoil.hk_mag() / M_PI; // 2 mu hk / 2pi
        emit("i", interference_trace(c, fringe_grid(f), TraceMode::ClosedPairsQG,
                                     DriveKind::SymmetricInversion));
        // (ii) single closed pair, same configuration
        emit("ii", interference_trace(c, fringe_grid(f), TraceMode::SinglePairQG,
                                      DriveKind::SymmetricInversion));
    }
    // (iii) all paths, perfect overlap, 50 nm
    {
        Config c = make_cfg(50e-9);
        const DispersionParams d{c.xi1, c.xi2};
        const auto st = thermal_state(c.particle, c.environment);
        c.state.p0 = Vec3{0.0, 0.0, 20.0 * std::sqrt(2.0 * st.sigma_p2.z)};
        const double f = d.mu(c.particle) * c.recoil.hk_mag() / M_PI;
        emit("iii", interference_trace(c, fringe_grid(f), TraceMode::AllPathsIdealQG,
                                       DriveKind::SymmetricInversion));
        // (iv) all paths, full phase, gravitational recovery design
        Config c4 = c;
        c4.environment.g_vec = Vec3{0.0, 0.0, constants::g_std};
        emit("iv", interference_trace(c4, fringe_grid(f), TraceMode::AllPaths,
                                      DriveKind::Designed));
    }
    write_manifest(dir / "fig9_manifest.json", base, {{"figure", "9"}});
    out.files.push_back((dir / "fig9_manifest.json").string());
    return out;
}

/// Collisional and pulse-error visibilities.
inline FigureOutput figure_noise(const std::filesystem::path& dir, Config base) {
    FigureOutput out;
    // (a) collisional visibility vs pressure for several radii
    {
        CsvTable t;
        t.columns = {"pressure_Pa", "V_r_5nm", "V_r_10nm", "V_r_50nm", "V_r_100nm"};
        GasSpec gas = base.environment.gas;
        gas.temperature = 10.0;
        RecoilSpec rec;
        rec.k = 2e7;
        const double T = 100e-6; // total time 2T = 200 us
        for (double P : detail::log_grid(1e-12, 1.0, 200)) {
            gas.pressure = P;
            std::vector<double> row{P};
            for (double r : {5e-9, 10e-9, 50e-9, 100e-9}) {
                const auto p = ParticleSpec::from_radius(r, presets::diamond_density);
                const double dz = rec.hk_mag() / p.mass * T;
                row.push_back(collisional_visibility(gas, r, dz, 2.0 * T));
            }
            t.rows.push_back(row);
        }
        out.files.push_back(detail::put(dir, "fig10a_collisional.csv", t));
    }
    // (b) time and pulse errors vs thermal velocity spread
    {
        CsvTable t;
        t.columns = {"sigma_v_m_s", "V_time_error", "V_doppler_pulse"};
        RecoilSpec rec;
        rec.k = 2e7;
        for (double sv : detail::log_grid(1e-7, 10.0, 200)) {
            t.rows.push_back({sv, time_error_visibility(sv, rec, 10e-9),
                              doppler_pulse_visibility(sv, rec, 2.0 * M_PI * 10e6)});
        }
        out.files.push_back(detail::put(dir, "fig10b_pulse_errors.csv", t));
    }
    write_manifest(dir / "fig10_manifest.json", base,
                   {{"figure", "10"},
                    {"gas_temperature_K", 10.0},
                    {"dT_s", 10e-9},
                    {"rabi_rad_s", 2.0 * M_PI * 10e6}});
    out.files.push_back((dir / "fig10_manifest.json").string());
    return out;
}

/// Thermal-variance and coherence-time table across particles and temperatures.
inline FigureOutput figure_table2(const std::filesystem::path& dir, Config base) {
    FigureOutput out;
    RecoilSpec rec;
    rec.k = presets::k_raman_637;
    const DispersionParams d{1.0, 0.0};
    CsvTable t;
    t.columns = {"particle", "temperature_K", "sigma_tilde", "T2_s"};

    struct Entry {
        const char* name;
        ParticleSpec p;
    };
    const Entry entries[] = {{"r5nm", ParticleSpec::from_radius(5e-9, presets::diamond_density)},
                             {"r50nm", ParticleSpec::from_radius(50e-9, presets::diamond_density)},
                             {"Cs", ParticleSpec::atom_preset("Cs")}};
    int idx = 0;
    for (const auto& e : entries) {
        ++idx;
        for (double temp : {0.0, 4e-6, 1e-3, 10.0}) {
            EnvironmentSpec env;
            env.temperature = temp;
            env.trap_freqs = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI}; // 1 Hz trap
            const auto st = thermal_state(e.p, env);
            const double sigma_tilde = std::sqrt(st.sigma_p2.z) / rec.hk_mag();
            const double mu_hk = d.mu(e.p) * rec.hk_mag();
            const double guess = (sigma_tilde + 1.0 / sigma_tilde) / mu_hk;
            EnvironmentSpec free_env;
            const auto res = find_t2(st, e.p, d, rec, free_env, base.numerics, guess);
            t.rows.push_back({static_cast<double>(idx), temp, sigma_tilde,
                              res.crossed ? res.T2 : -res.T2});
        }
    }
    out.files.push_back(detail::put(dir, "table2_sigma_T2.csv", t));
    write_manifest(dir / "table2_manifest.json", base,
                   {{"figure", "table2"},
                    {"particles", {"r5nm", "r50nm", "Cs"}},
                    {"temperatures_K", {0.0, 4e-6, 1e-3, 10.0}},
                    {"note", "T2 is the 1/e crossing of the ensemble fringe envelope; "
                             "negative values flag a lower bound (no crossing on the grid)"}});
    out.files.push_back((dir / "table2_manifest.json").string());
    return out;
}

/// Dispatch by figure id.
inline FigureOutput reproduce_figure(const std::string& id, const Config& cfg,
                                     const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    if (id == "2") return figure_frequency_budget(outdir, cfg);
    if (id == "3") return figure_bounds(outdir, cfg);
    if (id == "4a") return figure_phase_vs_momentum(outdir, cfg);
    if (id == "4b") return figure_frequency_distribution(outdir, cfg);
    if (id == "5c") return figure_recovery_dimensionless(outdir, cfg);
    if (id == "6a") return figure_gravity_suppression(outdir, cfg);
    if (id == "6-table") return figure_path_table(outdir, cfg);
    if (id == "7") return figure_recovery_50nm(outdir, cfg);
    if (id == "9") return figure_multipath(outdir, cfg);
    if (id == "10") return figure_noise(outdir, cfg);
    if (id == "table2") return figure_table2(outdir, cfg);
    throw ConfigError("unknown figure id: " + id +
                      " (supported: 2, 3, 4a, 4b, 5c, 6a, 6-table, 7, 9, 10, table2)");
}

} // namespace simqg
