#pragma once

/**
 * @file analysis.hpp
 * @brief Interference traces over cycle-time grids, discrete Fourier spectra,
 *        CSV/manifest output and the predefined study datasets.
 */

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "config.hpp"
#include "noise.hpp"
#include "parallel.hpp"
#include "paths.hpp"
#include "stability.hpp"
#include "thermal.hpp"

namespace simqg {

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

enum class TraceMode {
    ClosedPairs,        ///< both closed pairs, full phase
    ClosedPairsQG,      ///< both closed pairs, dispersion-correction phase only
    SinglePair,         ///< lower closed pair, full phase
    SinglePairQG,
    AllPaths,           ///< 28-pair sum, full phase
    AllPathsQG,
    AllPathsIdealQG,    ///< 28-pair sum, QG phase, perfect state overlap
    OrthogonalClosedForm,   ///< analytic closed-pair form of the orthogonal scheme
    OrthogonalClosedFormQG
};

inline const char* trace_mode_name(TraceMode m) {
    switch (m) {
    case TraceMode::ClosedPairs: return "closed-pairs";
    case TraceMode::ClosedPairsQG: return "closed-pairs-qg";
    case TraceMode::SinglePair: return "single-pair";
    case TraceMode::SinglePairQG: return "single-pair-qg";
    case TraceMode::AllPaths: return "all-paths";
    case TraceMode::AllPathsQG: return "all-paths-qg";
    case TraceMode::AllPathsIdealQG: return "all-paths-ideal-qg";
    case TraceMode::OrthogonalClosedForm: return "orthogonal";
    case TraceMode::OrthogonalClosedFormQG: return "orthogonal-qg";
    }
    return "?";
}

inline TraceMode trace_mode_from_name(const std::string& s) {
    for (TraceMode m : {TraceMode::ClosedPairs, TraceMode::ClosedPairsQG,
                        TraceMode::SinglePair, TraceMode::SinglePairQG, TraceMode::AllPaths,
                        TraceMode::AllPathsQG, TraceMode::AllPathsIdealQG,
                        TraceMode::OrthogonalClosedForm, TraceMode::OrthogonalClosedFormQG})
        if (s == trace_mode_name(m)) return m;
    throw ConfigError("unknown trace mode: " + s);
}

/// How the mean momentum evolves during the sequence.
enum class DriveKind {
    FreeFall,           ///< p(t) = p0 − m g t from the configured state
    Designed,           ///< per-T gravitational recovery design (zeta from config)
    SymmetricInversion  ///< p0 in cycle 1, −p0 in cycle 2, linear flip in the gap
};

struct Trace {
    std::vector<double> T;   ///< cycle times [s], strictly increasing
    std::vector<double> pg;  ///< population
    std::string mode;
    std::string drive;
    std::string config_digest;
    std::uint64_t seed = 0;
};

namespace detail {

inline PopulationMode population_mode_for(TraceMode m) {
    PopulationMode pm;
    switch (m) {
    case TraceMode::ClosedPairsQG:
    case TraceMode::SinglePairQG:
    case TraceMode::AllPathsQG:
    case TraceMode::OrthogonalClosedFormQG:
        pm.include_kinetic = false;
        break;
    case TraceMode::AllPathsIdealQG:
        pm.include_kinetic = false;
        pm.ideal_overlap = true;
        break;
    default:
        break;
    }
    return pm;
}

} // namespace detail

/**
 * Population vs cycle time T. Deterministic given the config (the seed only
 * tags the metadata; all deterministic-rule integrals are seed free).
 */
inline Trace interference_trace(const Config& cfg, const std::vector<double>& T_grid,
                                TraceMode mode, DriveKind drive_kind = DriveKind::FreeFall) {
    cfg.validate();
    for (std::size_t i = 1; i < T_grid.size(); ++i)
        if (T_grid[i] <= T_grid[i - 1])
            throw DomainError("interference_trace: T grid must be strictly increasing");

    Trace tr;
    tr.T = T_grid;
    tr.pg.assign(T_grid.size(), 0.0);
    tr.mode = trace_mode_name(mode);
    tr.config_digest = config_digest(cfg);
    tr.seed = cfg.numerics.seed;
    tr.drive = drive_kind == DriveKind::FreeFall
                   ? "free-fall"
                   : (drive_kind == DriveKind::Designed ? "designed" : "inversion");

    const DispersionParams params{cfg.xi1, cfg.xi2};
    const PopulationMode pmode = detail::population_mode_for(mode);
    const auto base_state = thermal_state(cfg.particle, cfg.environment);

    parallel_for(T_grid.size(), [&](std::size_t idx) {
        TimingSpec timing;
        timing.T = std::max(T_grid[idx], 1e-30);
        timing.tau = cfg.timing.tau;

        if (mode == TraceMode::OrthogonalClosedForm ||
            mode == TraceMode::OrthogonalClosedFormQG) {
            const auto ph = closed_pair_phases_analytic(cfg.particle, params, cfg.recoil,
                                                        timing, Vec3::zero(), Vec3::zero(),
                                                        pmode, /*orthogonal=*/true);
            tr.pg[idx] = closed_paths_population(ph.lower, ph.upper);
            return;
        }

        Vec3 p10 = cfg.state.p0;
        Drive drive = Drive::free_fall(p10, cfg.environment.g_vec, cfg.particle.mass, timing);
        if (drive_kind == DriveKind::Designed) {
            const auto d = design_recovery(cfg.particle, params, cfg.recoil, timing.T,
                                           cfg.environment, cfg.recovery.zeta);
            p10 = d.p10;
            timing.tau = d.tau;
            drive = Drive::free_fall(p10, cfg.environment.g_vec, cfg.particle.mass, timing);
        } else if (drive_kind == DriveKind::SymmetricInversion) {
            drive = Drive::inversion(p10, -1.0 * p10, timing);
        }

        ThermalState st = base_state;
        st.mean_p = p10;
        const ThermalAverager averager(st, cfg.numerics,
                                       resolve_average_method(st, cfg.recoil, drive));
        const auto paths = enumerate_paths(4, InternalState::Ground, cfg.recoil, timing);

        switch (mode) {
        case TraceMode::AllPaths:
        case TraceMode::AllPathsQG:
        case TraceMode::AllPathsIdealQG:
            tr.pg[idx] = branch_population(paths, st, cfg.particle, params, cfg.recoil,
                                           timing, drive, averager, pmode);
            break;
        case TraceMode::ClosedPairs:
        case TraceMode::ClosedPairsQG: {
            const auto pairs = pair_table(paths, cfg.particle, cfg.recoil, timing);
            double acc = 0.0;
            for (const auto& pr : pairs) {
                if (!pr.closed) continue;
                const auto el =
                    interference_element(paths[pr.i], paths[pr.j], st, cfg.particle, params,
                                         cfg.recoil, timing, drive, averager, pmode);
                acc += 0.25 * el.value.real();
            }
            tr.pg[idx] = 0.5 * (1.0 + acc);
            break;
        }
        case TraceMode::SinglePair:
        case TraceMode::SinglePairQG: {
            const Path* hi = nullptr;
            const Path* lo = nullptr;
            for (const auto& p : paths) {
                if (p.k_inv == 4) hi = &p;
                if (p.k_inv == 0) lo = &p;
            }
            const auto el = interference_element(*hi, *lo, st, cfg.particle, params,
                                                 cfg.recoil, timing, drive, averager, pmode);
            tr.pg[idx] = 0.125 * (1.0 + el.value.real());
            break;
        }
        default:
            break;
        }
    });
    return tr;
}

/// Uniform T grid of `periods` fringe periods at frequency f, n samples per period.
inline std::vector<double> fringe_grid(double fringe_freq_hz, int periods = 25,
                                       int per_period = 64) {
    if (fringe_freq_hz <= 0.0) throw DomainError("fringe_grid: frequency must be positive");
    const int n = periods * per_period;
    const double dt = 1.0 / (fringe_freq_hz * per_period);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = i * dt;
    return grid;
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

enum class Window { Rectangular, Hann };

struct Spectrum {
    std::vector<double> freq;      ///< Hz, bins 0..N/2
    std::vector<double> magnitude; ///< normalized: unit-amplitude cosine peaks at 1
    std::vector<double> raw_abs;   ///< |X_j| of the windowed DFT
    int n_samples = 0;
    Window window = Window::Rectangular;
};

/**
 * Real-input DFT on a uniform grid; magnitudes normalized so a pure cosine of
 * amplitude one lands at 1 (DC normalized by the window sum).
 */
inline Spectrum spectrum(const Trace& trace, Window window = Window::Rectangular) {
    const std::size_t n = trace.T.size();
    if (n < 4) throw DomainError("spectrum: trace too short");
    const double dt = trace.T[1] - trace.T[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double step = trace.T[i] - trace.T[i - 1];
        if (std::abs(step - dt) > 1e-9 * dt)
            throw DomainError("spectrum: non-uniform T grid");
    }

    std::vector<double> w(n, 1.0);
    if (window == Window::Hann)
        for (std::size_t t = 0; t < n; ++t)
            w[t] = 0.5 * (1.0 - std::cos(2.0 * M_PI * t / n));
    double wsum = 0.0;
    for (double v : w) wsum += v;

    Spectrum sp;
    sp.n_samples = static_cast<int>(n);
    sp.window = window;
    const std::size_t half = n / 2;
    sp.freq.resize(half + 1);
    sp.magnitude.resize(half + 1);
    sp.raw_abs.resize(half + 1);
    for (std::size_t j = 0; j <= half; ++j) {
        NeumaierSum re, im;
        for (std::size_t t = 0; t < n; ++t) {
            const double ph = 2.0 * M_PI * static_cast<double>(j) * static_cast<double>(t) /
                              static_cast<double>(n);
            const double v = w[t] * trace.pg[t];
            re.add(v * std::cos(ph));
            im.add(-v * std::sin(ph));
        }
        const std::complex<double> X{re.value(), im.value()};
        sp.freq[j] = static_cast<double>(j) / (static_cast<double>(n) * dt);
        sp.raw_abs[j] = std::abs(X);
        sp.magnitude[j] = (j == 0 ? 1.0 : 2.0) * std::abs(X) / wsum;
    }
    return sp;
}

struct SpectralPeak {
    int bin = 0;
    double freq = 0.0;        ///< bin frequency [Hz]
    double freq_interp = 0.0; ///< parabolic sub-bin estimate [Hz]
    double magnitude = 0.0;
};

/// Local maxima of the magnitude spectrum above `rel_threshold` × max.
inline std::vector<SpectralPeak> find_peaks(const Spectrum& sp, double rel_threshold = 0.05) {
    double peak_mag = 0.0;
    for (double m : sp.magnitude) peak_mag = std::max(peak_mag, m);
    std::vector<SpectralPeak> out;
    const std::size_t n = sp.magnitude.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double m = sp.magnitude[j];
        if (m < rel_threshold * peak_mag) continue;
        const double left = j > 0 ? sp.magnitude[j - 1] : -1.0;
        const double right = j + 1 < n ? sp.magnitude[j + 1] : -1.0;
        if (m < left || m < right) continue;
        SpectralPeak p;
        p.bin = static_cast<int>(j);
        p.freq = sp.freq[j];
        p.magnitude = m;
        p.freq_interp = p.freq;
        if (j > 0 && j + 1 < n && left > 0.0 && right > 0.0) {
            const double denom = left - 2.0 * m + right;
            if (denom != 0.0) {
                const double delta = 0.5 * (left - right) / denom;
                p.freq_interp = (static_cast<double>(j) + delta) * (sp.freq[1] - sp.freq[0]);
            }
        }
        out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV + manifest output
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << "\n";
    }
}

inline void write_manifest(const std::filesystem::path& path, const Config& cfg,
                           const nlohmann::json& extra) {
    nlohmann::json j;
    j["generator"] = "simqg";
    j["version"] = "0.1.0";
    j["config"] = config_to_json(cfg);
    j["config_digest"] = config_digest(cfg);
    j["seed"] = cfg.numerics.seed;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

inline CsvTable trace_to_table(const Trace& tr) {
    CsvTable t;
    t.columns = {"T_s", "p_g"};
    for (std::size_t i = 0; i < tr.T.size(); ++i) t.rows.push_back({tr.T[i], tr.pg[i]});
    return t;
}

inline CsvTable spectrum_to_table(const Spectrum& sp) {
    CsvTable t;
    t.columns = {"freq_Hz", "magnitude"};
    for (std::size_t i = 0; i < sp.freq.size(); ++i)
        t.rows.push_back({sp.freq[i], sp.magnitude[i]});
    return t;
}

} // namespace simqg
