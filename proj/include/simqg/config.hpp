#pragma once

/**
 * @file config.hpp
 * @brief Experiment description: particle, recoil, timing, laser, environment,
 *        numerics. JSON (de)serialization and the dimensionless regime groups.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "constants.hpp"
#include "errors.hpp"
#include "vec3.hpp"

namespace simqg {

// ---------------------------------------------------------------------------
// Domain value types
// ---------------------------------------------------------------------------

struct ParticleSpec {
    enum class Kind { NanodiamondFromRadius, AtomPreset, ExplicitMass };

    Kind kind = Kind::ExplicitMass;
    double mass = 0.0;      ///< kg
    double radius = 0.0;    ///< m (nanodiamond kind only)
    double density = 0.0;   ///< kg/m³ (nanodiamond kind only)
    std::string preset;     ///< atom preset name ("Cs", "Rb")

    static ParticleSpec from_radius(double radius_m, double density_kg_m3) {
        if (radius_m <= 0.0 || density_kg_m3 <= 0.0)
            throw DomainError("particle_from_radius: radius and density must be positive");
        ParticleSpec p;
        p.kind = Kind::NanodiamondFromRadius;
        p.radius = radius_m;
        p.density = density_kg_m3;
        p.mass = (4.0 / 3.0) * M_PI * radius_m * radius_m * radius_m * density_kg_m3;
        return p;
    }

    static ParticleSpec atom_preset(const std::string& name) {
        ParticleSpec p;
        p.kind = Kind::AtomPreset;
        p.preset = name;
        if (name == "Cs")
            p.mass = presets::cs_mass;
        else if (name == "Rb")
            p.mass = presets::rb_mass;
        else
            throw ConfigError("unknown atom preset: " + name);
        return p;
    }

    static ParticleSpec explicit_mass(double mass_kg) {
        if (mass_kg <= 0.0) throw DomainError("particle mass must be positive");
        ParticleSpec p;
        p.kind = Kind::ExplicitMass;
        p.mass = mass_kg;
        return p;
    }
};

/// Convenience for the op name used throughout.
inline ParticleSpec particle_from_radius(double radius_m, double density_kg_m3) {
    return ParticleSpec::from_radius(radius_m, density_kg_m3);
}

struct RecoilSpec {
    double k = presets::k_nominal;  ///< wavenumber magnitude [1/m]
    Vec3 direction = Vec3::unit_z();

    void validate() const {
        if (k <= 0.0) throw DomainError("recoil: k must be positive");
        if (std::abs(direction.norm() - 1.0) > 1e-12)
            throw DomainError("recoil: direction must be a unit vector");
    }
    /// ħk as a vector [kg·m/s].
    Vec3 hk() const { return direction * (constants::hbar * k); }
    double hk_mag() const { return constants::hbar * k; }
};

struct TimingSpec {
    double T = 500e-6;   ///< cycle duration t1-t0 = tf-t2 [s]
    double tau = 0.0;    ///< intermediate gap t2-t1 [s]
    double t0 = 0.0;

    double t1() const { return t0 + T; }
    double t2() const { return t0 + T + tau; }
    double tf() const { return t0 + 2.0 * T + tau; }
    double total() const { return 2.0 * T + tau; }

    void validate() const {
        if (!(T > 0.0)) throw DomainError("timing: T must be positive");
        if (tau < 0.0) throw DomainError("timing: tau must be non-negative");
    }
};

struct LaserSpec {
    double detuning = 0.0;                    ///< constant δ [rad/s]
    std::array<double, 4> phases{0, 0, 0, 0}; ///< φ(t0), φ(t1), φ(t2), φ(tf) [rad]
    /// Optional tabulated δ(t); when non-empty it replaces the constant detuning
    /// and is integrated with the trapezoidal rule.
    std::vector<std::pair<double, double>> detuning_table;
};

struct GasSpec {
    double pressure = 0.0;          ///< Pa
    double mass = 28.97 * constants::amu; ///< kg (air-like default)
    double temperature = 300.0;     ///< K
};

struct EnvironmentSpec {
    Vec3 g_vec = Vec3::zero();      ///< m/s²
    double temperature = 0.0;       ///< K
    Vec3 trap_freqs = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI}; ///< rad/s per axis
    GasSpec gas;

    void validate() const {
        if (temperature < 0.0) throw DomainError("environment: temperature must be >= 0");
    }
    double g_mag() const { return g_vec.norm(); }
};

struct NumericsSpec {
    std::uint64_t seed = 20240901;
    int quadrature_order = 64;      ///< Gauss-Hermite order per axis
    long mc_samples = 100000;
    double quad_abs_tol = 1e-12;    ///< rad, for phase time-integrals
    double quad_rel_tol = 1e-10;
};

/// Optional extras beyond the core schema.
struct StateSpec {
    Vec3 p0 = Vec3::zero();         ///< mean initial momentum [kg·m/s]
};

struct RecoverySpec {
    double zeta = 5.0;              ///< stability-margin factor
};

// ---------------------------------------------------------------------------
// Dimensionless regime groups
// ---------------------------------------------------------------------------

/// Mean phonon number of a harmonic oscillator mode at temperature temp.
inline double mean_phonon_number(double omega, double temp) {
    if (omega <= 0.0) throw DomainError("mean_phonon_number: omega must be positive");
    if (temp <= 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_B * temp);
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

/// Per-axis thermal momentum std-dev sqrt((mωħ/2)(2n̄+1)) [kg·m/s].
inline double thermal_sigma_p(double mass, double omega, double temp) {
    const double nbar = mean_phonon_number(omega, temp);
    return std::sqrt(0.5 * mass * omega * constants::hbar * (2.0 * nbar + 1.0));
}

struct DimensionlessGroups {
    double x = 0.0;              ///< M_p g / (ħ k² c), gravity suppression ratio
    double sigma_tilde = 0.0;    ///< σ/(ħk), recoil-axis thermal spread
    double T_tilde = 0.0;        ///< 2 μ ħk T, dimensionless interferometer time
    double chi_grav_tilde = 0.0; ///< 2 m g T/(ħk), gravitational momentum gain
};

// defined in dispersion.hpp (needs μ); declared here for visibility
struct DispersionParams;

// ---------------------------------------------------------------------------
// Aggregate configuration + JSON round trip
// ---------------------------------------------------------------------------

struct Config {
    ParticleSpec particle = ParticleSpec::from_radius(50e-9, presets::diamond_density);
    RecoilSpec recoil;
    TimingSpec timing;
    LaserSpec laser;
    EnvironmentSpec environment;
    double xi1 = 1.0;
    double xi2 = 0.0;
    NumericsSpec numerics;
    StateSpec state;
    RecoverySpec recovery;

    void validate() const {
        recoil.validate();
        timing.validate();
        environment.validate();
        if (particle.mass <= 0.0) throw DomainError("particle mass must be positive");
    }
};

namespace detail {

inline Vec3 vec3_from_json(const nlohmann::json& j, const char* key) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string("config: '") + key + "' must be a 3-array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace detail

inline Config config_from_json(const nlohmann::json& j) {
    Config cfg;
    try {
        if (j.contains("particle")) {
            const auto& p = j.at("particle");
            const std::string kind = p.value("kind", "nanodiamond");
            if (kind == "nanodiamond") {
                cfg.particle = ParticleSpec::from_radius(
                    p.value("radius_m", 50e-9),
                    p.value("density_kg_m3", presets::diamond_density));
            } else if (kind == "atom_preset") {
                cfg.particle = ParticleSpec::atom_preset(p.value("preset", "Cs"));
            } else if (kind == "explicit") {
                cfg.particle = ParticleSpec::explicit_mass(p.value("mass_kg", 0.0));
            } else {
                throw ConfigError("config: unknown particle kind '" + kind + "'");
            }
        }
        if (j.contains("recoil")) {
            const auto& r = j.at("recoil");
            cfg.recoil.k = r.value("k_per_m", presets::k_nominal);
            if (r.contains("direction"))
                cfg.recoil.direction = detail::vec3_from_json(r.at("direction"), "recoil.direction");
            const double n = cfg.recoil.direction.norm();
            if (n == 0.0) throw ConfigError("config: recoil direction must be nonzero");
            cfg.recoil.direction = cfg.recoil.direction / n;
        }
        if (j.contains("timing")) {
            cfg.timing.T = j.at("timing").value("T_s", 500e-6);
            cfg.timing.tau = j.at("timing").value("tau_s", 0.0);
        }
        if (j.contains("laser")) {
            const auto& l = j.at("laser");
            cfg.laser.detuning = l.value("detuning_rad_s", 0.0);
            if (l.contains("phases_rad")) {
                const auto& ph = l.at("phases_rad");
                if (!ph.is_array() || ph.size() != 4)
                    throw ConfigError("config: laser.phases_rad must have 4 entries");
                for (int i = 0; i < 4; ++i) cfg.laser.phases[i] = ph[i].get<double>();
            }
        }
        if (j.contains("environment")) {
            const auto& e = j.at("environment");
            if (e.contains("g_vec"))
                cfg.environment.g_vec = detail::vec3_from_json(e.at("g_vec"), "environment.g_vec");
            cfg.environment.temperature = e.value("temperature_K", 0.0);
            if (e.contains("trap_freqs_rad_s")) {
                const auto& w = e.at("trap_freqs_rad_s");
                if (w.is_number()) {
                    const double v = w.get<double>();
                    cfg.environment.trap_freqs = {v, v, v};
                } else {
                    cfg.environment.trap_freqs = detail::vec3_from_json(w, "trap_freqs_rad_s");
                }
            }
            if (e.contains("gas")) {
                const auto& g = e.at("gas");
                cfg.environment.gas.pressure = g.value("pressure_Pa", 0.0);
                cfg.environment.gas.mass = g.value("mass_kg", cfg.environment.gas.mass);
                cfg.environment.gas.temperature = g.value("temperature_K", 300.0);
            }
        }
        if (j.contains("dispersion")) {
            cfg.xi1 = j.at("dispersion").value("xi1", 1.0);
            cfg.xi2 = j.at("dispersion").value("xi2", 0.0);
        }
        if (j.contains("numerics")) {
            const auto& n = j.at("numerics");
            cfg.numerics.seed = n.value("seed", cfg.numerics.seed);
            cfg.numerics.quadrature_order = n.value("quadrature_order", 64);
            cfg.numerics.mc_samples = n.value("mc_samples", 100000L);
            if (n.contains("tolerances")) {
                cfg.numerics.quad_abs_tol = n.at("tolerances").value("quad_abs", 1e-12);
                cfg.numerics.quad_rel_tol = n.at("tolerances").value("quad_rel", 1e-10);
            }
        }
        if (j.contains("state") && j.at("state").contains("p0_kg_m_s"))
            cfg.state.p0 = detail::vec3_from_json(j.at("state").at("p0_kg_m_s"), "state.p0");
        if (j.contains("recovery"))
            cfg.recovery.zeta = j.at("recovery").value("zeta", 5.0);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

inline nlohmann::json config_to_json(const Config& cfg) {
    nlohmann::json j;
    switch (cfg.particle.kind) {
    case ParticleSpec::Kind::NanodiamondFromRadius:
        j["particle"] = {{"kind", "nanodiamond"},
                         {"radius_m", cfg.particle.radius},
                         {"density_kg_m3", cfg.particle.density},
                         {"mass_kg", cfg.particle.mass}};
        break;
    case ParticleSpec::Kind::AtomPreset:
        j["particle"] = {{"kind", "atom_preset"},
                         {"preset", cfg.particle.preset},
                         {"mass_kg", cfg.particle.mass}};
        break;
    case ParticleSpec::Kind::ExplicitMass:
        j["particle"] = {{"kind", "explicit"}, {"mass_kg", cfg.particle.mass}};
        break;
    }
    j["recoil"] = {{"k_per_m", cfg.recoil.k},
                   {"direction", {cfg.recoil.direction.x, cfg.recoil.direction.y,
                                  cfg.recoil.direction.z}}};
    j["timing"] = {{"T_s", cfg.timing.T}, {"tau_s", cfg.timing.tau}};
    j["laser"] = {{"detuning_rad_s", cfg.laser.detuning},
                  {"phases_rad", cfg.laser.phases}};
    j["environment"] = {
        {"g_vec", {cfg.environment.g_vec.x, cfg.environment.g_vec.y, cfg.environment.g_vec.z}},
        {"temperature_K", cfg.environment.temperature},
        {"trap_freqs_rad_s", {cfg.environment.trap_freqs.x, cfg.environment.trap_freqs.y,
                              cfg.environment.trap_freqs.z}},
        {"gas", {{"pressure_Pa", cfg.environment.gas.pressure},
                 {"mass_kg", cfg.environment.gas.mass},
                 {"temperature_K", cfg.environment.gas.temperature}}}};
    j["dispersion"] = {{"xi1", cfg.xi1}, {"xi2", cfg.xi2}};
    j["numerics"] = {{"seed", cfg.numerics.seed},
                     {"quadrature_order", cfg.numerics.quadrature_order},
                     {"mc_samples", cfg.numerics.mc_samples},
                     {"tolerances", {{"quad_abs", cfg.numerics.quad_abs_tol},
                                     {"quad_rel", cfg.numerics.quad_rel_tol}}}};
    j["state"] = {{"p0_kg_m_s", {cfg.state.p0.x, cfg.state.p0.y, cfg.state.p0.z}}};
    j["recovery"] = {{"zeta", cfg.recovery.zeta}};
    return j;
}

/// FNV-1a digest of the canonical JSON form; used in output manifests.
inline std::string config_digest(const Config& cfg) {
    const std::string s = config_to_json(cfg).dump();
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace simqg
