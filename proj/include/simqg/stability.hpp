#pragma once

/**
 * @file stability.hpp
 * @brief Gravitation-assisted momentum-inversion configuration that restores
 *        the unsuppressed ξ₁ phase, and the momentum-independence surface of
 *        the parallel/antiparallel geometries.
 *
 * Geometry: first recoil along +z; the potential gradient points along +z as
 * well (V = m g·x with g_vec ∥ +ẑ), so an initial momentum launched along the
 * recoil decelerates, inverts during the gap and is antiparallel in the
 * second cycle.
 */

#include <cmath>
#include <vector>

#include "config.hpp"
#include "dispersion.hpp"
#include "phase.hpp"
#include "paths.hpp"
#include "thermal.hpp"

namespace simqg {

struct RecoveryDesign {
    Vec3 p10;          ///< designed initial momentum [kg·m/s]
    Vec3 p20;          ///< implied momentum at t2 [kg·m/s]
    double tau = 0.0;  ///< designed gap duration [s]
    double zeta = 0.0; ///< stability margin factor
    /// σ exceeds the gravitational momentum gain 2mgT: the inversion needs a
    /// gap much longer than the interferometer time.
    bool sigma_exceeds_gravity = false;
};

/**
 * p̃_z⁰ = x T̃ + (1 + ζ√2) σ̃ in recoil units, with τ chosen so the momentum at
 * t2 is −ζ√2 σ: the parallel component then exceeds the transverse thermal
 * spread √2σ by the factor ζ throughout both cycles.
 */
inline RecoveryDesign design_recovery(const ParticleSpec& particle,
                                      const DispersionParams& params,
                                      const RecoilSpec& recoil, double T,
                                      const EnvironmentSpec& env, double zeta) {
    const double g = env.g_vec.dot(recoil.direction);
    if (g <= 0.0)
        throw DomainError("design_recovery: needs a potential gradient along the recoil "
                          "(g_vec · k̂ > 0) to invert the momentum");
    TimingSpec tm;
    tm.T = T;
    const auto groups = dimensionless_groups(particle, recoil, tm, env, params);
    const double hk = recoil.hk_mag();
    const double sigma = groups.sigma_tilde * hk;

    RecoveryDesign d;
    d.zeta = zeta;
    const double pz0 = (groups.x * groups.T_tilde + (1.0 + zeta * std::sqrt(2.0)) *
                                                        groups.sigma_tilde) *
                       hk;
    d.p10 = recoil.direction * pz0;
    const double pz_t1 = pz0 - particle.mass * g * T;
    d.tau = (pz_t1 + zeta * std::sqrt(2.0) * sigma) / (particle.mass * g);
    d.p20 = recoil.direction * (-zeta * std::sqrt(2.0) * sigma);
    d.sigma_exceeds_gravity = sigma > groups.chi_grav_tilde * hk;
    return d;
}

// ---------------------------------------------------------------------------
// Momentum-independence surface (static per-cycle momenta)
// ---------------------------------------------------------------------------

enum class StabilityGeometry {
    ParallelParallel,
    ParallelAntiparallel,
    AntiparallelAntiparallel,
    Orthogonal
};

/// Exact ξ₁ phase for static per-cycle momenta, normalized by 2μħkT.
inline double stability_phase_surface(double p1_mag, double p2_mag,
                                      StabilityGeometry geometry,
                                      const DispersionParams& params,
                                      const ParticleSpec& particle,
                                      const RecoilSpec& recoil, double T) {
    if (p1_mag < 0.0 || p2_mag < 0.0)
        throw DomainError("stability_phase_surface: magnitudes must be >= 0");
    Vec3 d1, d2;
    const Vec3 ez = recoil.direction;
    const Vec3 ex = std::abs(ez.z) > 0.9 ? Vec3{1, 0, 0} : Vec3{0, 0, 1};
    switch (geometry) {
    case StabilityGeometry::ParallelParallel:
        d1 = ez;
        d2 = ez;
        break;
    case StabilityGeometry::ParallelAntiparallel:
        d1 = ez;
        d2 = -1.0 * ez;
        break;
    case StabilityGeometry::AntiparallelAntiparallel:
        d1 = -1.0 * ez;
        d2 = -1.0 * ez;
        break;
    case StabilityGeometry::Orthogonal:
        d1 = ex;
        d2 = ex;
        break;
    }
    const auto c1 = MomentumSchedule::constant(d1 * p1_mag, 0.0, T);
    const auto c2 = MomentumSchedule::constant(d2 * p2_mag, 2.0 * T, 3.0 * T);
    const double phi = xi1_phase(c1, c2, params, particle, recoil, 1e-13, 1e-11);
    const double optimal = 2.0 * params.mu(particle) * recoil.hk_mag() * T;
    return optimal != 0.0 ? phi / optimal : 0.0;
}

// ---------------------------------------------------------------------------
// Recovery simulation
// ---------------------------------------------------------------------------

enum class RecoveryMode { Xi1Only, WithZeroOrder, ClosedPaths, AllPaths };

struct RecoveryTrace {
    std::vector<double> T;           ///< cycle times [s]
    std::vector<double> population;  ///< traced population
    std::vector<double> envelope;    ///< |⟨e^{iΔφ}⟩| of the traced pair(s)
    std::vector<double> p10_z;       ///< designed launch momentum per T [kg·m/s]
    std::vector<double> tau;         ///< designed gap per T [s]
};

/**
 * Population trace over a grid of cycle times. With use_design the launch
 * momentum and gap are re-designed per grid point (the launch grows with T);
 * otherwise the state mean momentum and the configured τ are used as-is
 * (the non-adjusted reference configuration).
 */
inline RecoveryTrace simulate_recovery(const ParticleSpec& particle,
                                       const DispersionParams& params,
                                       const RecoilSpec& recoil, const EnvironmentSpec& env,
                                       const std::vector<double>& T_grid,
                                       const NumericsSpec& num, RecoveryMode mode,
                                       double zeta, bool use_design = true,
                                       double fixed_tau = 0.0) {
    RecoveryTrace out;
    out.T = T_grid;
    const auto base_state = thermal_state(particle, env);

    for (double T : T_grid) {
        TimingSpec timing;
        timing.T = std::max(T, 1e-30);
        Vec3 p10 = Vec3::zero();
        if (use_design) {
            const auto d = design_recovery(particle, params, recoil, timing.T, env, zeta);
            timing.tau = d.tau;
            p10 = d.p10;
        } else {
            timing.tau = fixed_tau;
        }
        ThermalState st = base_state;
        st.mean_p = p10;
        const auto drive = Drive::free_fall(p10, env.g_vec, particle.mass, timing);
        const ThermalAverager averager(st, num, resolve_average_method(st, recoil, drive));
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);

        out.p10_z.push_back(p10.dot(recoil.direction));
        out.tau.push_back(timing.tau);

        if (mode == RecoveryMode::AllPaths) {
            out.population.push_back(branch_population(paths, st, particle, params, recoil,
                                                       timing, drive, averager));
            out.envelope.push_back(0.0);
            continue;
        }
        if (mode == RecoveryMode::ClosedPaths) {
            const auto pairs = pair_table(paths, particle, recoil, timing);
            double acc = 0.0;
            for (const auto& pr : pairs) {
                if (!pr.closed) continue;
                const auto el =
                    interference_element(paths[pr.i], paths[pr.j], st, particle, params,
                                         recoil, timing, drive, averager);
                acc += 0.25 * el.value.real();
            }
            out.population.push_back(0.5 * (1.0 + acc));
            out.envelope.push_back(0.0);
            continue;
        }

        // single lower closed pair: all-transitions vs no-transitions
        const Path* hi = nullptr;
        const Path* lo = nullptr;
        for (const auto& p : paths) {
            if (p.k_inv == 4) hi = &p;
            if (p.k_inv == 0) lo = &p;
        }
        const bool qg_only = mode == RecoveryMode::Xi1Only;
        const PairPhaseDiff diff(*hi, *lo, Vec3::zero(), particle, params, recoil, timing,
                                 drive, !qg_only, true, !qg_only);
        std::vector<double> breaks;
        if (averager.method() == AverageMethod::Adaptive1D)
            breaks = detail::pair_kink_breaks(*hi, *lo, Vec3::zero(), recoil, drive);
        const auto avg = averager.phase_average(diff, breaks);
        out.envelope.push_back(std::abs(avg));
        out.population.push_back(0.125 * (1.0 + avg.real()));
    }
    return out;
}

} // namespace simqg
