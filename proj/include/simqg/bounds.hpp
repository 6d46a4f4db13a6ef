#pragma once

/**
 * @file bounds.hpp
 * @brief Closed-form imprecision bounds on the dispersion parameters ξ₁, ξ₂
 *        for the standard error sources, the phase-frequency budget, and the
 *        radius sweeps behind the bound plots.
 */

#include <cmath>
#include <vector>

#include "config.hpp"
#include "constants.hpp"
#include "dispersion.hpp"

namespace simqg {

struct BoundInputs {
    double repetitions = 1000.0;          ///< N
    double T = 500e-6;                    ///< interferometer cycle time [s]
    double delta_detuning = 2.0 * M_PI;   ///< Δδ laser stability [rad/s]
    double dm_over_m = 0.0;               ///< relative mass uncertainty; 0 = preset rule
    double d_hbar_over_me = presets::hbar_over_me_unc; ///< Δ(ħ/m_e) [J·s/kg]
    double xi1_prior = 1.0;               ///< prior ξ₁ scale for the mass cross term

    void validate() const {
        if (repetitions < 1.0) throw DomainError("bounds: N must be >= 1");
        if (T <= 0.0) throw DomainError("bounds: T must be positive");
        if (delta_detuning < 0.0 || d_hbar_over_me < 0.0 || dm_over_m < 0.0)
            throw DomainError("bounds: uncertainties must be non-negative");
    }

    /// Default mass uncertainty: one C-12 atom for nanodiamonds, 1e-9 for atoms.
    double effective_dm_over_m(const ParticleSpec& particle) const {
        if (dm_over_m > 0.0) return dm_over_m;
        if (particle.kind == ParticleSpec::Kind::AtomPreset) return 1e-9;
        return presets::c12_mass / particle.mass;
    }
};

struct BoundPair {
    double dxi1 = 0.0;
    double dxi2 = 0.0;
};

/// Δξ₁ = (1/√N)(M_p/cT)(1/mk),   Δξ₂ = (1/√N) M_p/(T ħ k²).
inline BoundPair shot_noise_bounds(const BoundInputs& in, const ParticleSpec& particle,
                                   const RecoilSpec& recoil) {
    in.validate();
    using namespace constants;
    const double root_n = std::sqrt(in.repetitions);
    BoundPair b;
    b.dxi1 = planck_mass / (c * in.T) / (particle.mass * recoil.k) / root_n;
    b.dxi2 = planck_mass / (in.T * hbar * recoil.k * recoil.k) / root_n;
    return b;
}

/// Δξ₁ = (M_p/c)(1/mk) Δδ,   Δξ₂ = (M_p/ħ)(1/k²) Δδ.
inline BoundPair laser_frequency_bounds(const BoundInputs& in, const ParticleSpec& particle,
                                        const RecoilSpec& recoil) {
    in.validate();
    using namespace constants;
    BoundPair b;
    b.dxi1 = planck_mass / c / (particle.mass * recoil.k) * in.delta_detuning;
    b.dxi2 = planck_mass / hbar / (recoil.k * recoil.k) * in.delta_detuning;
    return b;
}

/// Δξ₁ = ξ₁ Δm/m + (M_p/m²)(ħk/c)(Δm/m),   Δξ₂ = (M_p/m)(Δm/m).
inline BoundPair mass_precision_bounds(const BoundInputs& in, const ParticleSpec& particle,
                                       const RecoilSpec& recoil) {
    in.validate();
    using namespace constants;
    const double rel = in.effective_dm_over_m(particle);
    const double m = particle.mass;
    BoundPair b;
    b.dxi1 = in.xi1_prior * rel + planck_mass / (m * m) * hbar * recoil.k / c * rel;
    b.dxi2 = planck_mass / m * rel;
    return b;
}

/// Δξ₁ = (M_p m_e/c)(k/m²) Δ(ħ/m_e),   Δξ₂ = (M_p/m) Δ(ħ/m_e)/(ħ/m_e).
inline BoundPair fine_structure_bounds(const BoundInputs& in, const ParticleSpec& particle,
                                       const RecoilSpec& recoil) {
    in.validate();
    using namespace constants;
    const double m = particle.mass;
    BoundPair b;
    b.dxi1 = planck_mass * m_e / c * recoil.k / (m * m) * in.d_hbar_over_me;
    b.dxi2 = planck_mass / m * in.d_hbar_over_me / (hbar / m_e);
    return b;
}

// ---------------------------------------------------------------------------
// Phase-frequency budget
// ---------------------------------------------------------------------------

struct PhaseFrequencies {
    double f_zero = 0.0; ///< ħk²/(2πm) [Hz]
    double f_xi1 = 0.0;  ///< ξ₁ m c k/(2π M_p) [Hz]
    double f_xi2 = 0.0;  ///< ξ₂ ħk²/(2π M_p) [Hz]
};

inline PhaseFrequencies phase_frequency_contributions(const ParticleSpec& particle,
                                                      const RecoilSpec& recoil,
                                                      const DispersionParams& params) {
    using namespace constants;
    PhaseFrequencies f;
    f.f_zero = hbar * recoil.k * recoil.k / (2.0 * M_PI * particle.mass);
    f.f_xi1 = params.xi1 * particle.mass * c * recoil.k / (2.0 * M_PI * planck_mass);
    f.f_xi2 = params.xi2 * hbar * recoil.k * recoil.k / (2.0 * M_PI * planck_mass);
    return f;
}

/// Maximal spatial path splitting (ħk/m) T [m].
inline double max_path_splitting(const ParticleSpec& particle, const RecoilSpec& recoil,
                                 double T) {
    return recoil.hk_mag() / particle.mass * T;
}

// ---------------------------------------------------------------------------
// Sweeps and prior-work anchors
// ---------------------------------------------------------------------------

struct BoundSweepRow {
    double radius = 0.0;
    double mass = 0.0;
    BoundPair shot_noise, laser_frequency, mass_precision, fine_structure;
};

inline std::vector<BoundSweepRow> bound_sweep(const std::vector<double>& radius_grid,
                                              const BoundInputs& in, const RecoilSpec& recoil,
                                              double density = presets::diamond_density) {
    if (radius_grid.empty()) throw DomainError("bound_sweep: empty radius grid");
    std::vector<BoundSweepRow> rows;
    rows.reserve(radius_grid.size());
    for (double r : radius_grid) {
        const auto p = ParticleSpec::from_radius(r, density);
        BoundSweepRow row;
        row.radius = r;
        row.mass = p.mass;
        row.shot_noise = shot_noise_bounds(in, p, recoil);
        row.laser_frequency = laser_frequency_bounds(in, p, recoil);
        row.mass_precision = mass_precision_bounds(in, p, recoil);
        row.fine_structure = fine_structure_bounds(in, p, recoil);
        rows.push_back(row);
    }
    return rows;
}

/// Reference Cs-atom inputs used for the comparison curves (N = 1e8, T = 10 ms).
inline BoundInputs cs_reference_inputs() {
    BoundInputs in;
    in.repetitions = 1e8;
    in.T = 10e-3;
    in.dm_over_m = 1e-9;
    return in;
}

struct PriorWorkBounds {
    double cs_xi2 = 0.0; ///< from the 2002 Cs photon-recoil data
    double rb_xi2 = 0.0; ///< from the 2011 Rb recoil data
};

/// Δξ₂ = (M_p/m) × relative recoil-measurement uncertainty.
inline PriorWorkBounds prior_work_xi2_bounds() {
    PriorWorkBounds b;
    b.cs_xi2 = constants::planck_mass / presets::cs_mass * presets::cs_recoil_rel_unc;
    b.rb_xi2 = constants::planck_mass / presets::rb_mass * presets::rb_recoil_rel_unc;
    return b;
}

} // namespace simqg
