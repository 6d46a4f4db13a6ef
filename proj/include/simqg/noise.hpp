#pragma once

/**
 * @file noise.hpp
 * @brief Visibility-loss models: cycle-time errors, Doppler-detuned pulse
 *        transfer and a parameterized collisional-decoherence model.
 */

#include <cmath>
#include <complex>

#include "config.hpp"
#include "constants.hpp"
#include "quadrature.hpp"

namespace simqg {

/**
 * Visibility under a cycle-time error ΔT: the extra phase φ = k·v·ΔT averaged
 * over a Gaussian velocity spread gives V = exp(−(k σ_v ΔT)²/2).
 */
inline double time_error_visibility(double sigma_v, const RecoilSpec& recoil, double dT) {
    if (sigma_v < 0.0) throw DomainError("time_error_visibility: sigma_v must be >= 0");
    const double x = recoil.k * sigma_v * dT;
    return std::exp(-0.5 * x * x);
}

namespace detail {

/// Amplitudes of a detuned pulse of resonant area π/2: duration (π/2)/Ω,
/// generalized Rabi frequency Ω' = √(Ω²+δ²).
struct PulseAmplitudes {
    std::complex<double> stay_g;   ///< ⟨g|U|g⟩
    std::complex<double> transfer; ///< ⟨e|U|g⟩ (= ⟨g|U|e⟩ up to phase convention)
};

inline PulseAmplitudes detuned_pulse(double delta, double omega_rabi) {
    const double op = std::sqrt(omega_rabi * omega_rabi + delta * delta);
    const double theta = op * (0.5 * M_PI / omega_rabi); // Ω' t_pulse
    PulseAmplitudes a;
    const double s = std::sin(0.5 * theta);
    a.stay_g = {std::cos(0.5 * theta), delta / op * s};
    a.transfer = {0.0, -omega_rabi / op * s};
    return a;
}

} // namespace detail

/**
 * Expected fringe amplitude of the closed pair under Doppler-shifted pulses:
 * the all-transition and no-transition interfering paths carry the amplitude
 * product 16 a_t⁴ (a_g*)⁴ per velocity class δ(v) = k·v, Gaussian-averaged.
 */
inline double doppler_pulse_visibility(double sigma_v, const RecoilSpec& recoil,
                                       double omega_rabi, int quad_order = 96) {
    if (omega_rabi <= 0.0) throw DomainError("doppler_pulse_visibility: Omega must be > 0");
    if (sigma_v < 0.0) throw DomainError("doppler_pulse_visibility: sigma_v must be >= 0");
    if (sigma_v == 0.0) return 1.0;
    const auto& rule = gauss_rule(GaussKind::Hermite, quad_order);
    std::complex<double> acc{0.0, 0.0};
    const double wnorm = 1.0 / std::sqrt(M_PI);
    for (int i = 0; i < quad_order; ++i) {
        const double v = std::sqrt(2.0) * sigma_v * rule.x[i];
        const auto a = detail::detuned_pulse(recoil.k * v, omega_rabi);
        const std::complex<double> at4 = std::pow(a.transfer, 4);
        const std::complex<double> ag4 = std::pow(std::conj(a.stay_g), 4);
        acc += rule.w[i] * wnorm * (at4 * ag4);
    }
    return 16.0 * std::abs(acc);
}

/**
 * Collisional decoherence with hard-sphere geometry: collision rate
 * Γ = n σ_geo v̄ (ideal gas density, geometric cross section π r², Maxwell mean
 * speed) and V = exp(−Γ t (1 − ⟨cos(Δp·Δz/ħ)⟩)). For isotropic elastic
 * scattering the direction average gives ⟨cos⟩ = ⟨sinc²(p Δz/ħ)⟩ over the gas
 * Maxwell momentum distribution.
 */
inline double collisional_visibility(const GasSpec& gas, double particle_radius, double dz,
                                     double t, int quad_order = 128) {
    if (gas.pressure < 0.0) throw DomainError("collisional_visibility: pressure must be >= 0");
    if (gas.pressure == 0.0) return 1.0;
    if (gas.temperature <= 0.0 || gas.mass <= 0.0)
        throw DomainError("collisional_visibility: gas temperature and mass must be positive");
    using namespace constants;
    const double n_gas = gas.pressure / (k_B * gas.temperature);
    const double sigma_geo = M_PI * particle_radius * particle_radius;
    const double vbar = std::sqrt(8.0 * k_B * gas.temperature / (M_PI * gas.mass));
    const double rate = n_gas * sigma_geo * vbar;

    double cos_avg = 1.0;
    if (dz != 0.0) {
        // Maxwell magnitude average of sinc²(p dz/ħ): with u = p²/(2 m kB T)
        // the weight is u^{1/2} e^{-u} (Gauss-Laguerre with the half-integer
        // moments folded into a ratio)
        const double s = std::sqrt(gas.mass * k_B * gas.temperature);
        const auto& rule = gauss_rule(GaussKind::Laguerre, quad_order);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < quad_order; ++i) {
            const double u = rule.x[i];
            const double p = s * std::sqrt(2.0 * u);
            const double x = p * dz / hbar;
            const double sinc = x != 0.0 ? std::sin(x) / x : 1.0;
            const double w = rule.w[i] * std::sqrt(u);
            num += w * sinc * sinc;
            den += w;
        }
        cos_avg = num / den;
    }
    return std::exp(-rate * t * (1.0 - cos_avg));
}

} // namespace simqg
