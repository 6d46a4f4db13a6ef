#pragma once

/**
 * @file dispersion.hpp
 * @brief Planck-scale-modified energy dispersion and the commutator-induced
 *        dispersion series.
 *
 * E(p) = p²/(2m) + ξ₁ m c p/(2 M_p) + ξ₂ p²/(2 M_p); the standard relation is
 * recovered for ξ₁ = ξ₂ = 0. μ = ξ₁ m c/(2 ħ M_p) turns the ξ₁ term into a
 * phase rate per unit momentum.
 */

#include <cmath>
#include <map>
#include <vector>

#include "config.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "vec3.hpp"

namespace simqg {

struct DispersionParams {
    double xi1 = 0.0;
    double xi2 = 0.0;

    /// μ = ξ₁ m c / (2 ħ M_p)  [1/((kg·m/s)·s)]; μ·ħk·T is radians.
    double mu(const ParticleSpec& particle) const {
        return xi1 * particle.mass * constants::c /
               (2.0 * constants::hbar * constants::planck_mass);
    }

    bool standard() const { return xi1 == 0.0 && xi2 == 0.0; }
};

/// E(|p|) for momentum magnitude p_mag ≥ 0 [J].
inline double energy(double p_mag, const ParticleSpec& particle,
                     const DispersionParams& params) {
    if (p_mag < 0.0) throw DomainError("energy: momentum magnitude must be >= 0");
    const double m = particle.mass;
    const double Mp = constants::planck_mass;
    return p_mag * p_mag / (2.0 * m) +
           params.xi1 * m * constants::c * p_mag / (2.0 * Mp) +
           params.xi2 * p_mag * p_mag / (2.0 * Mp);
}

/**
 * ΔE(p, δp) = E(|p+δp|) − E(|p|) restricted to a subset of dispersion terms,
 * evaluated without cancellation: the quadratic terms use
 * |p+δp|² − |p|² = 2p·δp + |δp|² and the linear ξ₁ term the compensated norm
 * difference. Term selection exists because the individual contributions can
 * sit 15+ orders of magnitude apart.
 */
inline double delta_E_select(const Vec3& p, const Vec3& dp, const ParticleSpec& particle,
                             const DispersionParams& params, bool kinetic, bool with_xi1,
                             bool with_xi2) {
    const double m = particle.mass;
    const double Mp = constants::planck_mass;
    const double quad_coef = (kinetic ? 1.0 / (2.0 * m) : 0.0) +
                             (with_xi2 ? params.xi2 / (2.0 * Mp) : 0.0);
    double dE = 0.0;
    if (quad_coef != 0.0) dE = (2.0 * p.dot(dp) + dp.norm2()) * quad_coef;
    if (with_xi1 && params.xi1 != 0.0)
        dE += params.xi1 * m * constants::c / (2.0 * Mp) * norm_shift_diff(p, dp);
    return dE;
}

/// ΔE(p, δp) = E(|p+δp|) − E(|p|) with all dispersion terms.
inline double delta_E(const Vec3& p, const Vec3& dp, const ParticleSpec& particle,
                      const DispersionParams& params) {
    return delta_E_select(p, dp, particle, params, true, true, true);
}

// ---------------------------------------------------------------------------
// Commutator-induced dispersion series
// ---------------------------------------------------------------------------

/**
 * Terms of E(p̃) = (1/2m) Σ coeff · β^{beta_power} · p̃^{p_power} obtained from
 * the displaced kinetic energy ⟨p=0| e^{−ip̃x̂/ħ} (p̂²/2m) e^{ip̃x̂/ħ} |p=0⟩
 * under the modified commutator [x̂,p̂] = iħ(1+βp̂²). Coefficients are exact
 * rationals in units of 1/(2m).
 */
struct SeriesCoefficients {
    struct Term {
        int p_power;
        int beta_power;
        Rational coeff;
    };
    std::vector<Term> terms; ///< ordered by (p_power, beta_power)

    Rational coefficient(int p_power, int beta_power) const {
        for (const auto& t : terms)
            if (t.p_power == p_power && t.beta_power == beta_power) return t.coeff;
        return Rational(0);
    }

    /// Numeric coefficient of p̃^{p_power} for a concrete β (still ×1/(2m)).
    double eval_p_coefficient(int p_power, double beta) const {
        double acc = 0.0;
        for (const auto& t : terms)
            if (t.p_power == p_power)
                acc += t.coeff.to_double() * std::pow(beta, t.beta_power);
        return acc;
    }
};

/**
 * Nested-commutator expansion, exact in rationals.
 *
 * Uses e^{−αÂ} B̂ e^{+αÂ} = Σ_ν (−α)^ν/ν! [Â,B̂]_ν with Â = (i/ħ)x̂ and
 * B̂ = p̂² (the 1/(2m) is factored out). With [x̂, f(p̂)] = f'(p̂)·iħ(1+βp̂²)
 * each commutator level maps f(p) → −f'(p)(1+βp²), and the |p=0⟩ expectation
 * picks the constant term of each level.
 *
 * @param order highest power of β kept; the expansion is exact through that
 *              order. Only 0..2 are supported.
 */
inline SeriesCoefficients commutator_dispersion_series(double beta, int order) {
    (void)beta; // coefficients are exact in β; numeric evaluation happens later
    if (order < 0 || order > 2)
        throw DomainError("commutator_dispersion_series: order must be in {0,1,2}");

    // polynomial in (p, β): coeffs[p_power][beta_power]
    using Poly = std::map<std::pair<int, int>, Rational>;
    Poly f;
    f[{2, 0}] = Rational(1); // p̂²

    auto derivative_p = [](const Poly& g) {
        Poly d;
        for (const auto& [pw, c] : g) {
            const auto [pp, bp] = pw;
            if (pp > 0) d[{pp - 1, bp}] = d[{pp - 1, bp}] + c * Rational(pp);
        }
        return d;
    };
    // g → −g'(p)·(1+βp²), truncated beyond β^order
    auto commutator_level = [&](const Poly& g) {
        Poly d = derivative_p(g);
        Poly out;
        for (const auto& [pw, c] : d) {
            const auto [pp, bp] = pw;
            out[{pp, bp}] = out[{pp, bp}] - c;
            if (bp + 1 <= order) out[{pp + 2, bp + 1}] = out[{pp + 2, bp + 1}] - c;
        }
        return out;
    };

    const int max_nu = 2 + 2 * order; // highest surviving level at p=0
    SeriesCoefficients series;
    Rational factorial(1);
    Poly level = f;
    for (int nu = 0; nu <= max_nu; ++nu) {
        if (nu > 0) factorial = factorial * Rational(nu);
        // (−1)^ν/ν! × constant-in-p term of the current level
        for (const auto& [pw, c] : level) {
            const auto [pp, bp] = pw;
            if (pp != 0 || c.is_zero()) continue;
            Rational term = c / factorial;
            if (nu % 2 == 1) term = Rational(0) - term;
            // α = p̃ contributes p̃^ν
            if (!term.is_zero())
                series.terms.push_back({nu, bp, term});
        }
        if (nu < max_nu) level = commutator_level(level);
    }

    std::sort(series.terms.begin(), series.terms.end(),
              [](const SeriesCoefficients::Term& a, const SeriesCoefficients::Term& b) {
                  return std::make_pair(a.p_power, a.beta_power) <
                         std::make_pair(b.p_power, b.beta_power);
              });
    return series;
}

// ---------------------------------------------------------------------------
// Dimensionless regime groups (needs μ, hence defined here)
// ---------------------------------------------------------------------------

inline DimensionlessGroups dimensionless_groups(const ParticleSpec& particle,
                                                const RecoilSpec& recoil,
                                                const TimingSpec& timing,
                                                const EnvironmentSpec& env,
                                                const DispersionParams& params) {
    using namespace constants;
    DimensionlessGroups g;
    const double hk = recoil.hk_mag();
    const double gmag = env.g_mag();
    g.x = planck_mass * gmag / (hbar * recoil.k * recoil.k * c);
    const double sigma = thermal_sigma_p(particle.mass, env.trap_freqs.z, env.temperature);
    g.sigma_tilde = sigma / hk;
    g.T_tilde = 2.0 * params.mu(particle) * hk * timing.T;
    g.chi_grav_tilde = 2.0 * particle.mass * gmag * timing.T / hk;
    return g;
}

} // namespace simqg
