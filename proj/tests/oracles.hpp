#pragma once

// Test-only oracles, independent of the library's ensemble machinery.
//
// split_step_populations propagates the full two-level wavefunction on a 1-D
// momentum grid through the four-pulse sequence: beam splitters are exact
// momentum shifts, free evolution is diagonal in p. No path decomposition is
// involved, so it cross-checks enumeration, eta factors, coherence elements
// and the pair sum at once.

#include <complex>
#include <vector>

#include "simqg/config.hpp"
#include "simqg/dispersion.hpp"
#include "simqg/rng.hpp"

namespace simqg::test {

struct SplitStepResult {
    double p_g = 0.0;
    double p_e = 0.0;
};

/**
 * 1-D momentum-grid propagation of |g⟩⊗Gaussian(p0, sigma_p) through the
 * Ramsey-Borde sequence (pulse directions +,+,−,−), free particle, silent
 * laser. The grid spacing is ħk/bins_per_hk so recoil shifts are exact.
 */
inline SplitStepResult split_step_populations(const ParticleSpec& particle,
                                              const DispersionParams& params,
                                              const RecoilSpec& recoil,
                                              const TimingSpec& timing, double sigma_p,
                                              double p0, int bins_per_hk = 16,
                                              double half_width_hk = 24.0) {
    const double hk = recoil.hk_mag();
    const int shift = bins_per_hk;
    const double dp = hk / bins_per_hk;
    const int half = static_cast<int>(half_width_hk * bins_per_hk);
    const int N = 2 * half + 1;

    std::vector<std::complex<double>> psi_g(N), psi_e(N);
    for (int i = 0; i < N; ++i) {
        const double p = p0 + (i - half) * dp;
        const double u = (p - p0) / sigma_p;
        psi_g[i] = std::exp(-0.25 * u * u);
    }
    double norm2 = 0.0;
    for (const auto& a : psi_g) norm2 += std::norm(a);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : psi_g) a *= inv;

    auto shifted = [&](const std::vector<std::complex<double>>& v, int by) {
        // value at index i of the shifted-by-`by` array, zero off-grid
        return [&v, by, N](int i) -> std::complex<double> {
            const int j = i - by;
            return (j >= 0 && j < N) ? v[j] : std::complex<double>{0.0, 0.0};
        };
    };
    const std::complex<double> mi{0.0, -1.0};
    auto pulse = [&](int dir) {
        std::vector<std::complex<double>> ng(N), ne(N);
        auto g_up = shifted(psi_g, dir * shift);    // e^{i d k z} psi_g at p
        auto e_dn = shifted(psi_e, -dir * shift);   // e^{-i d k z} psi_e at p
        const double s = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < N; ++i) {
            ne[i] = s * (psi_e[i] + mi * g_up(i));
            ng[i] = s * (psi_g[i] + mi * e_dn(i));
        }
        psi_g.swap(ng);
        psi_e.swap(ne);
    };
    auto evolve = [&](double dt) {
        if (dt <= 0.0) return;
        for (int i = 0; i < N; ++i) {
            const double p = p0 + (i - half) * dp;
            const double ph = energy(std::abs(p), particle, params) * dt / constants::hbar;
            const std::complex<double> f{std::cos(ph), -std::sin(ph)};
            psi_g[i] *= f;
            psi_e[i] *= f;
        }
    };

    pulse(+1);
    evolve(timing.T);
    pulse(+1);
    evolve(timing.tau);
    pulse(-1);
    evolve(timing.T);
    pulse(-1);

    SplitStepResult r;
    for (int i = 0; i < N; ++i) {
        r.p_g += std::norm(psi_g[i]);
        r.p_e += std::norm(psi_e[i]);
    }
    return r;
}

} // namespace simqg::test
