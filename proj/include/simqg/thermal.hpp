#pragma once

/**
 * @file thermal.hpp
 * @brief Thermal harmonic-oscillator initial states, coherence matrix
 *        elements, interference elements with visibility decay, total and
 *        closed-path populations, the ξ₁ frequency distribution and T₂
 *        envelope estimates.
 *
 * Ensemble averages ⟨e^{−iΔφ(p)}⟩ run on deterministic quadrature grids:
 * a Gauss-Hermite tensor product in general, a Gauss-Hermite × Gauss-Laguerre
 * product when the problem is axisymmetric about the recoil axis, and an
 * adaptive integral in the strictly one-dimensional case. A counter-based
 * Monte-Carlo estimator serves as the independent cross-check.
 */

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "config.hpp"
#include "constants.hpp"
#include "dispersion.hpp"
#include "paths.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace simqg {

// ---------------------------------------------------------------------------
// Thermal state
// ---------------------------------------------------------------------------

struct ThermalState {
    double mass = 0.0;
    Vec3 omega;      ///< trap frequency per axis [rad/s]
    Vec3 nbar;       ///< mean phonon number per axis
    Vec3 sigma_p2;   ///< momentum variance per axis [(kg·m/s)²]
    Vec3 sigma_z2;   ///< position variance per axis [m²]
    Vec3 mean_p;     ///< mean momentum (boost) [kg·m/s]

    double sigma_p(int axis) const {
        const double* v = &sigma_p2.x;
        return std::sqrt(v[axis]);
    }
};

/// σ_p² = (mωħ/2)(2n̄+1), σ_z² = (ħ/2mω)(2n̄+1) per axis, n̄ from ω and 𝒯.
inline ThermalState thermal_state(const ParticleSpec& particle, const EnvironmentSpec& env) {
    env.validate();
    ThermalState st;
    st.mass = particle.mass;
    st.omega = env.trap_freqs;
    const double* w = &env.trap_freqs.x;
    double* nb = &st.nbar.x;
    double* sp = &st.sigma_p2.x;
    double* sz = &st.sigma_z2.x;
    for (int a = 0; a < 3; ++a) {
        if (w[a] <= 0.0) throw DomainError("thermal_state: trap frequencies must be positive");
        nb[a] = mean_phonon_number(w[a], env.temperature);
        const double fac = 2.0 * nb[a] + 1.0;
        sp[a] = 0.5 * particle.mass * w[a] * constants::hbar * fac;
        sz[a] = 0.5 * constants::hbar / (particle.mass * w[a]) * fac;
    }
    return st;
}

/**
 * Single-axis coherence (momentum-overlap) matrix element
 * ⟨p|ρ_th|p+Δp⟩ = 𝒫(p+Δp/2; σ_p²) · exp(−Δp² σ_z²/(2ħ²))
 * on the recoil (z) axis; the 3-D element is the product over axes.
 */
inline double coherence_element(const ThermalState& st, double p, double dp) {
    const double sp2 = st.sigma_p2.z;
    const double c = p - st.mean_p.z + 0.5 * dp;
    const double gauss = std::exp(-0.5 * c * c / sp2) / std::sqrt(2.0 * M_PI * sp2);
    return gauss * std::exp(-0.5 * dp * dp * st.sigma_z2.z /
                            (constants::hbar * constants::hbar));
}

/// Δz = Δz₀ − (Δp/m) t_tot: effective separation of paths starting Δp apart.
inline double effective_separation(double dz0, double dp, const ParticleSpec& particle,
                                   double t_tot) {
    return dz0 - dp / particle.mass * t_tot;
}

struct VisibilityFactors {
    double V_dz = 1.0;
    double V_dp = 1.0;
    double dz_r = 0.0;  ///< position-coherence scale √2 ħ/σ_p [m]
    double dp_r = 0.0;  ///< momentum-coherence scale √2 ħ/σ_z [kg·m/s]
};

/// V_Δz = exp(−Δz²/Δz_r²), V_Δp = exp(−Δp²/Δp_r²) on the recoil axis.
inline VisibilityFactors visibility_factors(const ThermalState& st, double dz, double dp) {
    VisibilityFactors v;
    v.dz_r = std::sqrt(2.0) * constants::hbar / std::sqrt(st.sigma_p2.z);
    v.dp_r = std::sqrt(2.0) * constants::hbar / std::sqrt(st.sigma_z2.z);
    v.V_dz = std::exp(-(dz / v.dz_r) * (dz / v.dz_r));
    v.V_dp = std::exp(-(dp / v.dp_r) * (dp / v.dp_r));
    return v;
}

// ---------------------------------------------------------------------------
// Ensemble averaging
// ---------------------------------------------------------------------------

enum class AverageMethod { Auto, TensorHermite, Axisymmetric, Adaptive1D, MonteCarlo };

/// Picks the cheapest exact-symmetry method for ⟨f(p)⟩ given the dynamics.
inline AverageMethod resolve_average_method(const ThermalState& st, const RecoilSpec& recoil,
                                            const Drive& drive) {
    const bool recoil_z = std::abs(recoil.direction.x) < 1e-15 &&
                          std::abs(recoil.direction.y) < 1e-15;
    bool drive_z = true;
    for (const auto& s : drive.segs)
        drive_z = drive_z && std::abs(s.p_start.x) == 0.0 && std::abs(s.p_start.y) == 0.0 &&
                  std::abs(s.slope.x) == 0.0 && std::abs(s.slope.y) == 0.0;
    const bool mean_z = st.mean_p.x == 0.0 && st.mean_p.y == 0.0;
    if (recoil_z && drive_z && mean_z) {
        if (st.sigma_p2.x == 0.0 && st.sigma_p2.y == 0.0) return AverageMethod::Adaptive1D;
        if (st.sigma_p2.x == st.sigma_p2.y) return AverageMethod::Axisymmetric;
    }
    return AverageMethod::TensorHermite;
}

struct McEstimate {
    std::complex<double> value;
    double se_re = 0.0;
    double se_im = 0.0;
};

/**
 * Deterministic momentum-ensemble averager. The node set depends only on the
 * state and the numerics options, so one instance serves every pair and every
 * grid point of a trace.
 */
class ThermalAverager {
public:
    ThermalAverager(const ThermalState& st, const NumericsSpec& num, AverageMethod method)
        : state_(st), num_(num), method_(method) {
        switch (method_) {
        case AverageMethod::TensorHermite:
            build_tensor();
            break;
        case AverageMethod::Axisymmetric:
            build_axisymmetric();
            break;
        case AverageMethod::Adaptive1D:
            break; // adaptive path, no precomputed nodes
        default:
            throw DomainError("ThermalAverager: method must be resolved before construction");
        }
    }

    AverageMethod method() const { return method_; }

    /// ⟨e^{−i φ(p)}⟩; breakpoints (z-momentum values) only matter in 1-D mode.
    template <typename PhaseFn>
    std::complex<double> phase_average(const PhaseFn& phase,
                                       const std::vector<double>& pz_breaks = {}) const {
        if (method_ == AverageMethod::Adaptive1D) return average_1d(phase, pz_breaks);
        NeumaierSum re, im;
        for (std::size_t i = 0; i < pts_.size(); ++i) {
            const double ph = phase(pts_[i]);
            re.add(wts_[i] * std::cos(ph));
            im.add(wts_[i] * -std::sin(ph));
        }
        return {re.value(), im.value()};
    }

    /// Monte-Carlo cross-check with a counter-based generator: sample i is a
    /// pure function of (seed, i), so the estimate is partition invariant.
    template <typename PhaseFn>
    McEstimate phase_average_mc(const PhaseFn& phase, long n, std::uint64_t seed) const {
        const CounterRng rng(seed);
        const Vec3 sig{std::sqrt(state_.sigma_p2.x), std::sqrt(state_.sigma_p2.y),
                       std::sqrt(state_.sigma_p2.z)};
        NeumaierSum re, im, re2, im2;
        for (long i = 0; i < n; ++i) {
            const Vec3 g = rng.normal3(static_cast<std::uint64_t>(i));
            const Vec3 p{state_.mean_p.x + sig.x * g.x, state_.mean_p.y + sig.y * g.y,
                         state_.mean_p.z + sig.z * g.z};
            const double ph = phase(p);
            const double c = std::cos(ph), s = -std::sin(ph);
            re.add(c);
            im.add(s);
            re2.add(c * c);
            im2.add(s * s);
        }
        McEstimate est;
        const double inv = 1.0 / static_cast<double>(n);
        est.value = {re.value() * inv, im.value() * inv};
        const double var_re = std::max(0.0, re2.value() * inv - est.value.real() * est.value.real());
        const double var_im = std::max(0.0, im2.value() * inv - est.value.imag() * est.value.imag());
        est.se_re = std::sqrt(var_re * inv);
        est.se_im = std::sqrt(var_im * inv);
        return est;
    }

private:
    void build_tensor() {
        const int n = num_.quadrature_order;
        const auto& rule = gauss_rule(GaussKind::Hermite, n);
        const Vec3 s{std::sqrt(2.0 * state_.sigma_p2.x), std::sqrt(2.0 * state_.sigma_p2.y),
                     std::sqrt(2.0 * state_.sigma_p2.z)};
        const double wnorm = 1.0 / std::pow(M_PI, 1.5);
        // collapse axes with zero variance to a single node
        auto axis_nodes = [&](double scale) {
            std::vector<std::pair<double, double>> nw;
            if (scale == 0.0) {
                nw.push_back({0.0, std::sqrt(M_PI)});
            } else {
                for (int i = 0; i < n; ++i) nw.push_back({rule.x[i] * scale, rule.w[i]});
            }
            return nw;
        };
        const auto nx = axis_nodes(s.x), ny = axis_nodes(s.y), nz = axis_nodes(s.z);
        pts_.reserve(nx.size() * ny.size() * nz.size());
        wts_.reserve(pts_.capacity());
        for (const auto& [xz, wz] : nz)
            for (const auto& [xy, wy] : ny)
                for (const auto& [xx, wx] : nx) {
                    pts_.push_back(state_.mean_p + Vec3{xx, xy, xz});
                    wts_.push_back(wx * wy * wz * wnorm);
                }
    }

    void build_axisymmetric() {
        // transverse plane integrated in polar form: with u = ρ²/(2σ⊥²) the
        // weight is exactly e^{-u}, handled by Gauss-Laguerre
        const int n = num_.quadrature_order;
        const int nr = std::max(16, n / 2);
        const auto& hz = gauss_rule(GaussKind::Hermite, n);
        const auto& lr = gauss_rule(GaussKind::Laguerre, nr);
        const double sz = std::sqrt(2.0 * state_.sigma_p2.z);
        const double st = std::sqrt(state_.sigma_p2.x);
        const double wnorm = 1.0 / std::sqrt(M_PI);
        pts_.reserve(static_cast<std::size_t>(n) * nr);
        wts_.reserve(pts_.capacity());
        for (int iz = 0; iz < n; ++iz)
            for (int ir = 0; ir < nr; ++ir) {
                const double rho = st * std::sqrt(2.0 * lr.x[ir]);
                pts_.push_back(state_.mean_p + Vec3{rho, 0.0, sz * hz.x[iz]});
                wts_.push_back(hz.w[iz] * lr.w[ir] * wnorm);
            }
    }

    template <typename PhaseFn>
    std::complex<double> average_1d(const PhaseFn& phase,
                                    const std::vector<double>& pz_breaks) const {
        const double sp = std::sqrt(state_.sigma_p2.z);
        const double mean = state_.mean_p.z;
        if (sp == 0.0) {
            const double ph = phase(Vec3{0.0, 0.0, mean});
            return {std::cos(ph), -std::sin(ph)};
        }
        const double lo = mean - 12.0 * sp, hi = mean + 12.0 * sp;
        const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * sp);
        auto density = [&](double pz) {
            const double u = (pz - mean) / sp;
            return norm * std::exp(-0.5 * u * u);
        };
        auto fre = [&](double pz) { return density(pz) * std::cos(phase(Vec3{0, 0, pz})); };
        auto fim = [&](double pz) { return -density(pz) * std::sin(phase(Vec3{0, 0, pz})); };
        const double re =
            integrate_adaptive(fre, lo, hi, 1e-12, 1e-10, pz_breaks, 20000).value;
        const double im =
            integrate_adaptive(fim, lo, hi, 1e-12, 1e-10, pz_breaks, 20000).value;
        return {re, im};
    }

    ThermalState state_;
    NumericsSpec num_;
    AverageMethod method_;
    std::vector<Vec3> pts_;
    std::vector<double> wts_;
};

// ---------------------------------------------------------------------------
// Interference elements and populations
// ---------------------------------------------------------------------------

/// Term selection and idealizations for population evaluation.
struct PopulationMode {
    bool include_kinetic = true;
    bool include_xi1 = true;
    bool include_xi2 = true;
    /// Evaluate pure phases at the mean momentum and drop all decay factors
    /// (the perfect-state-overlap idealization).
    bool ideal_overlap = false;
};

struct InterferenceElement {
    std::complex<double> value;
    double phase = 0.0;  ///< Δφ_ij evaluated at the ensemble mean momentum [rad]
    double V_dp = 1.0;   ///< momentum-separation coherence prefactor
    double V_dz = 1.0;   ///< magnitude of the momentum average
};

namespace detail {

/// z-momentum breakpoints where some path segment momentum can vanish
/// (1-D averaging only).
inline std::vector<double> pair_kink_breaks(const Path& pi, const Path& pj, const Vec3& dp,
                                            const RecoilSpec& recoil, const Drive& drive) {
    std::vector<double> breaks;
    auto add_for = [&](const Path& pth, double shift_sign) {
        for (int s = 0; s < 3; ++s) {
            const auto& ds = drive.segs[s];
            const double off = recoil.hk_mag() * pth.segment_kicks[s] +
                               shift_sign * 0.5 * dp.z;
            breaks.push_back(-(ds.p_start.z + off));
            breaks.push_back(-(ds.p_at(ds.t_end).z + off));
        }
    };
    add_for(pi, -1.0);
    add_for(pj, +1.0);
    return breaks;
}

} // namespace detail

/**
 * tr(U_i ρ U_j†) = e^{−Δp²σ_z²/(2ħ²)} ⟨e^{−iΔφ_ij(p,Δp)}⟩ with
 * Δφ_ij(p,Δp) = φ_i(p−Δp/2) − φ_j(p+Δp/2).
 */
inline InterferenceElement interference_element(
    const Path& pi, const Path& pj, const ThermalState& state,
    const ParticleSpec& particle, const DispersionParams& params, const RecoilSpec& recoil,
    const TimingSpec& timing, const Drive& drive, const ThermalAverager& averager,
    const PopulationMode& mode = {}) {
    const Vec3 dp = recoil.hk() * static_cast<double>(pi.p_f_units - pj.p_f_units);
    const PairPhaseDiff diff(pi, pj, dp, particle, params, recoil, timing, drive,
                             mode.include_kinetic, mode.include_xi1, mode.include_xi2);

    InterferenceElement el;
    el.phase = diff(state.mean_p);
    if (mode.ideal_overlap) {
        el.value = std::complex<double>{std::cos(el.phase), -std::sin(el.phase)};
        return el;
    }

    const double h2 = constants::hbar * constants::hbar;
    el.V_dp = std::exp(-0.5 * (dp.x * dp.x * state.sigma_z2.x + dp.y * dp.y * state.sigma_z2.y +
                               dp.z * dp.z * state.sigma_z2.z) /
                       h2);

    const std::complex<double> mean_factor{std::cos(el.phase), -std::sin(el.phase)};
    const Vec3 G = diff.quad_gradient();
    const double GsG = G.x * G.x * state.sigma_p2.x + G.y * G.y * state.sigma_p2.y +
                       G.z * G.z * state.sigma_p2.z;
    if (!diff.has_xi1()) {
        // affine phase: the Gaussian average is the characteristic function
        el.V_dz = std::exp(-0.5 * GsG);
        el.value = el.V_dp * el.V_dz * mean_factor;
        return el;
    }
    // stationary-phase bound: if the affine gradient outruns the Lipschitz
    // bound of the xi1 part by many sigma, the average is below 1e-100 and no
    // finite rule can (or needs to) resolve the oscillation
    const double Gn = G.norm();
    if (Gn > 0.0 && GsG > 0.0) {
        const double sigma_G = std::sqrt(GsG) / Gn;
        const double margin = (Gn - diff.xi1_lipschitz()) * sigma_G;
        if (margin > 30.0) {
            el.V_dz = 0.0;
            el.value = {0.0, 0.0};
            return el;
        }
    }

    std::vector<double> breaks;
    if (averager.method() == AverageMethod::Adaptive1D)
        breaks = detail::pair_kink_breaks(pi, pj, dp, recoil, drive);
    const std::complex<double> avg = averager.phase_average(diff, breaks);
    el.V_dz = std::abs(avg);
    el.value = el.V_dp * avg;
    return el;
}

/**
 * Branch population p = 1/2 (1 + 2^{1−n} Σ_{i<j} Re[η_i η_j^* tr(U_i ρ U_j†)] · 2)
 * for the eight paths of one final internal state (n = 4).
 */
inline double branch_population(const std::vector<Path>& paths, const ThermalState& state,
                                const ParticleSpec& particle, const DispersionParams& params,
                                const RecoilSpec& recoil, const TimingSpec& timing,
                                const Drive& drive, const ThermalAverager& averager,
                                const PopulationMode& mode = {}) {
    NeumaierSum interference;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            const auto el = interference_element(paths[i], paths[j], state, particle, params,
                                                 recoil, timing, drive, averager, mode);
            const std::complex<double> coeff = paths[i].eta() * std::conj(paths[j].eta());
            interference.add((coeff * el.value).real());
        }
    }
    return 0.5 + interference.value() / 8.0;
}

/// Monte-Carlo variant of branch_population (cross-check oracle).
inline double branch_population_mc(const std::vector<Path>& paths, const ThermalState& state,
                                   const ParticleSpec& particle, const DispersionParams& params,
                                   const RecoilSpec& recoil, const TimingSpec& timing,
                                   const Drive& drive, const ThermalAverager& averager,
                                   long n_samples, std::uint64_t seed,
                                   const PopulationMode& mode = {}) {
    NeumaierSum interference;
    const double h2 = constants::hbar * constants::hbar;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            const Vec3 dp =
                recoil.hk() * static_cast<double>(paths[i].p_f_units - paths[j].p_f_units);
            const PairPhaseDiff diff(paths[i], paths[j], dp, particle, params, recoil, timing,
                                     drive, mode.include_kinetic, mode.include_xi1,
                                     mode.include_xi2);
            const double V_dp = std::exp(
                -0.5 * (dp.x * dp.x * state.sigma_z2.x + dp.y * dp.y * state.sigma_z2.y +
                        dp.z * dp.z * state.sigma_z2.z) / h2);
            const auto est = averager.phase_average_mc(diff, n_samples, seed ^ (i * 131 + j));
            const std::complex<double> coeff = paths[i].eta() * std::conj(paths[j].eta());
            interference.add((coeff * (V_dp * est.value)).real());
        }
    }
    return 0.5 + interference.value() / 8.0;
}

/// Ground-state population from all 28 pair contributions of the g branch.
inline double total_population(const std::vector<Path>& paths_g, const ThermalState& state,
                               const ParticleSpec& particle, const DispersionParams& params,
                               const RecoilSpec& recoil, const TimingSpec& timing,
                               const Drive& drive, const NumericsSpec& num,
                               const PopulationMode& mode = {}) {
    const ThermalAverager averager(state, num,
                                   resolve_average_method(state, recoil, drive));
    return branch_population(paths_g, state, particle, params, recoil, timing, drive,
                             averager, mode);
}

// ---------------------------------------------------------------------------
// Closed-pair phases in the momentum-inversion form
// ---------------------------------------------------------------------------

struct ClosedPairPhases {
    double lower = 0.0;
    double upper = 0.0;
};

/**
 * φ^{l/u} = ±ħk²T/m + k⃗·(p⃗₁⁰−p⃗₂⁰) T/m + 2μħkT with p⃗₁⁰, p⃗₂⁰ the mean momenta
 * of the two cycles (free fall gives k⃗·g⃗ T(T+τ)). The orthogonal scheme keeps
 * no inversion term and halves μ.
 */
inline ClosedPairPhases closed_pair_phases_analytic(
    const ParticleSpec& particle, const DispersionParams& params, const RecoilSpec& recoil,
    const TimingSpec& timing, const Vec3& p10, const Vec3& p20,
    const PopulationMode& mode = {}, bool orthogonal = false) {
    const double m = particle.mass;
    const double T = timing.T;
    const double recoil_term =
        mode.include_kinetic ? constants::hbar * recoil.k * recoil.k * T / m : 0.0;
    double inversion_term = 0.0;
    if (mode.include_kinetic && !orthogonal) {
        const Vec3 kvec = recoil.direction * recoil.k;
        inversion_term = kvec.dot(p10 - p20) * T / m;
    }
    double qg = 0.0;
    if (mode.include_xi1) {
        const double mu_eff = params.mu(particle) * (orthogonal ? 0.5 : 1.0);
        qg += 2.0 * mu_eff * recoil.hk_mag() * T;
    }
    if (mode.include_xi2)
        qg += params.xi2 * constants::hbar * recoil.k * recoil.k * T / constants::planck_mass;
    ClosedPairPhases out;
    out.lower = recoil_term + inversion_term + qg;
    out.upper = -recoil_term + inversion_term + qg;
    return out;
}

/// p_g^closed = 1/2 (1 + 1/4 [cos φ^l + cos φ^u]).
inline double closed_paths_population(double phi_lower, double phi_upper) {
    return 0.5 * (1.0 + 0.25 * (std::cos(phi_lower) + std::cos(phi_upper)));
}

// ---------------------------------------------------------------------------
// Frequency distribution of the ξ₁ phase (Gaussian 1-D marginal)
// ---------------------------------------------------------------------------

enum class RecoilOrientation { Perpendicular, Parallel };

struct FrequencyDistribution {
    std::vector<double> x;       ///< bin centers, x = ω/(2μħk)
    std::vector<double> density; ///< normalized to unit mass: Σ density·Δx = 1
    double bin_width = 0.0;
};

/**
 * Pushforward of the 1-D Gaussian momentum marginal through
 * x(p̃) = ω(p)/(2μħk): perpendicular x = √(p̃²+1) − |p̃|,
 * parallel x = (|p̃+1| + |p̃−1| − 2|p̃|)/2.
 */
inline FrequencyDistribution frequency_distribution(const ThermalState& state,
                                                    const RecoilSpec& recoil,
                                                    RecoilOrientation orientation,
                                                    int bins = 2048, long samples = 1 << 19) {
    const double sigma_tilde = std::sqrt(state.sigma_p2.z) / recoil.hk_mag();
    const double x_lo = -0.1, x_hi = 1.3;
    FrequencyDistribution out;
    out.bin_width = (x_hi - x_lo) / bins;
    out.x.resize(bins);
    out.density.assign(bins, 0.0);
    for (int b = 0; b < bins; ++b) out.x[b] = x_lo + (b + 0.5) * out.bin_width;

    // uniform grid in momentum with Gaussian weights (deterministic)
    const double span = 8.0;
    std::vector<double> mass(bins, 0.0);
    double wsum = 0.0;
    for (long i = 0; i < samples; ++i) {
        const double pt = -span + (i + 0.5) * (2.0 * span / samples); // in units of sigma
        const double w = std::exp(-0.5 * pt * pt);
        const double p_tilde = std::abs(pt) * sigma_tilde;
        double xval;
        if (orientation == RecoilOrientation::Perpendicular)
            xval = std::sqrt(p_tilde * p_tilde + 1.0) - p_tilde;
        else
            xval = 0.5 * (std::abs(p_tilde + 1.0) + std::abs(p_tilde - 1.0) - 2.0 * p_tilde);
        const int b = static_cast<int>(std::floor((xval - x_lo) / out.bin_width));
        wsum += w;
        if (b >= 0 && b < bins) mass[b] += w;
    }
    for (int b = 0; b < bins; ++b) out.density[b] = mass[b] / (wsum * out.bin_width);
    return out;
}

// ---------------------------------------------------------------------------
// T2 envelope
// ---------------------------------------------------------------------------

struct EnvelopeResult {
    std::vector<double> T;
    std::vector<double> envelope; ///< |⟨e^{iφ_ξ1(p,T)}⟩|
    double T2 = 0.0;              ///< first 1/e crossing [s]
    bool crossed = false;         ///< false: T2 is only a lower bound (last grid T)
};

namespace detail {

/// φ_ξ1(p, T) for both cycles with free-fall trajectories p − m g t, recoil
/// +ħk then −ħk, evaluated in closed form.
inline double xi1_phase_closed_form(const Vec3& p, double T, double tau, const Vec3& g,
                                    const ParticleSpec& particle,
                                    const DispersionParams& params, const RecoilSpec& recoil) {
    const double mu = params.mu(particle);
    const Vec3 slope = g * (-particle.mass);
    const Vec3 hk = recoil.hk();
    const Vec3 p2 = p + slope * (T + tau);
    const double c1 = abs_linear_integral(p + hk, slope, T) - abs_linear_integral(p, slope, T);
    const double c2 =
        abs_linear_integral(p2 - hk, slope, T) - abs_linear_integral(p2, slope, T);
    return mu * (c1 + c2);
}

} // namespace detail

/**
 * Ensemble fringe envelope |⟨e^{iφ_ξ1(p,T)}⟩| over a grid of cycle times, and
 * the 1/e coherence time. Gravity from env (if any) enters through the
 * free-fall trajectories; tau is taken from `tau_s`.
 */
inline EnvelopeResult t2_envelope(const ThermalState& state, const ParticleSpec& particle,
                                  const DispersionParams& params, const RecoilSpec& recoil,
                                  const EnvironmentSpec& env, const std::vector<double>& T_grid,
                                  const NumericsSpec& num, double tau_s = 0.0) {
    if (T_grid.empty()) throw DomainError("t2_envelope: empty T grid");
    for (std::size_t i = 1; i < T_grid.size(); ++i)
        if (T_grid[i] <= T_grid[i - 1])
            throw DomainError("t2_envelope: T grid must be strictly increasing");

    const TimingSpec dummy; // drive only used for symmetry resolution
    const auto method = resolve_average_method(
        state, recoil, Drive::free_fall(state.mean_p, env.g_vec, particle.mass, dummy));
    const ThermalAverager averager(state, num, method);

    EnvelopeResult out;
    out.T = T_grid;
    out.envelope.resize(T_grid.size());
    const double target = std::exp(-1.0);
    for (std::size_t i = 0; i < T_grid.size(); ++i) {
        const double T = T_grid[i];
        auto phase = [&](const Vec3& p) {
            return detail::xi1_phase_closed_form(p, T, tau_s, env.g_vec, particle, params,
                                                 recoil);
        };
        out.envelope[i] = std::abs(averager.phase_average(phase));
        if (!out.crossed && out.envelope[i] < target && i > 0) {
            // log-linear interpolation of the crossing
            const double e0 = out.envelope[i - 1], e1 = out.envelope[i];
            const double t0 = T_grid[i - 1], t1 = T_grid[i];
            const double f = (std::log(e0) - std::log(target)) /
                             (std::log(e0) - std::log(e1));
            out.T2 = t0 + f * (t1 - t0);
            out.crossed = true;
        }
    }
    if (!out.crossed) out.T2 = T_grid.back();
    return out;
}

/// Convenience: find T2 by geometric grid expansion starting from a guess.
inline EnvelopeResult find_t2(const ThermalState& state, const ParticleSpec& particle,
                              const DispersionParams& params, const RecoilSpec& recoil,
                              const EnvironmentSpec& env, const NumericsSpec& num,
                              double T_guess) {
    std::vector<double> grid;
    for (double f = 1e-2; f <= 1e3; f *= 1.12) grid.push_back(T_guess * f);
    return t2_envelope(state, particle, params, recoil, env, grid, num);
}

} // namespace simqg
