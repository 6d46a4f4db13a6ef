#pragma once

/**
 * @file phase.hpp
 * @brief Interferometer phases for closed path pairs: exact time integrals,
 *        the large-momentum approximation, the overdamped gravitational
 *        closed form, the gravimeter formula and the phase-space-area check.
 */

#include <cmath>
#include <functional>
#include <vector>

#include "config.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "vec3.hpp"

namespace simqg {

// ---------------------------------------------------------------------------
// Piecewise-linear momentum trajectories
// ---------------------------------------------------------------------------

struct LinearSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    Vec3 p_start;          ///< momentum at t_start [kg·m/s]
    Vec3 slope;            ///< dp/dt = inertial force −m g [N]

    Vec3 p_at(double t) const { return p_start + slope * (t - t_start); }
    double duration() const { return t_end - t_start; }
};

/// Piecewise-linear p(t); continuous within segments, kicks only at knots.
struct MomentumSchedule {
    std::vector<LinearSegment> segments;

    static MomentumSchedule constant(const Vec3& p, double t_start, double t_end) {
        return {{LinearSegment{t_start, t_end, p, Vec3::zero()}}};
    }
    /// Free fall from p0 at t_start under V'(x) = m g (slope −m g).
    static MomentumSchedule free_fall(const Vec3& p0, const Vec3& g, double mass,
                                      double t_start, double t_end) {
        return {{LinearSegment{t_start, t_end, p0, g * (-mass)}}};
    }

    Vec3 p_at(double t) const {
        for (const auto& s : segments)
            if (t <= s.t_end || &s == &segments.back()) return s.p_at(t);
        return segments.back().p_at(t);
    }
};

namespace detail {

/// Closed form of ∫ |a + b·t| dt over [0, L].
inline double abs_linear_integral(const Vec3& a, const Vec3& b, double L) {
    const double b2 = b.norm2();
    if (b2 == 0.0) return a.norm() * L;
    const double beta = std::sqrt(b2);
    const double ts = -a.dot(b) / b2;                 // time of closest approach
    const double d2 = std::max(0.0, a.norm2() - (a.dot(b) * a.dot(b)) / b2);
    const double d = std::sqrt(d2);
    auto F = [&](double t) {
        const double u = t - ts;
        const double s = std::sqrt(b2 * u * u + d2);
        if (d == 0.0) return 0.5 * beta * u * std::abs(u);
        return 0.5 * (u * s + (d2 / beta) * std::asinh(beta * u / d));
    };
    return F(L) - F(0.0);
}

/// Candidate force-split times where |p(t) + offset| dips below eps, for one
/// segment; the minimum of the quadratic |p(t)+offset|² is bracketed
/// analytically.
inline void near_zero_breakpoints(const LinearSegment& seg, const Vec3& offset,
                                  double eps, std::vector<double>& out) {
    const Vec3 a = seg.p_start + offset;
    const Vec3 b = seg.slope;
    const double b2 = b.norm2();
    if (b2 == 0.0) return;
    const double ts = seg.t_start - a.dot(b) / b2;
    if (ts <= seg.t_start || ts >= seg.t_end) return;
    const Vec3 pmin = a + b * (ts - seg.t_start);
    if (pmin.norm() < eps) out.push_back(ts);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Phase results
// ---------------------------------------------------------------------------

struct PhaseResult {
    double total = 0.0;       ///< rad, from a single full-integrand quadrature
    double zero_order = 0.0;  ///< recoil phase of the unmodified dispersion, g = 0
    double xi1 = 0.0;
    double xi2 = 0.0;
    double gravity = 0.0;     ///< kinetic-term change due to the inertial force
    double laser = 0.0;

    double component_sum() const { return zero_order + xi1 + xi2 + gravity + laser; }
};

/// Laser phase Δφ = [φ(tf)−φ(t2)+φ(t1)−φ(t0)] + ∫δ over both cycles.
inline double laser_phase(const LaserSpec& laser, const TimingSpec& timing) {
    double dphi = laser.phases[3] - laser.phases[2] + laser.phases[1] - laser.phases[0];
    if (laser.detuning_table.empty()) {
        dphi += laser.detuning * 2.0 * timing.T;
    } else {
        // trapezoidal ∫δ(t)dt over [t0,t1] and [t2,tf]
        auto integrate_window = [&](double a, double b) {
            const auto& tab = laser.detuning_table;
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < tab.size(); ++i) {
                const double lo = std::max(a, tab[i].first);
                const double hi = std::min(b, tab[i + 1].first);
                if (hi <= lo) continue;
                const double dt = tab[i + 1].first - tab[i].first;
                auto val = [&](double t) {
                    const double w = (t - tab[i].first) / dt;
                    return (1.0 - w) * tab[i].second + w * tab[i + 1].second;
                };
                acc += 0.5 * (val(lo) + val(hi)) * (hi - lo);
            }
            return acc;
        };
        dphi += integrate_window(timing.t0, timing.t1());
        dphi += integrate_window(timing.t2(), timing.tf());
    }
    return dphi;
}

namespace detail {

/// (1/ħ) ∫ ΔE(p(t), δp) dt over a schedule, adaptively, with force-splits
/// wherever |p(t)| or |p(t)+δp| passes near zero. Selects dispersion terms.
inline double delta_E_cycle_integral(const MomentumSchedule& sched, const Vec3& dp,
                                     const ParticleSpec& particle,
                                     const DispersionParams& params,
                                     double hk_mag, double abs_tol, double rel_tol,
                                     bool kinetic = true, bool with_xi1 = true,
                                     bool with_xi2 = true) {
    NeumaierSum acc;
    const double eps = 1e-3 * hk_mag;
    for (const auto& seg : sched.segments) {
        std::vector<double> breaks;
        near_zero_breakpoints(seg, Vec3::zero(), eps, breaks);
        near_zero_breakpoints(seg, dp, eps, breaks);
        auto f = [&](double t) {
            return delta_E_select(seg.p_at(t), dp, particle, params, kinetic, with_xi1,
                                  with_xi2) /
                   constants::hbar;
        };
        acc.add(integrate_adaptive(f, seg.t_start, seg.t_end, abs_tol, rel_tol, breaks)
                    .value);
    }
    return acc.value();
}

} // namespace detail

/**
 * Exact ξ₁ phase of a closed pair with per-cycle trajectories:
 * μ (∫_{cycle 1} |p₁+ħk|−|p₁| dt + ∫_{cycle 2} |p₂−ħk|−|p₂| dt).
 *
 * The second-cycle recoil sign follows the standard four-pulse geometry
 * (reversed); pass second_cycle_sign = +1.0 to override.
 */
inline double xi1_phase(const MomentumSchedule& cycle1, const MomentumSchedule& cycle2,
                        const DispersionParams& params, const ParticleSpec& particle,
                        const RecoilSpec& recoil,
                        double abs_tol = 1e-12, double rel_tol = 1e-10,
                        double second_cycle_sign = -1.0) {
    const double mu = params.mu(particle);
    if (mu == 0.0) return 0.0;
    const Vec3 hk = recoil.hk();
    const double eps = 1e-3 * recoil.hk_mag();

    auto cycle_integral = [&](const MomentumSchedule& sched, const Vec3& dp) {
        NeumaierSum acc;
        for (const auto& seg : sched.segments) {
            std::vector<double> breaks;
            detail::near_zero_breakpoints(seg, Vec3::zero(), eps, breaks);
            detail::near_zero_breakpoints(seg, dp, eps, breaks);
            auto f = [&](double t) { return norm_shift_diff(seg.p_at(t), dp); };
            acc.add(integrate_adaptive(f, seg.t_start, seg.t_end,
                                       abs_tol / std::max(mu, 1e-300), rel_tol, breaks)
                        .value);
        }
        return acc.value();
    };

    return mu * (cycle_integral(cycle1, hk) +
                 cycle_integral(cycle2, hk * second_cycle_sign));
}

/**
 * Full closed-pair interferometer phase for an initial definite momentum p0,
 * free-falling continuously from t0 (p(t) = p0 − m g (t−t0)); recoil +ħk in
 * the first cycle and −ħk in the second.
 *
 * `total` comes from one quadrature of the complete ΔE; the components from
 * separate quadratures with the dispersion terms selected one at a time, so
 * component additivity is a genuine numerical cross-check.
 */
inline PhaseResult closed_pair_phase(const Vec3& p0, const ParticleSpec& particle,
                                     const DispersionParams& params,
                                     const RecoilSpec& recoil, const TimingSpec& timing,
                                     const LaserSpec& laser, const EnvironmentSpec& env,
                                     double abs_tol = 1e-12, double rel_tol = 1e-10) {
    const Vec3 hk = recoil.hk();
    const double hk_mag = recoil.hk_mag();
    const auto traj_grav = [&](double a, double b) {
        return MomentumSchedule{{LinearSegment{a, b, p0 - env.g_vec * (particle.mass * (a - timing.t0)),
                                               env.g_vec * (-particle.mass)}}};
    };
    const auto traj_free = [&](double a, double b) {
        return MomentumSchedule::constant(p0, a, b);
    };

    auto both_cycles = [&](bool with_gravity, bool kin, bool x1, bool x2) {
        const auto c1 = with_gravity ? traj_grav(timing.t0, timing.t1())
                                     : traj_free(timing.t0, timing.t1());
        const auto c2 = with_gravity ? traj_grav(timing.t2(), timing.tf())
                                     : traj_free(timing.t2(), timing.tf());
        return detail::delta_E_cycle_integral(c1, hk, particle, params, hk_mag,
                                              abs_tol, rel_tol, kin, x1, x2) +
               detail::delta_E_cycle_integral(c2, -1.0 * hk, particle, params, hk_mag,
                                              abs_tol, rel_tol, kin, x1, x2);
    };

    PhaseResult r;
    r.laser = laser_phase(laser, timing);
    r.zero_order = both_cycles(false, true, false, false);
    r.gravity = both_cycles(true, true, false, false) - r.zero_order;
    r.xi1 = params.xi1 != 0.0 ? both_cycles(true, false, true, false) : 0.0;
    r.xi2 = params.xi2 != 0.0 ? both_cycles(true, false, false, true) : 0.0;
    r.total = both_cycles(true, true, true, true) + r.laser;
    return r;
}

/**
 * Large-momentum approximation of the ξ₁ phase (static per-cycle momenta):
 * μT{ ħk(cosθ₁−cosθ₂) + (ħk)²/2 [ (1−cos²θ₁)/|p₁| + (1−cos²θ₂)/|p₂| ] }.
 */
inline double xi1_phase_large_p(const Vec3& p1, const Vec3& p2,
                                const DispersionParams& params,
                                const ParticleSpec& particle, const RecoilSpec& recoil,
                                double T) {
    const double n1 = p1.norm(), n2 = p2.norm();
    if (n1 == 0.0 || n2 == 0.0)
        throw DomainError("xi1_phase_large_p: momentum magnitudes must be nonzero");
    const double hk = recoil.hk_mag();
    const double c1 = p1.dot(recoil.direction) / n1;
    const double c2 = p2.dot(recoil.direction) / n2;
    const double mu = params.mu(particle);
    return mu * T *
           (hk * (c1 - c2) +
            0.5 * hk * hk * ((1.0 - c1 * c1) / n1 + (1.0 - c2 * c2) / n2));
}

/// Overdamped gravitational limit φ ≃ (1/2x)(1/2 + ln(4 x T̃)), valid for x ≳ 1.
inline double gravity_overdamped_phase(double x, double T_tilde) {
    if (x <= 0.0 || T_tilde <= 0.0)
        throw DomainError("gravity_overdamped_phase: arguments must be positive");
    return (0.5 / x) * (0.5 + std::log(4.0 * x * T_tilde));
}

/// Standard-dispersion gravimeter phase ħk²T/m + k⃗·T[g⃗(T+τ) − Δp_acc/m] + Δφ_laser.
inline double gravimeter_phase(const ParticleSpec& particle, const RecoilSpec& recoil,
                               const TimingSpec& timing, const LaserSpec& laser,
                               const EnvironmentSpec& env, const Vec3& dp_acc) {
    const double m = particle.mass;
    const Vec3 kvec = recoil.direction * recoil.k;
    return constants::hbar * recoil.k * recoil.k * timing.T / m +
           timing.T * kvec.dot(env.g_vec * (timing.T + timing.tau) - dp_acc / m) +
           laser_phase(laser, timing);
}

struct PhaseSpaceArea {
    double area = 0.0;   ///< ∮ p dz [J·s]
    double phase = 0.0;  ///< external interferometer phase [rad]
    double ratio = 0.0;  ///< area / (2 ħ phase)
};

/**
 * Consistency check a_ps = ∮p dz = 2ħ φ_ext for the closed pair. Only valid
 * for the standard dispersion under inertial forces; refuses otherwise.
 */
inline PhaseSpaceArea phase_space_area_check(const Vec3& p0, const ParticleSpec& particle,
                                             const DispersionParams& params,
                                             const RecoilSpec& recoil,
                                             const TimingSpec& timing,
                                             const EnvironmentSpec& env,
                                             double abs_tol = 1e-14, double rel_tol = 1e-12) {
    if (!params.standard())
        throw DomainError("phase_space_area_check: requires the standard dispersion");

    const double m = particle.mass;
    const Vec3 hk = recoil.hk();
    // loop integral along the recoil axis: (1/m)∫ (p_up·k̂)² − (p_low·k̂)² dt
    auto pz = [&](double t, const Vec3& kick) {
        return (p0 + kick - env.g_vec * (m * (t - timing.t0))).dot(recoil.direction);
    };
    auto integrand_cycle = [&](const Vec3& kick) {
        return [&, kick](double t) {
            const double up = pz(t, kick);
            const double lo = pz(t, Vec3::zero());
            return (up * up - lo * lo) / m;
        };
    };
    // upper arm carries +ħk in cycle 1, −ħk in cycle 2; between the cycles
    // both arms coincide in momentum, contributing nothing.
    const double a1 = integrate_adaptive(integrand_cycle(hk), timing.t0, timing.t1(),
                                         abs_tol, rel_tol).value;
    const double a2 = integrate_adaptive(integrand_cycle(-1.0 * hk), timing.t2(), timing.tf(),
                                         abs_tol, rel_tol).value;

    PhaseSpaceArea out;
    out.area = a1 + a2;
    const LaserSpec silent{};
    const PhaseResult pr = closed_pair_phase(p0, particle, params, recoil, timing,
                                             silent, env, abs_tol, rel_tol);
    out.phase = pr.total;
    out.ratio = out.phase != 0.0 ? out.area / (2.0 * constants::hbar * out.phase) : 0.0;
    return out;
}

} // namespace simqg
