#pragma once

/**
 * @file paths.hpp
 * @brief Enumeration of the 2^{n−1} interferometer paths per final internal
 *        state, beam-splitter factors, per-path unitary summaries and fast
 *        pairwise phase-difference evaluators.
 *
 * Geometry: four π/2 pulses at t0, t1, t2, tf; pulses 1–2 kick along the
 * recoil direction, pulses 3–4 along the reversed direction. A transition
 * |g⟩→|e⟩ at a pulse with direction d transfers +ħk·d, |e⟩→|g⟩ transfers
 * −ħk·d. η = (−i)^{k_inv} with k_inv the number of population inversions.
 */

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "config.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "phase.hpp"

namespace simqg {

enum class InternalState : int { Ground = 0, Excited = 1 };

struct Path {
    int index = 0;                       ///< enumeration order within the branch
    std::array<bool, 4> transitions{};   ///< outcome bit per pulse
    std::array<int, 5> states{};         ///< internal state before/after each pulse
    std::array<int, 4> kicks{};          ///< per-pulse kick in units of ħk·direction
    std::array<int, 3> segment_kicks{};  ///< cumulative kick during the 3 segments
    int k_inv = 0;                       ///< number of population inversions
    int p_f_units = 0;                   ///< total momentum gain in ħk units
    InternalState final_state = InternalState::Ground;

    std::complex<double> eta() const {
        static const std::complex<double> table[4] = {
            {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
        return table[k_inv % 4];
    }
};

/**
 * All paths of the four-pulse sequence ending in `final_state`.
 * Only n_pulses = 4 is supported.
 */
inline std::vector<Path> enumerate_paths(int n_pulses, InternalState final_state,
                                         const RecoilSpec& recoil, const TimingSpec& timing,
                                         double second_pair_sign = -1.0) {
    if (n_pulses != 4)
        throw DomainError("enumerate_paths: only the 4-pulse Ramsey-Borde sequence is supported");
    recoil.validate();
    timing.validate();
    const double dir_sign[4] = {1.0, 1.0, second_pair_sign, second_pair_sign};

    std::vector<Path> out;
    out.reserve(8);
    for (int bits = 0; bits < 16; ++bits) {
        Path p;
        int state = 0; // start in |g⟩
        p.states[0] = state;
        int cumulative = 0;
        for (int i = 0; i < 4; ++i) {
            const bool flip = (bits >> i) & 1;
            p.transitions[i] = flip;
            if (flip) {
                const int d = static_cast<int>(dir_sign[i]);
                p.kicks[i] = (state == 0) ? d : -d;
                state = 1 - state;
                ++p.k_inv;
            } else {
                p.kicks[i] = 0;
            }
            p.states[i + 1] = state;
            cumulative += p.kicks[i];
            if (i < 3) p.segment_kicks[i] = cumulative;
        }
        p.p_f_units = cumulative;
        p.final_state = state == 0 ? InternalState::Ground : InternalState::Excited;
        if (p.final_state != final_state) continue;
        p.index = static_cast<int>(out.size());
        out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mean-momentum drive profiles
// ---------------------------------------------------------------------------

/**
 * Deterministic mean-momentum trajectory shared by all paths; the thermal
 * momentum variable rides on top of it. Three linear pieces aligned with the
 * pulse segments.
 */
struct Drive {
    std::array<LinearSegment, 3> segs;

    static Drive none(const TimingSpec& t) {
        return free_fall(Vec3::zero(), Vec3::zero(), 1.0, t);
    }

    /// p(t) = p10 − m g (t − t0) throughout the sequence.
    static Drive free_fall(const Vec3& p10, const Vec3& g, double mass,
                           const TimingSpec& t) {
        Drive d;
        const Vec3 slope = g * (-mass);
        const double knots[4] = {t.t0, t.t1(), t.t2(), t.tf()};
        Vec3 p = p10;
        for (int i = 0; i < 3; ++i) {
            d.segs[i] = LinearSegment{knots[i], knots[i + 1], p, slope};
            p = p + slope * (knots[i + 1] - knots[i]);
        }
        return d;
    }

    /// Constant p10 in cycle 1, symmetric linear flip to p20 during the gap,
    /// constant p20 in cycle 2 (external momentum inversion, no gravity).
    static Drive inversion(const Vec3& p10, const Vec3& p20, const TimingSpec& t) {
        Drive d;
        d.segs[0] = LinearSegment{t.t0, t.t1(), p10, Vec3::zero()};
        const Vec3 slope = t.tau > 0.0 ? (p20 - p10) / t.tau : Vec3::zero();
        d.segs[1] = LinearSegment{t.t1(), t.t2(), p10, slope};
        d.segs[2] = LinearSegment{t.t2(), t.tf(), p20, Vec3::zero()};
        return d;
    }

    Vec3 at(double t) const {
        for (const auto& s : segs)
            if (t <= s.t_end) return s.p_at(t);
        return segs[2].p_at(t);
    }
};

// ---------------------------------------------------------------------------
// Per-path unitary summary
// ---------------------------------------------------------------------------

/// Builds the three-segment momentum schedule of a path seeded with operator
/// argument p: p_path(t) = p + drive(t) + c_seg ħk d̂.
inline MomentumSchedule path_schedule(const Path& path, const Vec3& p,
                                      const Drive& drive, const RecoilSpec& recoil) {
    MomentumSchedule sched;
    for (int s = 0; s < 3; ++s) {
        const LinearSegment& ds = drive.segs[s];
        LinearSegment seg = ds;
        seg.p_start = p + ds.p_start + recoil.hk() * static_cast<double>(path.segment_kicks[s]);
        sched.segments.push_back(seg);
    }
    return sched;
}

struct PathUnitary {
    Vec3 p_f;                    ///< total final momentum gain [kg·m/s]
    double z_f = 0.0;            ///< ħ dφ/dp_z at the reference momentum [m]
    std::complex<double> eta{1.0, 0.0};
    std::function<double(const Vec3&)> phi; ///< φ_j(p) [rad], numerically integrated
};

/**
 * φ_j(p) = (1/ħ) ∫ E(|p_j(t)|) dt over [t0, tf] by adaptive quadrature, plus
 * the per-path laser contribution (zero for the default constant-phase,
 * internal-state-silent convention). z_f by Richardson-extrapolated central
 * differences with step 1e-6 ħk.
 */
inline PathUnitary path_unitary(const Path& path, const Vec3& p_ref,
                                const ParticleSpec& particle, const DispersionParams& params,
                                const RecoilSpec& recoil, const TimingSpec& timing,
                                const Drive& drive,
                                double abs_tol = 1e-12, double rel_tol = 1e-11) {
    PathUnitary u;
    u.p_f = recoil.hk() * static_cast<double>(path.p_f_units);
    u.eta = path.eta();

    const double hk_mag = recoil.hk_mag();
    u.phi = [path, particle, params, recoil, timing, drive, hk_mag, abs_tol,
             rel_tol](const Vec3& p) {
        const MomentumSchedule sched = path_schedule(path, p, drive, recoil);
        NeumaierSum acc;
        for (const auto& seg : sched.segments) {
            if (seg.duration() <= 0.0) continue;
            std::vector<double> breaks;
            detail::near_zero_breakpoints(seg, Vec3::zero(), 1e-3 * hk_mag, breaks);
            auto f = [&](double t) {
                return energy(seg.p_at(t).norm(), particle, params) / constants::hbar;
            };
            acc.add(integrate_adaptive(f, seg.t_start, seg.t_end, abs_tol, rel_tol, breaks)
                        .value);
        }
        return acc.value();
    };

    const double h = 1e-6 * hk_mag;
    const Vec3 ez = recoil.direction;
    auto central = [&](double step) {
        return (u.phi(p_ref + ez * step) - u.phi(p_ref - ez * step)) / (2.0 * step);
    };
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    u.z_f = constants::hbar * (4.0 * d2 - d1) / 3.0;
    return u;
}

// ---------------------------------------------------------------------------
// Pair table
// ---------------------------------------------------------------------------

struct PathPair {
    int i = 0, j = 0;
    Vec3 dp;            ///< p_f^i − p_f^j
    double dz0 = 0.0;   ///< z_f^i − z_f^j (classical separation)
    bool closed = false;
};

/**
 * All i<j pairs with momentum and position separations and closure flags.
 *
 * Δp follows from the integer kick totals; Δz₀ is the standard-dispersion
 * classical separation (ħk/m) Σ_s (c_i,s − c_j,s) L_s, which drops the
 * accelerations common to all paths. Both are exact in the kick bookkeeping,
 * so closure is a structural property rather than a numerical one.
 */
inline std::vector<PathPair> pair_table(const std::vector<Path>& paths,
                                        const ParticleSpec& particle,
                                        const RecoilSpec& recoil, const TimingSpec& timing) {
    const double seg_len[3] = {timing.T, timing.tau, timing.T};
    std::vector<PathPair> pairs;
    pairs.reserve(paths.size() * (paths.size() - 1) / 2);
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            PathPair pr;
            pr.i = static_cast<int>(i);
            pr.j = static_cast<int>(j);
            const int dp_units = paths[i].p_f_units - paths[j].p_f_units;
            pr.dp = recoil.hk() * static_cast<double>(dp_units);
            double dz = 0.0;
            for (int s = 0; s < 3; ++s)
                dz += (paths[i].segment_kicks[s] - paths[j].segment_kicks[s]) * seg_len[s];
            pr.dz0 = dz * recoil.hk_mag() / particle.mass;
            pr.closed = dp_units == 0 && dz == 0.0;
            pairs.push_back(pr);
        }
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Fast pair phase-difference evaluator for ensemble averaging
// ---------------------------------------------------------------------------

/**
 * Δφ_ij(p, Δp) = φ_i(p − Δp/2) − φ_j(p + Δp/2) in closed form.
 *
 * Quadratic (kinetic and ξ₂) parts integrate exactly via
 * |a|²−|b|² = (a−b)·(a+b) with a−b constant per segment; the ξ₁ parts use the
 * analytic antiderivative of |linear-in-t|. No cancellation of large common
 * phases occurs because only differences are ever formed.
 */
class PairPhaseDiff {
public:
    PairPhaseDiff(const Path& pi, const Path& pj, const Vec3& dp,
                  const ParticleSpec& particle, const DispersionParams& params,
                  const RecoilSpec& recoil, const TimingSpec& timing, const Drive& drive,
                  bool include_kinetic = true, bool include_xi1 = true,
                  bool include_xi2 = true)
        : dp_(dp) {
        const double m = particle.mass;
        const double Mp = constants::planck_mass;
        quad_coef_ = ((include_kinetic ? 1.0 / (2.0 * m) : 0.0) +
                      (include_xi2 ? params.xi2 / (2.0 * Mp) : 0.0)) /
                     constants::hbar;
        mu_ = include_xi1 ? params.mu(particle) : 0.0;
        const Vec3 hk = recoil.hk();
        (void)timing;
        for (int s = 0; s < 3; ++s) {
            Seg seg;
            const LinearSegment& ds = drive.segs[s];
            seg.L = ds.duration();
            seg.slope = ds.slope;
            seg.drive0 = ds.p_start;
            seg.off_i = hk * static_cast<double>(pi.segment_kicks[s]) - dp * 0.5;
            seg.off_j = hk * static_cast<double>(pj.segment_kicks[s]) + dp * 0.5;
            segs_[s] = seg;
        }
    }

    /// Δφ at thermal momentum p (the ±Δp/2 displacements are built in).
    double operator()(const Vec3& p) const {
        double acc = 0.0;
        for (const auto& s : segs_) {
            if (s.L <= 0.0) continue;
            const Vec3 ai = p + s.drive0 + s.off_i;
            const Vec3 bj = p + s.drive0 + s.off_j;
            if (quad_coef_ != 0.0) {
                // ∫ (a−b)·(a+b)(t) dt, a+b linear in t
                const Vec3 d = ai - bj;
                const Vec3 sum0 = ai + bj;
                acc += quad_coef_ *
                       (d.dot(sum0) * s.L + d.dot(s.slope) * s.L * s.L);
            }
            if (mu_ != 0.0)
                acc += mu_ * (detail::abs_linear_integral(ai, s.slope, s.L) -
                              detail::abs_linear_integral(bj, s.slope, s.L));
        }
        return acc;
    }

    const Vec3& dp() const { return dp_; }
    bool has_xi1() const { return mu_ != 0.0; }

    /// Exact gradient of the quadratic (kinetic + ξ₂) phase part, which is
    /// affine in p: ∇ = Σ_s 2 c d_s L_s. Without a ξ₁ term the whole Δφ is
    /// affine with this gradient.
    Vec3 quad_gradient() const {
        Vec3 g = Vec3::zero();
        for (const auto& s : segs_)
            if (s.L > 0.0) g += (s.off_i - s.off_j) * (2.0 * quad_coef_ * s.L);
        return g;
    }

    /// Lipschitz bound on the ξ₁ part: |∇| ≤ μ Σ_{d≠0} 2 L_s (each |·|
    /// integral has gradient magnitude at most its duration).
    double xi1_lipschitz() const {
        double acc = 0.0;
        for (const auto& s : segs_)
            if (s.L > 0.0 && (s.off_i - s.off_j).norm2() != 0.0) acc += 2.0 * s.L;
        return mu_ * acc;
    }

private:
    struct Seg {
        double L = 0.0;
        Vec3 drive0, slope, off_i, off_j;
    };
    std::array<Seg, 3> segs_{};
    Vec3 dp_;
    double quad_coef_ = 0.0;
    double mu_ = 0.0;
};

} // namespace simqg
