#pragma once

// Shared builders for test configurations.

#include <random>

#include "simqg/config.hpp"
#include "simqg/dispersion.hpp"

namespace simqg::test {

inline RecoilSpec recoil_z(double k) {
    RecoilSpec r;
    r.k = k;
    r.direction = Vec3::unit_z();
    return r;
}

inline TimingSpec timing_of(double T, double tau = 0.0) {
    TimingSpec t;
    t.T = T;
    t.tau = tau;
    return t;
}

inline EnvironmentSpec free_env() { return EnvironmentSpec{}; }

inline EnvironmentSpec gravity_env(const Vec3& g) {
    EnvironmentSpec e;
    e.g_vec = g;
    return e;
}

/// Random-but-bounded interferometer configuration; phases stay below a few
/// thousand radians so analytic-vs-quadrature comparisons are meaningful at
/// the 1e-9 rad level.
struct RandomConfigGen {
    std::mt19937_64 rng;
    explicit RandomConfigGen(std::uint64_t seed) : rng(seed) {}

    double log_uniform(double lo, double hi) {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng));
    }
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> u(lo, hi);
        return u(rng);
    }

    ParticleSpec particle() { return ParticleSpec::explicit_mass(log_uniform(1e-25, 1e-18)); }
    RecoilSpec recoil() { return recoil_z(log_uniform(5e6, 5e7)); }

    TimingSpec timing(const ParticleSpec& p, const RecoilSpec& r) {
        // cap the zero-order phase at ~2e3 rad
        const double f0 = constants::hbar * r.k * r.k / p.mass;
        const double Tmax = std::min(1e-2, 2e3 / f0);
        TimingSpec t;
        t.T = log_uniform(1e-7, Tmax);
        t.tau = uniform(0.0, 0.5) * t.T;
        return t;
    }

    DispersionParams dispersion() {
        return DispersionParams{uniform(-1.5, 1.5), uniform(-1.5, 1.5)};
    }
};

} // namespace simqg::test
