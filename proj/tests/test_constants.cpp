#include <catch2/catch_amalgamated.hpp>

#include "simqg/config.hpp"
#include "simqg/constants.hpp"
#include "simqg/dispersion.hpp"

using namespace simqg;
using Catch::Matchers::WithinRel;

TEST_CASE("Planck-scale derived constants are self-consistent") {
    using namespace constants;
    CHECK_THAT(planck_mass, WithinRel(std::sqrt(hbar * c / G), 1e-12));
    CHECK_THAT(planck_length, WithinRel(hbar / (planck_mass * c), 1e-12));
    // order-of-magnitude sanity against the usual quoted values
    CHECK_THAT(planck_mass, WithinRel(2.176e-8, 1e-3));
    CHECK_THAT(planck_length, WithinRel(1.616e-35, 1e-3));
    CHECK_THAT(hbar, WithinRel(h_planck / (2.0 * M_PI), 1e-12));
}

TEST_CASE("particle_from_radius") {
    SECTION("50 nm diamond") {
        const auto p = particle_from_radius(50e-9, 3510.0);
        CHECK_THAT(p.mass, WithinRel(1.8378e-18, 1e-3));
    }
    SECTION("5 nm diamond is about 1e6 amu") {
        const auto p = particle_from_radius(5e-9, 3510.0);
        CHECK_THAT(p.mass, WithinRel(1.8378e-21, 1e-3));
        CHECK(p.mass / constants::amu > 0.9e6);
        CHECK(p.mass / constants::amu < 1.3e6);
    }
    SECTION("mass is exactly (4/3) pi r^3 rho") {
        const double r = 13.7e-9, rho = 2900.0;
        const auto p = particle_from_radius(r, rho);
        CHECK(p.mass == (4.0 / 3.0) * M_PI * r * r * r * rho);
    }
    SECTION("continuity toward zero radius") {
        CHECK(particle_from_radius(1e-12, 3510.0).mass < 1e-29);
    }
    SECTION("non-positive inputs rejected") {
        CHECK_THROWS_AS(particle_from_radius(0.0, 3510.0), DomainError);
        CHECK_THROWS_AS(particle_from_radius(5e-9, -1.0), DomainError);
    }
}

TEST_CASE("dimensionless groups") {
    RecoilSpec recoil;
    recoil.k = 2e7;
    TimingSpec timing;
    timing.T = 500e-6;
    EnvironmentSpec env;
    env.g_vec = {0.0, 0.0, -9.81};
    env.temperature = 1e-3;
    env.trap_freqs = {2.0 * M_PI, 2.0 * M_PI, 2.0 * M_PI};
    DispersionParams disp{1.0, 0.0};

    SECTION("x matches the quoted gravitational ratio and is mass independent") {
        const auto pA = ParticleSpec::atom_preset("Cs");
        const auto pB = particle_from_radius(5e-9, 3510.0);
        const auto pC = particle_from_radius(50e-9, 3510.0);
        const double xA = dimensionless_groups(pA, recoil, timing, env, disp).x;
        const double xB = dimensionless_groups(pB, recoil, timing, env, disp).x;
        const double xC = dimensionless_groups(pC, recoil, timing, env, disp).x;
        CHECK_THAT(xA, WithinRel(1.7e4, 0.05));
        CHECK(xA == xB);
        CHECK(xA == xC);
    }
    SECTION("x vanishes without gravity") {
        env.g_vec = Vec3::zero();
        const auto p = particle_from_radius(5e-9, 3510.0);
        CHECK(dimensionless_groups(p, recoil, timing, env, disp).x == 0.0);
    }
    SECTION("Cs at 1 mK has sigma-tilde near 27") {
        RecoilSpec raman;
        raman.k = presets::k_raman_637;
        const auto cs = ParticleSpec::atom_preset("Cs");
        const auto g = dimensionless_groups(cs, raman, timing, env, disp);
        CHECK_THAT(g.sigma_tilde, WithinRel(27.0, 0.10));
    }
    SECTION("sigma-tilde scales as sqrt(m) in the Boltzmann limit") {
        env.temperature = 1.0; // deep Boltzmann regime for any trap here
        const auto p1 = ParticleSpec::explicit_mass(1e-20);
        const auto p4 = ParticleSpec::explicit_mass(4e-20);
        const double s1 = dimensionless_groups(p1, recoil, timing, env, disp).sigma_tilde;
        const double s4 = dimensionless_groups(p4, recoil, timing, env, disp).sigma_tilde;
        CHECK_THAT(s4 / s1, WithinRel(2.0, 1e-9));
    }
    SECTION("T-tilde is linear in the mass") {
        const auto p1 = ParticleSpec::explicit_mass(1e-20);
        const auto p3 = ParticleSpec::explicit_mass(3e-20);
        const double t1 = dimensionless_groups(p1, recoil, timing, env, disp).T_tilde;
        const double t3 = dimensionless_groups(p3, recoil, timing, env, disp).T_tilde;
        CHECK_THAT(t3 / t1, WithinRel(3.0, 1e-12));
    }
}

TEST_CASE("config JSON round trip and digest") {
    Config cfg;
    cfg.particle = ParticleSpec::atom_preset("Cs");
    cfg.recoil.k = presets::k_raman_637;
    cfg.timing.T = 1e-3;
    cfg.timing.tau = 2e-4;
    cfg.environment.temperature = 4e-6;
    cfg.xi1 = 1.0;
    cfg.numerics.seed = 42;

    const auto j = config_to_json(cfg);
    const Config back = config_from_json(j);
    CHECK(back.particle.mass == cfg.particle.mass);
    CHECK(back.recoil.k == cfg.recoil.k);
    CHECK(back.timing.tau == cfg.timing.tau);
    CHECK(config_digest(back) == config_digest(cfg));

    Config other = cfg;
    other.numerics.seed = 43;
    CHECK(config_digest(other) != config_digest(cfg));
}

TEST_CASE("config validation errors") {
    nlohmann::json j;
    j["particle"] = {{"kind", "nanodiamond"}, {"radius_m", -1.0}};
    CHECK_THROWS(config_from_json(j));
    nlohmann::json j2;
    j2["recoil"] = {{"direction", {0.0, 0.0, 0.0}}};
    CHECK_THROWS_AS(config_from_json(j2), ConfigError);
    nlohmann::json j3;
    j3["timing"] = {{"T_s", -5.0}};
    CHECK_THROWS_AS(config_from_json(j3), DomainError);
}
