#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "simqg/thermal.hpp"

using namespace simqg;
using namespace simqg::test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const auto diamond5 = ParticleSpec::from_radius(5e-9, presets::diamond_density);
const auto diamond50 = ParticleSpec::from_radius(50e-9, presets::diamond_density);

EnvironmentSpec trap_env(double temperature, double omega = 2.0 * M_PI) {
    EnvironmentSpec env;
    env.temperature = temperature;
    env.trap_freqs = {omega, omega, omega};
    return env;
}

ThermalState one_d_state(double sigma_p, double p0) {
    ThermalState st;
    st.sigma_p2 = {0.0, 0.0, sigma_p * sigma_p};
    st.sigma_z2 = {0.0, 0.0,
                   constants::hbar * constants::hbar / (4.0 * sigma_p * sigma_p)};
    st.mean_p = {0.0, 0.0, p0};
    return st;
}
} // namespace

TEST_CASE("thermal_state") {
    SECTION("ground state at zero temperature") {
        const auto st = thermal_state(diamond5, trap_env(0.0, 2.0 * M_PI * 1e3));
        CHECK(st.nbar.z == 0.0);
        CHECK_THAT(st.sigma_p2.z,
                   WithinRel(0.5 * diamond5.mass * 2.0 * M_PI * 1e3 * constants::hbar, 1e-12));
        // minimum uncertainty product
        CHECK_THAT(std::sqrt(st.sigma_p2.z * st.sigma_z2.z),
                   WithinRel(0.5 * constants::hbar, 1e-12));
    }
    SECTION("uncertainty product is (hbar/2)(2n+1)") {
        const auto st = thermal_state(diamond5, trap_env(1e-4, 2.0 * M_PI * 1e5));
        const double expected = 0.5 * constants::hbar * (2.0 * st.nbar.z + 1.0);
        CHECK_THAT(std::sqrt(st.sigma_p2.z * st.sigma_z2.z), WithinRel(expected, 1e-12));
    }
    SECTION("Boltzmann limit sigma_p^2 -> m kB T") {
        const auto st = thermal_state(diamond5, trap_env(1e-3));
        CHECK_THAT(st.sigma_p2.z,
                   WithinRel(diamond5.mass * constants::k_B * 1e-3, 1e-6));
    }
    SECTION("paper table anchors in recoil units") {
        const auto raman = recoil_z(presets::k_raman_637);
        const double hk = raman.hk_mag();
        const auto st5 = thermal_state(diamond5, trap_env(4e-6));
        CHECK_THAT(std::sqrt(st5.sigma_p2.z) / hk, WithinRel(153.0, 0.10));
        const auto st50 = thermal_state(diamond50, trap_env(1e-3));
        CHECK_THAT(std::sqrt(st50.sigma_p2.z) / hk, WithinRel(8e4, 0.10));
    }
}

TEST_CASE("coherence_element") {
    const auto st = thermal_state(diamond5, trap_env(1e-5, 2.0 * M_PI * 1e4));
    const double sp = std::sqrt(st.sigma_p2.z);

    SECTION("diagonal integrates to one") {
        auto f = [&](double p) { return coherence_element(st, p, 0.0); };
        const double total = integrate_adaptive(f, -12.0 * sp, 12.0 * sp, 1e-12, 1e-11).value;
        CHECK_THAT(total, WithinAbs(1.0, 1e-10));
    }
    SECTION("maximal over p at p = -dp/2") {
        // dp small enough that the momentum-overlap factor stays finite
        const double dp = 0.05 * sp;
        const double peak = coherence_element(st, -0.5 * dp, dp);
        CHECK(peak > 0.0);
        CHECK(peak > coherence_element(st, -0.5 * dp + 0.3 * sp, dp));
        CHECK(peak > coherence_element(st, -0.5 * dp - 0.3 * sp, dp));
    }
    SECTION("high-temperature limit approaches the Boltzmann density") {
        const auto hot = thermal_state(diamond5, trap_env(1.0));
        const double boltz_var = diamond5.mass * constants::k_B * 1.0;
        CHECK_THAT(coherence_element(hot, 0.0, 0.0),
                   WithinRel(1.0 / std::sqrt(2.0 * M_PI * boltz_var), 1e-5));
    }
}

TEST_CASE("visibility factors and effective separation") {
    SECTION("both factors are one at zero separation") {
        const auto st = thermal_state(diamond50, trap_env(1e-3, 2.0 * M_PI * 165e3));
        const auto v = visibility_factors(st, 0.0, 0.0);
        CHECK(v.V_dz == 1.0);
        CHECK(v.V_dp == 1.0);
    }
    SECTION("paper anchor: 50 nm, 165 kHz trap, 1 mK, T = 500 us") {
        const auto st = thermal_state(diamond50, trap_env(1e-3, 2.0 * M_PI * 165e3));
        const auto raman = recoil_z(presets::k_raman_637);
        const double dz = raman.hk_mag() / diamond50.mass * 500e-6;
        CHECK_THAT(dz, WithinRel(0.6e-12, 0.10));
        const auto v = visibility_factors(st, dz, 2.0 * raman.hk_mag());
        CHECK_THAT(v.V_dz, WithinAbs(0.70, 0.05));
        CHECK(v.V_dp > 0.999);
    }
    SECTION("dz = dz_r decays to 1/e") {
        const auto st = thermal_state(diamond50, trap_env(1e-3, 2.0 * M_PI * 165e3));
        const auto v0 = visibility_factors(st, 0.0, 0.0);
        const auto v = visibility_factors(st, v0.dz_r, 0.0);
        CHECK_THAT(v.V_dz, WithinRel(std::exp(-1.0), 1e-12));
    }
    SECTION("effective separation") {
        CHECK(effective_separation(1e-12, 0.0, diamond50, 1e-3) == 1e-12);
        const double dp = 2e-27;
        const double dz0 = dp / diamond50.mass * 1.1e-3;
        CHECK_THAT(effective_separation(dz0, dp, diamond50, 1.1e-3), WithinAbs(0.0, 1e-30));
    }
}

TEST_CASE("interference elements") {
    const auto recoil = recoil_z(presets::k_raman_637);
    const auto timing = timing_of(40e-6, 10e-6);
    NumericsSpec num;
    num.quadrature_order = 48;

    SECTION("closed pairs have unit modulus at any temperature (standard dispersion)") {
        const DispersionParams standard{0.0, 0.0};
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const auto pairs = pair_table(paths, diamond50, recoil, timing);
        for (double temp : {0.0, 1e-3, 10.0}) {
            auto st = thermal_state(diamond50, trap_env(temp, 2.0 * M_PI * 165e3));
            const auto drive = Drive::none(timing);
            const ThermalAverager avg(st, num, resolve_average_method(st, recoil, drive));
            for (const auto& pr : pairs) {
                if (!pr.closed) continue;
                const auto el = interference_element(paths[pr.i], paths[pr.j], st, diamond50,
                                                     standard, recoil, timing, drive, avg);
                CHECK_THAT(std::abs(el.value), WithinAbs(1.0, 1e-10));
                CHECK_THAT(std::arg(el.value),
                           WithinAbs(-std::remainder(el.phase, 2.0 * M_PI), 1e-9));
            }
        }
    }

    SECTION("affine phase case matches the closed-form visibility product") {
        // standard dispersion: Delta-phi is affine in p, so
        // |element| = V_dp * exp(-dz^2 sigma_p^2 / (2 hbar^2))
        const DispersionParams standard{0.0, 0.0};
        const auto st = thermal_state(diamond50, trap_env(1e-3, 2.0 * M_PI * 165e3));
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const auto pairs = pair_table(paths, diamond50, recoil, timing);
        const auto drive = Drive::none(timing);
        const ThermalAverager avg(st, num, resolve_average_method(st, recoil, drive));
        int checked = 0;
        for (const auto& pr : pairs) {
            const auto el = interference_element(paths[pr.i], paths[pr.j], st, diamond50,
                                                 standard, recoil, timing, drive, avg);
            const double dz = effective_separation(pr.dz0, pr.dp.z, diamond50, timing.total());
            const auto vis = visibility_factors(st, dz, pr.dp.z);
            CHECK_THAT(std::abs(el.value), WithinAbs(vis.V_dz * vis.V_dp, 1e-8));
            ++checked;
        }
        CHECK(checked == 28);
    }

    SECTION("quadrature and Monte-Carlo estimates agree within 3 sigma") {
        const DispersionParams d{1.0, 0.0};
        // moderate spread so both estimators converge well
        EnvironmentSpec env = trap_env(0.0, 2.0 * M_PI * 1e2);
        auto st = thermal_state(diamond5, env);
        const double hk = recoil.hk_mag();
        st.sigma_p2 = {4.0 * hk * hk, 4.0 * hk * hk, 4.0 * hk * hk};
        st.mean_p = {0.0, 0.0, 3.0 * hk};
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const auto drive = Drive::none(timing);
        const ThermalAverager avg(st, num, resolve_average_method(st, recoil, drive));
        int trials = 0;
        for (std::size_t i = 0; i < paths.size() && trials < 6; ++i)
            for (std::size_t j = i + 1; j < paths.size() && trials < 6; j += 3) {
                const Vec3 dp = recoil.hk() *
                                static_cast<double>(paths[i].p_f_units - paths[j].p_f_units);
                const PairPhaseDiff diff(paths[i], paths[j], dp, diamond5, d, recoil, timing,
                                         drive);
                const auto q = avg.phase_average(diff);
                const auto mc = avg.phase_average_mc(diff, 200000, 12345 + trials);
                CHECK(std::abs(q.real() - mc.value.real()) < 3.0 * mc.se_re + 1e-12);
                CHECK(std::abs(q.imag() - mc.value.imag()) < 3.0 * mc.se_im + 1e-12);
                ++trials;
            }
        CHECK(trials == 6);
    }
}

TEST_CASE("populations") {
    const auto recoil = recoil_z(presets::k_raman_637);
    NumericsSpec num;
    num.quadrature_order = 48;

    SECTION("instantaneous sequence returns the particle to the ground state") {
        const auto timing = timing_of(1e-15);
        const auto st = thermal_state(diamond50, trap_env(1e-3, 2.0 * M_PI * 165e3));
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const double pg = total_population(paths, st, diamond50, DispersionParams{1.0, 0.0},
                                           recoil, timing, Drive::none(timing), num);
        CHECK_THAT(pg, WithinAbs(1.0, 1e-9));
    }

    SECTION("hot: open pairs die, the two closed pairs double the contrast") {
        const auto timing = timing_of(500e-6);
        const auto st = thermal_state(diamond5, trap_env(10.0, 2.0 * M_PI * 165e3));
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const DispersionParams standard{0.0, 0.0};
        const double pg = total_population(paths, st, diamond5, standard, recoil, timing,
                                           Drive::none(timing), num);
        // closed pairs are state independent, so the hot limit is the
        // closed-paths population, not 1/2
        const auto ph = closed_pair_phases_analytic(diamond5, standard, recoil, timing,
                                                    Vec3::zero(), Vec3::zero());
        CHECK_THAT(pg, WithinAbs(closed_paths_population(ph.lower, ph.upper), 1e-9));
    }

    SECTION("all interference suppressed: population-only limit 1/2") {
        // free thermal particle with a xi1 term in the maximally decohering
        // regime sigma ~ hk and a long evolution: even the closed-pair phases
        // average out. Monte-Carlo handles the fast phase oscillation.
        const auto particle = ParticleSpec::explicit_mass(1e-21);
        const DispersionParams d{1.0, 0.0};
        const double hk = recoil.hk_mag();
        const double mu_hk = d.mu(particle) * hk;
        const auto timing = timing_of(500.0 / (2.0 * mu_hk)); // T-tilde = 500
        ThermalState st;
        st.sigma_p2 = {hk * hk, hk * hk, hk * hk};
        st.sigma_z2 = {1e4 * constants::hbar * constants::hbar / (hk * hk),
                       1e4 * constants::hbar * constants::hbar / (hk * hk),
                       1e4 * constants::hbar * constants::hbar / (hk * hk)};
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const auto drive = Drive::none(timing);
        const ThermalAverager avg(st, num, resolve_average_method(st, recoil, drive));
        const double pg = branch_population_mc(paths, st, particle, d, recoil, timing,
                                               drive, avg, 150000, 777);
        CHECK_THAT(pg, WithinAbs(0.5, 0.01));
    }

    SECTION("unitarity: ground and excited branches sum to one") {
        const auto timing = timing_of(30e-6, 5e-6);
        const DispersionParams d{1.0, 0.4};
        auto st = thermal_state(diamond5, trap_env(0.0, 2.0 * M_PI * 500.0));
        const double hk = recoil.hk_mag();
        st.sigma_p2 = {hk * hk, hk * hk, hk * hk};
        st.sigma_z2 = {0.25 * constants::hbar * constants::hbar / (hk * hk),
                       0.25 * constants::hbar * constants::hbar / (hk * hk),
                       0.25 * constants::hbar * constants::hbar / (hk * hk)};
        st.mean_p = {0.0, 0.0, 1.3 * hk};
        const auto g_paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const auto e_paths = enumerate_paths(4, InternalState::Excited, recoil, timing);
        const auto drive = Drive::none(timing);
        const ThermalAverager avg(st, num, resolve_average_method(st, recoil, drive));
        const double pg = branch_population(g_paths, st, diamond5, d, recoil, timing, drive, avg);
        const double pe = branch_population(e_paths, st, diamond5, d, recoil, timing, drive, avg);
        CHECK_THAT(pg + pe, WithinAbs(1.0, 1e-8));
        CHECK(pg >= -1e-9);
        CHECK(pe >= -1e-9);
    }

    SECTION("split-step wavefunction oracle at zero temperature") {
        const auto particle = ParticleSpec::explicit_mass(1e-22);
        const auto rec = recoil_z(2e7);
        const double hk = rec.hk_mag();
        const DispersionParams d{1.0, 0.3};
        const auto timing = timing_of(5e-3, 1e-3);
        const double sigma_p = 0.8 * hk;
        const double p0 = 3.0 * hk;

        const auto oracle = split_step_populations(particle, d, rec, timing, sigma_p, p0);
        CHECK_THAT(oracle.p_g + oracle.p_e, WithinAbs(1.0, 1e-12));

        const auto st = one_d_state(sigma_p, p0);
        const auto g_paths = enumerate_paths(4, InternalState::Ground, rec, timing);
        const double pg = total_population(g_paths, st, particle, d, rec, timing,
                                           Drive::none(timing), num);
        CHECK_THAT(pg, WithinAbs(oracle.p_g, 1e-6));

        const auto e_paths = enumerate_paths(4, InternalState::Excited, rec, timing);
        const double pe = total_population(e_paths, st, particle, d, rec, timing,
                                           Drive::none(timing), num);
        CHECK_THAT(pe, WithinAbs(oracle.p_e, 1e-6));
    }

    SECTION("closed-paths population formula") {
        CHECK_THAT(closed_paths_population(0.0, 0.0), WithinRel(0.75, 1e-15));
        CHECK_THAT(closed_paths_population(M_PI, M_PI), WithinRel(0.25, 1e-15));
        // nanodiamond: phi_l ~ phi_u doubles the fringe contrast vs a single pair
        const auto timing = timing_of(100e-6);
        const DispersionParams d{1.0, 0.0};
        const auto ph = closed_pair_phases_analytic(diamond50, d, recoil, timing,
                                                    Vec3::zero(), Vec3::zero());
        const double split = std::abs(ph.lower - ph.upper); // 2 hbar k^2 T / m
        CHECK(split < 2e-3 * std::abs(ph.lower));
    }
}

TEST_CASE("frequency distribution regimes") {
    const auto recoil = recoil_z(presets::k_raman_637);
    const double hk = recoil.hk_mag();
    auto state_with_sigma = [&](double sigma_tilde) {
        ThermalState st;
        st.sigma_p2 = {0.0, 0.0, sigma_tilde * sigma_tilde * hk * hk};
        return st;
    };
    auto mass_near = [](const FrequencyDistribution& f, double x0, double window) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.x.size(); ++i)
            if (std::abs(f.x[i] - x0) < window) m += f.density[i] * f.bin_width;
        return m;
    };

    SECTION("sigma << 1 concentrates at x = 1") {
        const auto f = frequency_distribution(state_with_sigma(0.02), recoil,
                                              RecoilOrientation::Perpendicular);
        CHECK(mass_near(f, 1.0, 0.05) > 0.95);
    }
    SECTION("sigma >> 1 concentrates at x = 0") {
        const auto f = frequency_distribution(state_with_sigma(50.0), recoil,
                                              RecoilOrientation::Perpendicular);
        CHECK(mass_near(f, 0.0, 0.06) > 0.85);
        CHECK(mass_near(f, 1.0, 0.2) < 0.01);
    }
    SECTION("sigma ~ 1 spreads over [0, 1]") {
        const auto f = frequency_distribution(state_with_sigma(1.0), recoil,
                                              RecoilOrientation::Perpendicular);
        const double lo = mass_near(f, 0.25, 0.25);
        const double hi = mass_near(f, 0.75, 0.25);
        CHECK(lo > 0.15);
        CHECK(hi > 0.15);
    }
    SECTION("total mass is normalized") {
        const auto f = frequency_distribution(state_with_sigma(2.0), recoil,
                                              RecoilOrientation::Parallel);
        double total = 0.0;
        for (double dens : f.density) total += dens * f.bin_width;
        CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("T2 envelope") {
    const auto recoil = recoil_z(presets::k_raman_637);
    NumericsSpec num;
    num.quadrature_order = 64;
    const DispersionParams d{1.0, 0.0};

    SECTION("5 nm diamond at 4 uK lands near the quoted coherence time") {
        const auto st = thermal_state(diamond5, trap_env(4e-6));
        const double mu_hk = d.mu(diamond5) * recoil.hk_mag();
        const double sigma_tilde = std::sqrt(st.sigma_p2.z) / recoil.hk_mag();
        const auto res = find_t2(st, diamond5, d, recoil, EnvironmentSpec{}, num,
                                 sigma_tilde / mu_hk);
        REQUIRE(res.crossed);
        CHECK(res.T2 > 3.2 / 3.0);
        CHECK(res.T2 < 3.2 * 3.0);
    }
    SECTION("at fixed sigma-tilde the coherence time scales as 1/m") {
        auto run = [&](double mass_scale) {
            const auto particle = ParticleSpec::explicit_mass(1e-21 * mass_scale);
            ThermalState st;
            const double hk = recoil.hk_mag();
            st.sigma_p2 = {25.0 * hk * hk, 25.0 * hk * hk, 25.0 * hk * hk};
            const DispersionParams dd{1.0, 0.0};
            const double mu_hk = dd.mu(particle) * hk;
            return find_t2(st, particle, dd, recoil, EnvironmentSpec{}, num, 5.0 / mu_hk).T2;
        };
        const double t1 = run(1.0);
        const double t4 = run(4.0);
        CHECK_THAT(t1 / t4, WithinRel(4.0, 1e-6));
    }
    SECTION("grid validation") {
        const auto st = thermal_state(diamond5, trap_env(4e-6));
        CHECK_THROWS_AS(t2_envelope(st, diamond5, d, recoil, EnvironmentSpec{}, {}, num),
                        DomainError);
        CHECK_THROWS_AS(
            t2_envelope(st, diamond5, d, recoil, EnvironmentSpec{}, {1.0, 0.5}, num),
            DomainError);
    }
}
