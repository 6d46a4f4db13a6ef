#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "simqg/paths.hpp"

using namespace simqg;
using namespace simqg::test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const auto diamond50 = ParticleSpec::from_radius(50e-9, presets::diamond_density);
}

TEST_CASE("enumerate_paths structure") {
    const auto recoil = recoil_z(presets::k_raman_637);
    const auto timing = timing_of(100e-6, 20e-6);

    const auto g_paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
    const auto e_paths = enumerate_paths(4, InternalState::Excited, recoil, timing);

    SECTION("eight paths per final state, 28 pairs, 2 closed") {
        CHECK(g_paths.size() == 8);
        CHECK(e_paths.size() == 8);
        const auto pairs = pair_table(g_paths, diamond50, recoil, timing);
        CHECK(pairs.size() == 28);
        int closed = 0;
        for (const auto& pr : pairs) closed += pr.closed ? 1 : 0;
        CHECK(closed == 2);
    }
    SECTION("internal state flips exactly at transitions; kick signs follow the geometry") {
        for (const auto& p : g_paths) {
            int state = 0;
            for (int i = 0; i < 4; ++i) {
                if (p.transitions[i]) {
                    const int dir = i < 2 ? 1 : -1;
                    CHECK(p.kicks[i] == (state == 0 ? dir : -dir));
                    state = 1 - state;
                } else {
                    CHECK(p.kicks[i] == 0);
                }
                CHECK(p.states[i + 1] == state);
            }
            CHECK(state == 0);
        }
    }
    SECTION("eta parity: even inversions for g, odd for e") {
        for (const auto& p : g_paths) {
            CHECK(p.k_inv % 2 == 0);
            const auto eta = p.eta();
            CHECK(eta.imag() == 0.0);
        }
        for (const auto& p : e_paths) {
            CHECK(p.k_inv % 2 == 1);
            const auto eta = p.eta();
            CHECK(eta.real() == 0.0);
        }
    }
    SECTION("final momentum gains are 0 or 2hk for g, +-1hk for e") {
        for (const auto& p : g_paths) CHECK((p.p_f_units == 0 || p.p_f_units == 2));
        for (const auto& p : e_paths) CHECK((p.p_f_units == 1 || p.p_f_units == -1));
    }
    SECTION("unsupported pulse count") {
        CHECK_THROWS_AS(enumerate_paths(3, InternalState::Ground, recoil, timing), DomainError);
    }
}

TEST_CASE("pair table separations") {
    const auto recoil = recoil_z(presets::k_raman_637);
    const auto timing = timing_of(500e-6, 0.0);
    const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
    const auto pairs = pair_table(paths, diamond50, recoil, timing);

    const double hk = recoil.hk_mag();
    const double dz_typ = hk / diamond50.mass * timing.T;

    SECTION("typical open pairs separate by 2hk in momentum or (hk/m)T in position") {
        bool found_dp = false, found_dz = false;
        for (const auto& pr : pairs) {
            if (!pr.closed && std::abs(pr.dp.norm() - 2.0 * hk) < 1e-9 * hk) found_dp = true;
            if (!pr.closed && pr.dp.norm() < 1e-9 * hk &&
                std::abs(std::abs(pr.dz0) - dz_typ) < 1e-6 * dz_typ)
                found_dz = true;
        }
        CHECK(found_dp);
        CHECK(found_dz);
    }
    SECTION("closed pairs have both separations zero") {
        for (const auto& pr : pairs) {
            if (pr.closed) {
                CHECK(pr.dp.norm() < 1e-9 * hk);
                CHECK(std::abs(pr.dz0) < 1e-9 * dz_typ);
            }
        }
    }
}

TEST_CASE("operator oracle: closed-pair phase from path unitaries") {
    const auto recoil = recoil_z(presets::k_raman_637);
    const LaserSpec laser{};

    SECTION("free case reproduces the ideal phase at p = 0") {
        const auto timing = timing_of(80e-6, 10e-6);
        const DispersionParams d{1.0, 0.7};
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const auto drive = Drive::none(timing);

        // lower closed pair: all-transitions vs no-transitions
        const Path* upper = nullptr;
        const Path* lower = nullptr;
        for (const auto& p : paths) {
            if (p.k_inv == 4) upper = &p;
            if (p.k_inv == 0) lower = &p;
        }
        REQUIRE(upper);
        REQUIRE(lower);
        const auto uu = path_unitary(*upper, Vec3::zero(), diamond50, d, recoil, timing, drive,
                                     1e-14, 1e-13);
        const auto ul = path_unitary(*lower, Vec3::zero(), diamond50, d, recoil, timing, drive,
                                     1e-14, 1e-13);
        const double diff = uu.phi(Vec3::zero()) - ul.phi(Vec3::zero());

        const auto analytic = closed_pair_phase(Vec3::zero(), diamond50, d, recoil, timing,
                                                laser, free_env(), 1e-14, 1e-13);
        CHECK_THAT(diff, WithinAbs(analytic.total, 1e-9));
    }

    SECTION("straight-through path: free evolution values") {
        const auto timing = timing_of(100e-6, 30e-6);
        const DispersionParams standard{0.0, 0.0};
        const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
        const auto drive = Drive::none(timing);
        const Path* straight = nullptr;
        for (const auto& p : paths)
            if (p.k_inv == 0) straight = &p;
        REQUIRE(straight);

        const Vec3 p{0.0, 0.0, 3.0 * recoil.hk_mag()};
        const auto u = path_unitary(*straight, p, diamond50, standard, recoil, timing, drive);
        const double expected =
            p.norm2() / (2.0 * diamond50.mass) * timing.total() / constants::hbar;
        CHECK_THAT(u.phi(p), WithinRel(expected, 1e-10));
        CHECK(u.p_f.norm() == 0.0);
        // z_f = hbar dphi/dp_z = p_z t_tot / m
        CHECK_THAT(u.z_f, WithinRel(p.z * timing.total() / diamond50.mass, 1e-8));
    }
}

TEST_CASE("PairPhaseDiff matches quadrature phases") {
    const auto recoil = recoil_z(presets::k_raman_637);
    const auto timing = timing_of(120e-6, 40e-6);
    const DispersionParams d{0.8, -0.3};
    const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
    RandomConfigGen gen(5);

    // keep |p(t)| within ~10 hk so the absolute-phase quadrature route stays
    // accurate enough for a 1e-9 comparison of differences
    const double acc = recoil.hk_mag() / (diamond50.mass * timing.total());
    const Vec3 g{0.0, 2.0 * acc, -4.0 * acc};
    const auto drive = Drive::free_fall({0.0, 0.0, 5.0 * recoil.hk_mag()}, g,
                                        diamond50.mass, timing);

    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t i = static_cast<std::size_t>(gen.uniform(0.0, 7.999));
        std::size_t j = static_cast<std::size_t>(gen.uniform(0.0, 7.999));
        if (j == i) j = (j + 1) % 8;
        const Vec3 dp = recoil.hk() * static_cast<double>(paths[i].p_f_units - paths[j].p_f_units);
        const PairPhaseDiff fast(paths[i], paths[j], dp, diamond50, d, recoil, timing, drive);

        const Vec3 p{gen.uniform(-3, 3) * recoil.hk_mag(), gen.uniform(-3, 3) * recoil.hk_mag(),
                     gen.uniform(-3, 3) * recoil.hk_mag()};
        const auto ui = path_unitary(paths[i], Vec3::zero(), diamond50, d, recoil, timing, drive,
                                     1e-14, 1e-13);
        const auto uj = path_unitary(paths[j], Vec3::zero(), diamond50, d, recoil, timing, drive,
                                     1e-14, 1e-13);
        const double slow = ui.phi(p - dp * 0.5) - uj.phi(p + dp * 0.5);
        CHECK_THAT(fast(p), WithinAbs(slow, 1e-9 * std::max(1.0, std::abs(slow))));
    }
}

TEST_CASE("closed-pair stability phases with gravity parallel to k") {
    // phi^{l/u} = +-hbar k^2 T/m + k g T(T+tau) + 2 mu hbar k T in the
    // designed momentum-inversion regime
    const auto recoil = recoil_z(presets::k_raman_637);
    const auto timing = timing_of(60e-6, 15e-6);
    const DispersionParams d{1.0, 0.0};
    const double m = diamond50.mass;
    const double g = 9.81;
    const double hk = recoil.hk_mag();

    // momentum design: parallel in cycle 1 (p_z(T) = 20 hk > 0), antiparallel
    // by t2 (gravity removes m g tau >> 20 hk during the gap)
    const double p1z = m * g * timing.T + 20.0 * hk;
    const auto drive = Drive::free_fall({0.0, 0.0, p1z}, {0.0, 0.0, g}, m, timing);
    REQUIRE(drive.segs[2].p_start.z < -hk); // antiparallel by t2

    const auto paths = enumerate_paths(4, InternalState::Ground, recoil, timing);
    const Path* p1111 = nullptr;
    const Path* p0000 = nullptr;
    for (const auto& p : paths) {
        if (p.k_inv == 4) p1111 = &p;
        if (p.k_inv == 0) p0000 = &p;
    }
    const PairPhaseDiff lower(*p1111, *p0000, Vec3::zero(), diamond50, d, recoil, timing, drive);
    const double phi_l = lower(Vec3::zero());
    const double expected = constants::hbar * recoil.k * recoil.k * timing.T / m +
                            recoil.k * g * timing.T * (timing.T + timing.tau) +
                            2.0 * d.mu(diamond50) * hk * timing.T;
    CHECK_THAT(phi_l, WithinRel(expected, 1e-10));

    // upper closed pair: find it from the pair table
    const auto pairs = pair_table(paths, diamond50, recoil, timing);
    int upper_i = -1, upper_j = -1;
    for (const auto& pr : pairs) {
        if (pr.closed && !(paths[pr.i].k_inv == 4 && paths[pr.j].k_inv == 0) &&
            !(paths[pr.i].k_inv == 0 && paths[pr.j].k_inv == 4)) {
            upper_i = pr.i;
            upper_j = pr.j;
        }
    }
    REQUIRE(upper_i >= 0);
    const PairPhaseDiff upper(paths[upper_i], paths[upper_j], Vec3::zero(), diamond50, d,
                              recoil, timing, drive);
    const double phi_u = std::abs(upper(Vec3::zero()));
    const double expected_u = std::abs(-constants::hbar * recoil.k * recoil.k * timing.T / m +
                                       recoil.k * g * timing.T * (timing.T + timing.tau) +
                                       2.0 * d.mu(diamond50) * hk * timing.T);
    CHECK_THAT(phi_u, WithinRel(expected_u, 1e-10));
}
