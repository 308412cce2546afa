#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <vector>

#include "dsflow/flow.hpp"
#include "dsflow/verifier.hpp"

using namespace dsflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FlowState state_for(const ProfileGrid& g, int n, int k) {
    return make_flow_state(g, AmbientParams{n}, k);
}

} // namespace

TEST_CASE("slices are stationary points") {
    for (double rho : {0.5, 1.0, 2.0}) {
        for (int n : {2, 3, 5}) {
            const auto st = state_for(ProfileGrid::slice(128, rho), n, std::min(2, n));
            const auto speed = graph_speed(st.snapshot);
            for (double s : speed) CHECK(std::abs(s) <= 1e-13);
        }
    }
}

TEST_CASE("graph speed equals normal speed where the profile is critical") {
    const auto st = state_for(ProfileGrid::cosine(256, 1.0, std::vector<double>{0.0, 0.03}), 2, 2);
    const auto speed = graph_speed(st.snapshot);
    const auto& snap = st.snapshot;
    for (std::size_t j = 0; j < snap.nodes(); ++j) {
        if (std::abs(snap.r_theta[j]) > 1e-14) continue;
        const double normal_speed = snap.theta_fn[j] - 1.0 / snap.F[j];
        CHECK_THAT(speed[j], WithinAbs(normal_speed, 1e-13));
    }
}

TEST_CASE("stable_dt matches the slice closed form and the grid scaling") {
    const double rho = 1.0;
    for (int n : {2, 3, 5}) {
        const auto st = state_for(ProfileGrid::slice(256, rho), n, 2);
        const double dth = st.grid.dtheta();
        // D = 1/(n sinh^2 rho) on slices
        const double expected = 0.2 * dth * dth * n * std::sinh(rho) * std::sinh(rho);
        CHECK_THAT(stable_dt(st.snapshot, dth, 0.2), WithinRel(expected, 1e-12));
    }
    const auto coarse = state_for(ProfileGrid::slice(128, rho), 3, 2);
    const auto fine = state_for(ProfileGrid::slice(256, rho), 3, 2);
    CHECK_THAT(stable_dt(coarse.snapshot, coarse.grid.dtheta(), 0.2),
               WithinRel(4.0 * stable_dt(fine.snapshot, fine.grid.dtheta(), 0.2), 1e-12));
}

TEST_CASE("a slice does not move") {
    auto st = state_for(ProfileGrid::slice(128, 1.0), 3, 2);
    const std::vector<double> r0 = st.grid.r;
    const double dt = stable_dt(st.snapshot, st.grid.dtheta(), 0.2);
    for (int i = 0; i < 100; ++i) st = step(st, dt);
    for (std::size_t j = 0; j < r0.size(); ++j) CHECK(std::abs(st.grid.r[j] - r0[j]) <= 1e-13);
}

TEST_CASE("step is second order in time") {
    // Richardson: integrate to a fixed horizon with dt and dt/2 against a
    // dt/4 reference; the error ratio approaches 2^2.
    const auto g0 = ProfileGrid::cosine(32, 1.0, std::vector<double>{0.0, 0.02});
    const double T = 0.02;
    auto integrate = [&](double dt) {
        auto st = state_for(g0, 2, 2);
        const long steps = std::lround(T / dt);
        for (long i = 0; i < steps; ++i) st = step(st, dt);
        return st.grid.r;
    };
    const double dt0 = 0.002;
    const auto ra = integrate(dt0);
    const auto rb = integrate(dt0 / 2);
    const auto rc = integrate(dt0 / 4);
    double ea = 0.0, eb = 0.0;
    for (std::size_t j = 0; j < ra.size(); ++j) {
        ea = std::max(ea, std::abs(ra[j] - rc[j]));
        eb = std::max(eb, std::abs(rb[j] - rc[j]));
    }
    // with a dt/4 reference the observed ratio for a second-order scheme
    // is (dt^2 - (dt/4)^2) / ((dt/2)^2 - (dt/4)^2) = 5
    const double order = std::log2(ea / eb);
    CHECK(order >= 1.8);
    CHECK(order <= 2.8);
}

TEST_CASE("radial extrema are monotone across accepted steps") {
    auto st = state_for(ProfileGrid::cosine(128, 1.0, std::vector<double>{0.0, 0.05}), 2, 2);
    double max_r = *std::max_element(st.grid.r.begin(), st.grid.r.end());
    double min_r = *std::min_element(st.grid.r.begin(), st.grid.r.end());
    for (int i = 0; i < 400; ++i) {
        st = step(st, stable_dt(st.snapshot, st.grid.dtheta(), 0.2));
        const double mx = *std::max_element(st.grid.r.begin(), st.grid.r.end());
        const double mn = *std::min_element(st.grid.r.begin(), st.grid.r.end());
        CHECK(mx <= max_r + 1e-10);
        CHECK(mn >= min_r - 1e-10);
        max_r = mx;
        min_r = mn;
    }
}

TEST_CASE("oversized steps break down loudly") {
    auto st = state_for(ProfileGrid::cosine(128, 1.0, std::vector<double>{0.0, 0.05}), 2, 2);
    const double dt = stable_dt(st.snapshot, st.grid.dtheta(), 0.2);
    CHECK_THROWS_AS(step(st, 4000.0 * dt), flow_breakdown_error);
    CHECK_THROWS_AS(step(st, -1.0), argument_error);
}

TEST_CASE("evolve terminates immediately on a slice") {
    const auto traj = evolve(state_for(ProfileGrid::slice(128, 1.0), 3, 2), StopCriteria{},
                             MonitorConfig{});
    CHECK(traj.reason == TerminationReason::converged);
    CHECK(traj.records.size() == 1);
    CHECK(traj.records.front().step == 0);
}

TEST_CASE("evolve converges a perturbed slice and keeps its invariants") {
    StopCriteria stop;
    stop.tol_speed = 1e-7;
    stop.tol_osc = 1e-6;
    MonitorConfig mon;
    mon.record_every = 200;
    const auto traj = evolve(
        state_for(ProfileGrid::cosine(64, 1.0, std::vector<double>{0.0, 0.01}), 2, 2), stop, mon);

    REQUIRE(traj.reason == TerminationReason::converged);
    CHECK_FALSE(traj.monitor_violation);
    CHECK(traj.worst_pinch_margin >= -1e-8);
    CHECK(traj.worst_cone_margin >= -1e-8);

    const auto& snap = traj.final_state.snapshot;
    CHECK(snap.osc_r() < 1e-6);
    for (std::size_t j = 0; j < snap.nodes(); ++j)
        CHECK(std::abs(snap.kappa1[j] - snap.kappa2[j]) < 1e-6);

    // end-state self-consistency: B_-1 of the terminal record against the
    // slice value at the terminal radius
    const auto& last = traj.records.back();
    const double r_inf = 0.5 * (last.max_r + last.min_r);
    CHECK_THAT(last.functionals.b(-1), WithinRel(phi_minus1(r_inf, 2), 1e-6));

    // budget-limited variant stops early
    StopCriteria tiny = stop;
    tiny.max_steps = 3;
    const auto part = evolve(
        state_for(ProfileGrid::cosine(64, 1.0, std::vector<double>{0.0, 0.01}), 2, 2), tiny, mon);
    CHECK(part.reason == TerminationReason::max_steps_reached);
    tiny.max_steps = 1'000'000;
    tiny.t_max = 1e-3;
    const auto part2 = evolve(
        state_for(ProfileGrid::cosine(64, 1.0, std::vector<double>{0.0, 0.01}), 2, 2), tiny, mon);
    CHECK(part2.reason == TerminationReason::t_max_reached);
}

TEST_CASE("identical configurations give bit-identical trajectories") {
    auto run = [] {
        StopCriteria stop;
        stop.max_steps = 500;
        MonitorConfig mon;
        mon.record_every = 50;
        return evolve(state_for(ProfileGrid::cosine(64, 1.0, std::vector<double>{0.0, 0.02}), 2, 2),
                      stop, mon);
    };
    const auto a = run();
    const auto b = run();
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].t == b.records[i].t);
        CHECK(std::memcmp(a.records[i].r.data(), b.records[i].r.data(),
                          a.records[i].r.size() * sizeof(double)) == 0);
        CHECK(a.records[i].functionals.b(-1) == b.records[i].functionals.b(-1));
    }
}

TEST_CASE("records land exactly on time marks when record_dt is set") {
    StopCriteria stop;
    stop.t_max = 0.1;
    stop.tol_speed = 1e-30; // force the budget to end the run
    stop.tol_osc = 1e-30;
    MonitorConfig mon;
    mon.record_dt = 0.02;
    const auto traj = evolve(
        state_for(ProfileGrid::cosine(64, 1.0, std::vector<double>{0.0, 0.03}), 2, 2), stop, mon);
    REQUIRE(traj.records.size() >= 5);
    for (std::size_t i = 1; i + 1 < traj.records.size(); ++i)
        CHECK_THAT(traj.records[i].t, WithinAbs(0.02 * static_cast<double>(i), 1e-12));
}

TEST_CASE("variation residuals") {
    SECTION("slice trajectory: both sides vanish") {
        StopCriteria stop;
        stop.tol_speed = 1e-30;
        stop.tol_osc = 1e-30;
        stop.max_steps = 40;
        MonitorConfig mon;
        mon.record_every = 10;
        const auto traj = evolve(state_for(ProfileGrid::slice(64, 1.0), 3, 2), stop, mon);
        REQUIRE(traj.records.size() >= 3);
        const auto res = variation_residuals(traj, 1);
        CHECK(std::abs(res.a0) < 1e-11);
        CHECK(std::abs(res.b_k) < 1e-11);
        CHECK(std::abs(res.b_minus1) < 1e-11);
    }
    SECTION("active run: small residuals with the quotient/mean rate ordering") {
        StopCriteria stop;
        stop.tol_speed = 1e-30;
        stop.tol_osc = 1e-30;
        stop.t_max = 0.1;
        MonitorConfig mon;
        mon.record_dt = 0.02;
        const auto traj = evolve(
            state_for(ProfileGrid::cosine(256, 1.0, std::vector<double>{0.0, 0.05}), 2, 2), stop,
            mon);
        REQUIRE(traj.records.size() >= 4);
        for (std::size_t idx = 1; idx + 1 < std::min<std::size_t>(4, traj.records.size()); ++idx) {
            const auto res = variation_residuals(traj, idx);
            CHECK(res.a0 < 1e-3);
            CHECK(res.b_k < 1e-3);
            CHECK(res.b_minus1 < 1e-3);
            // Newton chain: the quotient rate is dominated by the mean rate
            CHECK(res.b_minus1_rate_quotient <=
                  res.b_minus1_rate_mean + 1e-12 * std::abs(res.b_minus1_rate_mean));
        }
    }
    SECTION("index validation") {
        StopCriteria stop;
        stop.max_steps = 10;
        MonitorConfig mon;
        mon.record_every = 5;
        const auto traj = evolve(
            state_for(ProfileGrid::cosine(64, 1.0, std::vector<double>{0.0, 0.02}), 2, 2), stop,
            mon);
        CHECK_THROWS_AS(variation_residuals(traj, 0), argument_error);
        CHECK_THROWS_AS(variation_residuals(traj, traj.records.size() - 1), argument_error);
    }
}
