#pragma once

// Explicit time integration of the graph equation
//   dr/dt = lambda/lambda' - upsilon/F
// with adaptive stability control, invariant monitoring, convergence
// detection and first-variation residual checks along the trajectory.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsflow/functionals.hpp"
#include "dsflow/geometry.hpp"

namespace dsflow {

/// Pointwise speed of the radial graph: lambda/lambda' - upsilon/F.
inline std::vector<double> graph_speed(const GeometrySnapshot& snap) {
    std::vector<double> s(snap.nodes());
    for (std::size_t j = 0; j < s.size(); ++j)
        s[j] = snap.lambda[j] / snap.lambda_prime[j] - snap.upsilon[j] / snap.F[j];
    return s;
}

inline double max_abs_speed(const GeometrySnapshot& snap) {
    double m = 0.0;
    for (std::size_t j = 0; j < snap.nodes(); ++j)
        m = std::max(m, std::abs(snap.lambda[j] / snap.lambda_prime[j] -
                                 snap.upsilon[j] / snap.F[j]));
    return m;
}

/// Stability bound for the explicit step: safety * dtheta^2 / max_j D_j with
/// principal diffusivity D = (dF/dkappa1) / (F^2 lambda^2 upsilon^2), the
/// coefficient of r_theta2 in the linearized speed.
inline double stable_dt(const GeometrySnapshot& snap, double dtheta, double safety) {
    double dmax = 0.0;
    for (std::size_t j = 0; j < snap.nodes(); ++j) {
        const double denom = snap.F[j] * snap.F[j] * snap.lambda[j] * snap.lambda[j] *
                             snap.upsilon[j] * snap.upsilon[j];
        dmax = std::max(dmax, snap.dF_dkappa1[j] / denom);
    }
    return safety * dtheta * dtheta / dmax;
}

struct FlowStats {
    long step_count = 0;
    double last_dt = 0.0;
    double last_max_speed = 0.0;
};

struct FlowState {
    double t = 0.0;
    ProfileGrid grid;
    GeometrySnapshot snapshot;
    FlowStats stats;
    AmbientParams ambient;
    int k = 2;
    Tolerances tol;
};

inline FlowState make_flow_state(ProfileGrid grid, const AmbientParams& ambient, int k,
                                 const Tolerances& tol = {}) {
    FlowState st;
    st.snapshot = compute_snapshot(grid, ambient, k, tol);
    st.grid = std::move(grid);
    st.ambient = ambient;
    st.k = k;
    st.tol = tol;
    return st;
}

namespace detail {

inline GeometrySnapshot snapshot_or_breakdown(const ProfileGrid& g, const AmbientParams& amb,
                                              int k, const Tolerances& tol) {
    try {
        return compute_snapshot(g, amb, k, tol);
    } catch (const spacelike_error& e) {
        throw flow_breakdown_error(std::string("flow breakdown: ") + e.what(), e.margin);
    } catch (const degeneracy_error& e) {
        throw flow_breakdown_error(std::string("flow breakdown: ") + e.what(), e.margin);
    } catch (const argument_error& e) {
        throw flow_breakdown_error(std::string("flow breakdown: ") + e.what());
    }
}

} // namespace detail

/// One explicit midpoint (RK2) step. Throws flow_breakdown_error, carrying
/// the offending margin, if either stage leaves the admissible class.
inline FlowState step(const FlowState& state, double dt) {
    if (!(dt > 0.0)) throw argument_error("time step must be positive");
    const std::size_t m = state.grid.r.size();

    const auto s1 = graph_speed(state.snapshot);
    ProfileGrid mid = state.grid;
    for (std::size_t j = 0; j < m; ++j) mid.r[j] += 0.5 * dt * s1[j];
    const GeometrySnapshot mid_snap =
        detail::snapshot_or_breakdown(mid, state.ambient, state.k, state.tol);

    const auto s2 = graph_speed(mid_snap);
    FlowState next;
    next.grid = state.grid;
    for (std::size_t j = 0; j < m; ++j) next.grid.r[j] += dt * s2[j];
    next.snapshot = detail::snapshot_or_breakdown(next.grid, state.ambient, state.k, state.tol);
    next.t = state.t + dt;
    next.ambient = state.ambient;
    next.k = state.k;
    next.tol = state.tol;
    next.stats.step_count = state.stats.step_count + 1;
    next.stats.last_dt = dt;
    next.stats.last_max_speed = max_abs_speed(next.snapshot);
    return next;
}

struct StopCriteria {
    double tol_speed = 1e-8;
    double tol_osc = 1e-6;
    double t_max = 1e4;
    long max_steps = 1'000'000;

    bool operator==(const StopCriteria&) const = default;
};

struct MonitorConfig {
    bool check_pinching = true;
    bool check_cone = true;
    double violation_tol = 1e-8;   // margins below -tol flag the run
    bool abort_on_violation = false;
    long record_every = 100;       // steps between records (ignored if record_dt > 0)
    double record_dt = 0.0;        // time between records; steps land on marks exactly

    bool operator==(const MonitorConfig&) const = default;
};

enum class TerminationReason { converged, t_max_reached, max_steps_reached, breakdown };

inline const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::converged: return "converged";
        case TerminationReason::t_max_reached: return "t-max-reached";
        case TerminationReason::max_steps_reached: return "max-steps-reached";
        case TerminationReason::breakdown: return "breakdown";
    }
    return "unknown";
}

struct TrajectoryRecord {
    double t = 0.0;
    long step = 0;
    std::vector<double> r;
    FunctionalRecord functionals;
    double dt = 0.0;        // dt in force when the record was taken
    double max_speed = 0.0;
    double max_r = 0.0, min_r = 0.0, max_u = 0.0;
};

struct Trajectory {
    int n = 2;
    int k = 2;
    std::vector<double> theta;
    std::vector<TrajectoryRecord> records;
    TerminationReason reason = TerminationReason::converged;
    std::string breakdown_message;
    bool monitor_violation = false;
    double worst_pinch_margin = 0.0;
    double worst_cone_margin = 0.0;
    FlowState final_state;
};

namespace detail {

inline TrajectoryRecord make_record(const FlowState& st, double dt) {
    TrajectoryRecord rec;
    rec.t = st.t;
    rec.step = st.stats.step_count;
    rec.r = st.grid.r;
    rec.functionals = functional_record(st.snapshot, st.t);
    rec.dt = dt;
    rec.max_speed = max_abs_speed(st.snapshot);
    const auto [mn, mx] = std::minmax_element(st.grid.r.begin(), st.grid.r.end());
    rec.min_r = *mn;
    rec.max_r = *mx;
    rec.max_u = *std::max_element(st.snapshot.u.begin(), st.snapshot.u.end());
    return rec;
}

} // namespace detail

/// Iterate the explicit step with adaptive dt until both the speed and the
/// radial oscillation fall below tolerance, or a budget is hit. Records are
/// taken at the configured cadence and always at the initial and terminal
/// states. Monitor violations are flagged, not fatal, unless configured.
inline Trajectory evolve(FlowState state, const StopCriteria& stop, const MonitorConfig& mon,
                         double safety = 0.2) {
    Trajectory traj;
    traj.n = state.ambient.n;
    traj.k = state.k;
    traj.theta = state.grid.theta;
    traj.worst_pinch_margin = state.snapshot.pinch_margin;
    traj.worst_cone_margin = state.snapshot.cone_margin;

    const double dth = state.grid.dtheta();
    double next_mark = mon.record_dt > 0.0 ? mon.record_dt : 0.0;
    traj.records.push_back(detail::make_record(state, 0.0));

    while (true) {
        const double speed = max_abs_speed(state.snapshot);
        const double osc = state.snapshot.osc_r();
        if (speed < stop.tol_speed && osc < stop.tol_osc) {
            traj.reason = TerminationReason::converged;
            break;
        }
        if (state.t >= stop.t_max) {
            traj.reason = TerminationReason::t_max_reached;
            break;
        }
        if (state.stats.step_count >= stop.max_steps) {
            traj.reason = TerminationReason::max_steps_reached;
            break;
        }

        double dt = stable_dt(state.snapshot, dth, safety);
        dt = std::min(dt, stop.t_max - state.t);
        bool at_mark = false;
        if (mon.record_dt > 0.0 && state.t + dt >= next_mark - 1e-14 * std::max(1.0, next_mark)) {
            dt = next_mark - state.t;
            at_mark = true;
        }

        try {
            state = step(state, dt);
        } catch (const flow_breakdown_error& e) {
            traj.reason = TerminationReason::breakdown;
            traj.breakdown_message = e.what();
            break;
        }
        if (at_mark) state.t = next_mark; // keep record times exact

        traj.worst_pinch_margin = std::min(traj.worst_pinch_margin, state.snapshot.pinch_margin);
        traj.worst_cone_margin = std::min(traj.worst_cone_margin, state.snapshot.cone_margin);
        const bool violated =
            (mon.check_pinching && state.snapshot.pinch_margin < -mon.violation_tol) ||
            (mon.check_cone && state.snapshot.cone_margin < -mon.violation_tol);
        if (violated) {
            traj.monitor_violation = true;
            if (mon.abort_on_violation) {
                traj.reason = TerminationReason::breakdown;
                traj.breakdown_message = "monitored invariant violated beyond tolerance";
                break;
            }
        }

        bool want_record = false;
        if (mon.record_dt > 0.0) {
            if (at_mark) {
                want_record = true;
                next_mark += mon.record_dt;
            }
        } else if (mon.record_every > 0 && state.stats.step_count % mon.record_every == 0) {
            want_record = true;
        }
        if (want_record) traj.records.push_back(detail::make_record(state, state.stats.last_dt));
    }

    if (traj.records.empty() || traj.records.back().step != state.stats.step_count)
        traj.records.push_back(detail::make_record(state, state.stats.last_dt));
    traj.final_state = std::move(state);
    return traj;
}

/// First-variation residual record at one interior trajectory index:
/// centered-difference time derivatives of A_0, B_k, B_{-1} against the
/// quadrature of the corresponding rate integrand with normal speed
/// Theta - 1/F, normalized by the functional magnitude (floored at 1).
struct VariationResiduals {
    double a0 = 0.0;
    double b_k = 0.0;
    double b_minus1 = 0.0;
    double b_minus1_rate_quotient = 0.0; // (n+1) integral (u - lambda'/F)
    double b_minus1_rate_mean = 0.0;     // (n+1) integral (u - lambda'/E_1)
};

inline VariationResiduals variation_residuals(const Trajectory& traj, std::size_t index) {
    if (index == 0 || index + 1 >= traj.records.size())
        throw argument_error("variation residual index needs neighbors on both sides");
    const auto& r0 = traj.records[index - 1];
    const auto& r1 = traj.records[index];
    const auto& r2 = traj.records[index + 1];

    ProfileGrid g{traj.theta, r1.r};
    const AmbientParams amb{traj.n};
    const GeometrySnapshot snap = compute_snapshot(g, amb, traj.k);
    const int n = traj.n;
    const int k = traj.k;
    const std::size_t m = snap.nodes();

    // Quadratic-fit derivative at the middle time (records may be unevenly spaced).
    auto ddt = [&](double f0, double f1, double f2) {
        const double t0 = r0.t, t1 = r1.t, t2 = r2.t;
        return f0 * (t1 - t2) / ((t0 - t1) * (t0 - t2)) +
               f1 * (2.0 * t1 - t0 - t2) / ((t1 - t0) * (t1 - t2)) +
               f2 * (t1 - t0) / ((t2 - t0) * (t2 - t1));
    };

    std::vector<double> speed(m), f(m);
    for (std::size_t j = 0; j < m; ++j) speed[j] = snap.theta_fn[j] - 1.0 / snap.F[j];

    for (std::size_t j = 0; j < m; ++j) f[j] = snap.E(1, j) * speed[j];
    const double rate_a0 = n * surface_integral(snap, f);

    for (std::size_t j = 0; j < m; ++j) f[j] = snap.u[j] * snap.E(k, j) * speed[j];
    double rate_bk = (1 + k) * surface_integral(snap, f);
    if (k < n) {
        for (std::size_t j = 0; j < m; ++j)
            f[j] = snap.lambda_prime[j] * snap.E(k + 1, j) * speed[j];
        rate_bk += (n - k) * surface_integral(snap, f);
    }

    for (std::size_t j = 0; j < m; ++j) f[j] = snap.u[j] - snap.lambda_prime[j] / snap.F[j];
    const double rate_bm1 = (n + 1) * surface_integral(snap, f);
    for (std::size_t j = 0; j < m; ++j) f[j] = snap.u[j] - snap.lambda_prime[j] / snap.E(1, j);
    const double rate_bm1_mean = (n + 1) * surface_integral(snap, f);

    VariationResiduals out;
    out.a0 = std::abs(ddt(r0.functionals.a(0), r1.functionals.a(0), r2.functionals.a(0)) - rate_a0) /
             std::max(std::abs(r1.functionals.a(0)), 1.0);
    out.b_k = std::abs(ddt(r0.functionals.b(k), r1.functionals.b(k), r2.functionals.b(k)) - rate_bk) /
              std::max(std::abs(r1.functionals.b(k)), 1.0);
    out.b_minus1 =
        std::abs(ddt(r0.functionals.b(-1), r1.functionals.b(-1), r2.functionals.b(-1)) - rate_bm1) /
        std::max(std::abs(r1.functionals.b(-1)), 1.0);
    out.b_minus1_rate_quotient = rate_bm1;
    out.b_minus1_rate_mean = rate_bm1_mean;
    return out;
}

} // namespace dsflow
