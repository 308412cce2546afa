#pragma once

// Inequality audits: the slice comparison functions phi_{-1}, phi_k and the
// endpoint inequality B_k <= phi_k(phi_{-1}^{-1}(B_{-1})), Heintze-Karcher
// probing on random mean-convex samples, trajectory monotonicity audits,
// and seeded generation of admissible random profiles.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dsflow/flow.hpp"
#include "dsflow/functionals.hpp"
#include "dsflow/geometry.hpp"

namespace dsflow {

/// phi_{-1}(rho) = w_n cosh^{n+1}(rho): weighted enclosed volume of a slice.
inline double phi_minus1(double rho, int n) {
    return sphere_area(n) * std::pow(std::cosh(rho), n + 1);
}

/// phi_k(rho) = w_n cosh^{n-k}(rho) sinh^{k+1}(rho): B_k of a slice.
inline double phi_k_slice(double rho, int n, int k) {
    return sphere_area(n) * std::pow(std::cosh(rho), n - k) * std::pow(std::sinh(rho), k + 1);
}

/// (phi_{-1}, phi_k) of the slice at radius rho; both strictly increasing.
inline std::pair<double, double> slice_functionals(double rho, int n, int k) {
    if (!(rho > 0.0)) throw argument_error("slice radius must be positive");
    return {phi_minus1(rho, n), phi_k_slice(rho, n, k)};
}

/// Monotone bisection inverse of phi_{-1}; y must be >= w_n.
inline double phi_minus1_inverse(double y, int n) {
    const double wn = sphere_area(n);
    if (!(y >= wn)) throw argument_error("phi_{-1} inverse called below its range (y < w_n)");
    if (y == wn) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (phi_minus1(hi, n) < y) {
        hi *= 2.0;
        if (hi > 1e4) break; // cosh overflows well before this
    }
    // bisect to floating resolution; the monotone map keeps this exact
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket at floating resolution
        (phi_minus1(mid, n) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Gap of the endpoint inequality: phi_k(phi_{-1}^{-1}(B_{-1})) - B_k.
/// Nonnegative on admissible data, zero exactly on slices.
inline double af_check(double B_k_val, double B_minus1_val, int n, int k) {
    const double rho = phi_minus1_inverse(B_minus1_val, n);
    return phi_k_slice(rho, n, k) - B_k_val;
}

/// integral lambda'/E_1 dmu - integral u dmu; nonnegative iff the
/// Heintze-Karcher inequality holds on this hypersurface. Requires mean
/// convexity (min E_1 above the cone floor).
inline double heintze_karcher_gap(const GeometrySnapshot& snap, double eps_cone = kConeEps) {
    const std::size_t m = snap.nodes();
    double min_e1 = snap.E(1, 0);
    for (std::size_t j = 1; j < m; ++j) min_e1 = std::min(min_e1, snap.E(1, j));
    if (!(min_e1 > eps_cone))
        throw degeneracy_error("Heintze-Karcher probe needs mean convexity (min E_1 = " +
                                   std::to_string(min_e1) + ")",
                               min_e1);
    std::vector<double> f(m);
    for (std::size_t j = 0; j < m; ++j) f[j] = snap.lambda_prime[j] / snap.E(1, j);
    const double rhs = surface_integral(snap, f);
    const double lhs = surface_integral(snap, std::span<const double>(snap.u));
    return rhs - lhs;
}

enum class TargetClass { mean_convex, k_convex, pinched_admissible };

inline const char* to_string(TargetClass c) {
    switch (c) {
        case TargetClass::mean_convex: return "mean-convex";
        case TargetClass::k_convex: return "k-convex";
        case TargetClass::pinched_admissible: return "pinched-admissible";
    }
    return "unknown";
}

inline TargetClass target_class_from_string(const std::string& s) {
    if (s == "mean-convex") return TargetClass::mean_convex;
    if (s == "k-convex") return TargetClass::k_convex;
    if (s == "pinched-admissible") return TargetClass::pinched_admissible;
    throw argument_error("unknown target class: " + s);
}

struct SamplerParams {
    double rho0 = 1.0;
    int modes = 4;          // max cosine frequency M
    double amp_max = 0.05;  // |a_m| <= amp_max / m^2
    int n = 3;
    int k = 2;
    TargetClass target_class = TargetClass::pinched_admissible;
    std::uint64_t seed = 0;
    int grid_segments = 256;
    long max_attempts = 10000;
};

struct SampleResult {
    ProfileGrid grid;
    long attempts = 0;
    std::vector<double> amplitudes;
};

namespace detail {

// Uniform double in [0, 1) from raw engine output; avoids the
// implementation-defined std distributions so that samples are
// reproducible bit-for-bit everywhere.
inline double uniform01(std::mt19937_64& eng) {
    return std::ldexp(static_cast<double>(eng() >> 11), -53);
}

} // namespace detail

/// Deterministic rejection sampler: draws cosine profiles
/// r = rho0 + sum a_m cos(m theta), |a_m| <= amp_max/m^2, until the target
/// class margins are strictly positive. Same seed, same grid, bit for bit.
inline SampleResult random_admissible_sampler(const SamplerParams& p) {
    if (!(p.rho0 > 0.0) || p.amp_max < 0.0 || p.modes < 1)
        throw argument_error("invalid sampler parameters");
    const AmbientParams amb{p.n};
    if (!amb.valid() || p.k < 1 || p.k > p.n) throw argument_error("invalid sampler dimensions");

    std::mt19937_64 eng(p.seed);
    std::vector<double> amps(static_cast<std::size_t>(p.modes));
    for (long attempt = 1; attempt <= p.max_attempts; ++attempt) {
        for (int m = 1; m <= p.modes; ++m)
            amps[m - 1] = p.amp_max / (static_cast<double>(m) * m) *
                          (2.0 * detail::uniform01(eng) - 1.0);
        ProfileGrid g = ProfileGrid::cosine(p.grid_segments, p.rho0, amps);

        bool positive = true;
        for (double rv : g.r) positive = positive && rv > 0.0;
        if (!positive) continue;

        const AdmissibilityReport rep = admissibility_check(g, amb, p.k);
        if (!rep.spacelike) continue;
        bool ok = false;
        switch (p.target_class) {
            case TargetClass::mean_convex: {
                const AdmissibilityReport r1 = admissibility_check(g, amb, 1);
                ok = r1.spacelike && r1.k_convex;
                break;
            }
            case TargetClass::k_convex:
                ok = rep.k_convex;
                break;
            case TargetClass::pinched_admissible:
                ok = rep.admissible;
                break;
        }
        if (ok) return {std::move(g), attempt, amps};
    }
    throw sampler_error("sampler exhausted " + std::to_string(p.max_attempts) +
                        " attempts; try a smaller amp_max");
}

struct AuditCheck {
    std::string name;
    bool pass = true;
    double worst_violation = 0.0; // most negative slack seen, as a magnitude
    std::size_t worst_index = 0;  // record index where it occurred
    double tolerance = 0.0;
};

struct AuditReport {
    std::vector<AuditCheck> checks;
    bool all_pass = true;

    const AuditCheck* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

namespace detail {

template <typename Get>
inline AuditCheck audit_monotone(const Trajectory& traj, const std::string& name, Get get,
                                 bool increasing, double tol) {
    AuditCheck chk;
    chk.name = name;
    double scale = 1.0;
    for (const auto& rec : traj.records) scale = std::max(scale, std::abs(get(rec)));
    chk.tolerance = tol * scale;
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        const double delta = get(traj.records[i]) - get(traj.records[i - 1]);
        const double violation = increasing ? -delta : delta;
        if (violation > worst) {
            worst = violation;
            chk.worst_index = i;
        }
    }
    chk.worst_violation = worst;
    chk.pass = worst <= chk.tolerance;
    return chk;
}

inline AuditCheck audit_floor(const Trajectory& traj, const std::string& name,
                              double (*get)(const TrajectoryRecord&), double tol) {
    AuditCheck chk;
    chk.name = name;
    chk.tolerance = tol;
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.records.size(); ++i) {
        const double v = -get(traj.records[i]);
        if (v > worst) {
            worst = v;
            chk.worst_index = i;
        }
    }
    chk.worst_violation = worst;
    chk.pass = worst <= tol;
    return chk;
}

} // namespace detail

/// Verify the monotone quantities across consecutive records: B_k up,
/// B_{-1} down, max r down, min r up, max u down, margins bounded below.
/// Tolerances scale with each quantity's magnitude (floored at 1).
inline AuditReport monotonicity_audit(const Trajectory& traj, double tol) {
    if (traj.records.size() < 2) throw argument_error("audit needs at least two records");
    const int k = traj.k;
    AuditReport rep;
    rep.checks.push_back(detail::audit_monotone(
        traj, "B_k non-decreasing", [k](const TrajectoryRecord& r) { return r.functionals.b(k); },
        true, tol));
    rep.checks.push_back(detail::audit_monotone(
        traj, "B_-1 non-increasing",
        [](const TrajectoryRecord& r) { return r.functionals.b(-1); }, false, tol));
    rep.checks.push_back(detail::audit_monotone(
        traj, "max r non-increasing", [](const TrajectoryRecord& r) { return r.max_r; }, false,
        tol));
    rep.checks.push_back(detail::audit_monotone(
        traj, "min r non-decreasing", [](const TrajectoryRecord& r) { return r.min_r; }, true,
        tol));
    rep.checks.push_back(detail::audit_monotone(
        traj, "max u non-increasing", [](const TrajectoryRecord& r) { return r.max_u; }, false,
        tol));
    rep.checks.push_back(detail::audit_floor(
        traj, "pinching margin floor",
        [](const TrajectoryRecord& r) { return r.functionals.margin_pinch; }, tol));
    rep.checks.push_back(detail::audit_floor(
        traj, "cone margin floor",
        [](const TrajectoryRecord& r) { return r.functionals.margin_cone; }, tol));
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

} // namespace dsflow
