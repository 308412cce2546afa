#pragma once

// Ambient warped-product functions of de Sitter space and the extrinsic
// geometry of rotationally symmetric spacelike radial graphs over the
// polar angle theta in [0, pi].

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dsflow/errors.hpp"
#include "dsflow/symfunc.hpp"

namespace dsflow {

/// Ambient de Sitter data: warp factor lambda = cosh, lambda' = sinh.
struct AmbientParams {
    int n = 2; // dimension of the orbit sphere S^n

    bool valid() const { return n >= 2 && n <= kMaxCurvatures; }
};

/// (lambda, lambda') = (cosh r, sinh r).
inline std::pair<double, double> ambient_eval(double r) { return {std::cosh(r), std::sinh(r)}; }

/// Numerical floors. eps_space bounds upsilon^2 away from the lightlike
/// limit; eps_cone is the Gamma_k^+ margin floor; theta_pole_tol selects
/// the pole branch of the orbit curvature.
struct Tolerances {
    double eps_space = 1e-8;
    double eps_cone = kConeEps;
    double theta_pole_tol = 1e-8;

    bool operator==(const Tolerances&) const = default;
};

/// Discrete radial profile r(theta) on a uniform grid over [0, pi].
/// Pole regularity is imposed through even ghost extension, so one-sided
/// derivatives of r vanish at both poles.
struct ProfileGrid {
    std::vector<double> theta;
    std::vector<double> r;

    int segments() const { return static_cast<int>(theta.size()) - 1; }
    double dtheta() const { return std::numbers::pi / segments(); }

    static std::vector<double> uniform_theta(int N) {
        std::vector<double> th(static_cast<std::size_t>(N) + 1);
        for (int j = 0; j <= N; ++j) th[j] = j * std::numbers::pi / N;
        th[N] = std::numbers::pi;
        return th;
    }

    /// Coordinate slice r == rho.
    static ProfileGrid slice(int N, double rho) {
        ProfileGrid g;
        g.theta = uniform_theta(N);
        g.r.assign(static_cast<std::size_t>(N) + 1, rho);
        return g;
    }

    /// r(theta) = rho0 + sum_m amps[m-1] * cos(m*theta).
    static ProfileGrid cosine(int N, double rho0, std::span<const double> amps) {
        ProfileGrid g;
        g.theta = uniform_theta(N);
        g.r.resize(static_cast<std::size_t>(N) + 1);
        for (int j = 0; j <= N; ++j) {
            double v = rho0;
            for (std::size_t m = 0; m < amps.size(); ++m)
                v += amps[m] * std::cos(static_cast<double>(m + 1) * g.theta[j]);
            g.r[j] = v;
        }
        return g;
    }
};

/// Per-node extrinsic geometry of one profile. Arrays are indexed by grid
/// node; E is stored row-major with stride nodes() per symmetric index.
struct GeometrySnapshot {
    int n = 2;
    int k = 2;
    std::vector<double> theta, r, r_theta, r_theta2;
    std::vector<double> lambda, lambda_prime;
    std::vector<double> upsilon, u, theta_fn; // theta_fn = u / lambda'
    std::vector<double> kappa1, kappa2;       // profile / orbit principal curvatures
    std::vector<double> E_flat;               // E_l at node j: E_flat[l * nodes() + j]
    std::vector<double> F, dF_dkappa1;
    std::vector<double> area_density; // d(mu)/d(theta) per unit orbit-sphere measure

    double min_upsilon_sq = 0.0; // spacelike margin
    double cone_margin = 0.0;    // min over nodes of min_{l<=k} E_l
    double pinch_margin = 0.0;   // min over nodes of min(Theta - kappa1, Theta - kappa2)

    std::size_t nodes() const { return r.size(); }
    double E(int l, std::size_t j) const { return E_flat[static_cast<std::size_t>(l) * nodes() + j]; }
    std::span<const double> E_row(int l) const {
        return {E_flat.data() + static_cast<std::size_t>(l) * nodes(), nodes()};
    }
    double dtheta() const { return theta[1] - theta[0]; }
    double osc_r() const {
        auto [lo, hi] = std::minmax_element(r.begin(), r.end());
        return *hi - *lo;
    }
};

namespace detail {

// Centered differences with even ghost extension r_{-1} = r_1, r_{N+1} = r_{N-1}.
inline void profile_derivatives(const ProfileGrid& g, std::vector<double>& rt,
                                std::vector<double>& rtt) {
    const int N = g.segments();
    const double dth = g.dtheta();
    rt.resize(g.r.size());
    rtt.resize(g.r.size());
    auto at = [&](int j) {
        if (j < 0) return g.r[static_cast<std::size_t>(-j)];
        if (j > N) return g.r[static_cast<std::size_t>(2 * N - j)];
        return g.r[static_cast<std::size_t>(j)];
    };
    for (int j = 0; j <= N; ++j) {
        rt[j] = (at(j + 1) - at(j - 1)) / (2.0 * dth);
        rtt[j] = (at(j + 1) - 2.0 * at(j) + at(j - 1)) / (dth * dth);
    }
}

} // namespace detail

/// Fill every snapshot field for the given profile. Throws spacelike_error
/// if upsilon^2 falls below eps_space at any node, degeneracy_error if some
/// node leaves Gamma_k^+ beyond eps_cone.
inline GeometrySnapshot compute_snapshot(const ProfileGrid& grid, const AmbientParams& ambient,
                                         int k, const Tolerances& tol = {}) {
    if (!ambient.valid()) throw argument_error("ambient dimension n out of range");
    const int n = ambient.n;
    if (k < 1 || k > n) throw argument_error("curvature index k out of range");
    if (grid.segments() < 4) throw argument_error("grid too coarse");

    GeometrySnapshot s;
    s.n = n;
    s.k = k;
    s.theta = grid.theta;
    s.r = grid.r;
    detail::profile_derivatives(grid, s.r_theta, s.r_theta2);

    const std::size_t m = s.r.size();
    s.lambda.resize(m);
    s.lambda_prime.resize(m);
    s.upsilon.resize(m);
    s.u.resize(m);
    s.theta_fn.resize(m);
    s.kappa1.resize(m);
    s.kappa2.resize(m);
    s.F.resize(m);
    s.dF_dkappa1.resize(m);
    s.area_density.resize(m);
    s.E_flat.resize(static_cast<std::size_t>(n + 1) * m);

    s.min_upsilon_sq = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (!(s.r[j] > 0.0))
            throw argument_error("radial profile must stay positive (r <= 0 at node " +
                                 std::to_string(j) + ")");
        auto [lam, lamp] = ambient_eval(s.r[j]);
        s.lambda[j] = lam;
        s.lambda_prime[j] = lamp;
        const double ups_sq = 1.0 - (s.r_theta[j] * s.r_theta[j]) / (lam * lam);
        s.min_upsilon_sq = std::min(s.min_upsilon_sq, ups_sq);
        if (!(ups_sq > tol.eps_space))
            throw spacelike_error("graph is no longer spacelike (upsilon^2 = " +
                                      std::to_string(ups_sq) + " at node " + std::to_string(j) + ")",
                                  ups_sq);
        s.upsilon[j] = std::sqrt(ups_sq);
        s.u[j] = lam / s.upsilon[j];
        s.theta_fn[j] = s.u[j] / lamp;
    }

    const std::size_t last = m - 1;
    double cone_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        const double lam = s.lambda[j];
        const double lamp = s.lambda_prime[j];
        const double ups = s.upsilon[j];
        const double lam2 = lam * lam;
        s.kappa1[j] = (s.r_theta2[j] + lam * lamp -
                       2.0 * (lamp / lam) * s.r_theta[j] * s.r_theta[j]) /
                      (lam2 * ups * ups * ups);
        const bool at_pole =
            s.theta[j] < tol.theta_pole_tol || s.theta[j] > std::numbers::pi - tol.theta_pole_tol;
        if (at_pole) {
            // cot(theta) * r_theta -> r_theta2 as theta -> 0 or pi; with the
            // even ghost extension r_theta vanishes there, so kappa2 = kappa1.
            s.kappa2[j] = (s.r_theta2[j] + lam * lamp) / (lam2 * ups * ups * ups);
        } else {
            s.kappa2[j] = (s.r_theta[j] / std::tan(s.theta[j]) + lam * lamp) / (lam2 * ups);
        }

        const TwoValueCurvature tv{s.kappa1[j], s.kappa2[j], n};
        for (int l = 0; l <= n; ++l) s.E_flat[static_cast<std::size_t>(l) * m + j] = elem_sym_two_value(tv, l);
        cone_margin = std::min(cone_margin, cone_membership(tv, k));

        const double sin_th = (j == 0 || j == last) ? 0.0 : std::sin(s.theta[j]);
        s.area_density[j] = ups * pow_int(lam, n) * pow_int(sin_th, n - 1);
    }
    s.cone_margin = cone_margin;
    if (!(cone_margin > tol.eps_cone))
        throw degeneracy_error("k-convexity lost (cone margin " + std::to_string(cone_margin) + ")",
                               cone_margin);

    double pinch = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        const TwoValueCurvature tv{s.kappa1[j], s.kappa2[j], n};
        s.F[j] = elem_sym_two_value(tv, k) / elem_sym_two_value(tv, k - 1);
        s.dF_dkappa1[j] = curvature_ratio_dprofile(tv, k);
        pinch = std::min(pinch, std::min(s.theta_fn[j] - s.kappa1[j], s.theta_fn[j] - s.kappa2[j]));
    }
    s.pinch_margin = pinch;
    return s;
}

/// min over nodes of min(Theta - kappa1, Theta - kappa2); the pinching
/// condition holds iff the margin is nonnegative.
inline double pinching_margin(const GeometrySnapshot& snap) { return snap.pinch_margin; }

struct AdmissibilityReport {
    bool spacelike = false;
    bool k_convex = false;
    bool pinched = false;
    bool admissible = false;
    double margin_spacelike = 0.0; // min upsilon^2
    double margin_cone = 0.0;      // min node cone membership
    double margin_pinch = 0.0;     // min node pinching margin
};

/// Report-style classification; never throws on inadmissible data. A strict
/// margin threshold (default 0) separates admissible from rejected input.
inline AdmissibilityReport admissibility_check(const ProfileGrid& grid,
                                               const AmbientParams& ambient, int k,
                                               double margin_tol = 0.0) {
    AdmissibilityReport rep;
    if (!ambient.valid() || k < 1 || k > ambient.n || grid.segments() < 4) return rep;

    std::vector<double> rt, rtt;
    detail::profile_derivatives(grid, rt, rtt);
    const std::size_t m = grid.r.size();
    double min_ups_sq = 1.0;
    bool positive_r = true;
    for (std::size_t j = 0; j < m; ++j) {
        positive_r = positive_r && grid.r[j] > 0.0;
        const double lam = std::cosh(grid.r[j]);
        min_ups_sq = std::min(min_ups_sq, 1.0 - rt[j] * rt[j] / (lam * lam));
    }
    rep.margin_spacelike = min_ups_sq;
    rep.spacelike = positive_r && min_ups_sq > margin_tol;
    if (!rep.spacelike) {
        rep.margin_cone = rep.margin_pinch = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }

    const int n = ambient.n;
    const std::size_t last = m - 1;
    double cone = std::numeric_limits<double>::infinity();
    double pinch = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        const auto [lam, lamp] = ambient_eval(grid.r[j]);
        const double lam2 = lam * lam;
        const double ups = std::sqrt(1.0 - rt[j] * rt[j] / lam2);
        const double k1 = (rtt[j] + lam * lamp - 2.0 * (lamp / lam) * rt[j] * rt[j]) /
                          (lam2 * ups * ups * ups);
        const double k2 = (j == 0 || j == last)
                              ? (rtt[j] + lam * lamp) / (lam2 * ups * ups * ups)
                              : (rt[j] / std::tan(grid.theta[j]) + lam * lamp) / (lam2 * ups);
        const TwoValueCurvature tv{k1, k2, n};
        cone = std::min(cone, cone_membership(tv, k));
        const double theta_fn = lam / (ups * lamp);
        pinch = std::min(pinch, std::min(theta_fn - k1, theta_fn - k2));
    }
    rep.margin_cone = cone;
    rep.margin_pinch = pinch;
    rep.k_convex = cone > margin_tol;
    rep.pinched = pinch > margin_tol;
    rep.admissible = rep.spacelike && rep.k_convex && rep.pinched;
    return rep;
}

} // namespace dsflow
