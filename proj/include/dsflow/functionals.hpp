#pragma once

// Quadrature of geometric functionals over one snapshot: area, enclosed
// volume, quermassintegrals A_l, weighted curvature integrals B_l (and the
// weighted enclosed volume B_{-1}), and Minkowski-identity residuals.

#include <cmath>
#include <span>
#include <vector>

#include "dsflow/geometry.hpp"

namespace dsflow {

/// Area of the unit sphere S^m, by the recurrence w_m = 2*pi/(m-1) * w_{m-2}.
inline double sphere_area(int m) {
    if (m < 0) throw argument_error("sphere dimension must be nonnegative");
    double even = 2.0;                  // w_0
    double odd = 2.0 * std::numbers::pi; // w_1
    if (m == 0) return even;
    if (m == 1) return odd;
    double w = 0.0;
    for (int i = 2; i <= m; ++i) {
        w = 2.0 * std::numbers::pi / (i - 1) * (i % 2 == 0 ? even : odd);
        (i % 2 == 0 ? even : odd) = w;
    }
    return w;
}

struct QuadratureInfo {
    bool trapezoid_fallback = false;
};

namespace detail {

// Composite Simpson with Euler-Maclaurin endpoint correction. The
// correction removes the dtheta^4 boundary term (the integrands' odd
// derivatives need not vanish at the poles when n is even), leaving
// O(dtheta^6) error; third derivatives at the ends come from one-sided
// five-point stencils. Odd N falls back to the trapezoid rule.
inline double integrate_theta(std::span<const double> f, double dth, QuadratureInfo* info) {
    const std::size_t m = f.size();
    const std::size_t N = m - 1;
    if (N % 2 != 0 || N < 8) {
        if (info) info->trapezoid_fallback = true;
        double s = 0.5 * (f[0] + f[N]);
        for (std::size_t j = 1; j < N; ++j) s += f[j];
        return s * dth;
    }
    double s4 = 0.0, s2 = 0.0;
    for (std::size_t j = 1; j < N; j += 2) s4 += f[j];
    for (std::size_t j = 2; j < N; j += 2) s2 += f[j];
    const double simpson = dth / 3.0 * (f[0] + f[N] + 4.0 * s4 + 2.0 * s2);
    const double d3a =
        (-5.0 * f[0] + 18.0 * f[1] - 24.0 * f[2] + 14.0 * f[3] - 3.0 * f[4]) / (2.0 * dth * dth * dth);
    const double d3b = (5.0 * f[N] - 18.0 * f[N - 1] + 24.0 * f[N - 2] - 14.0 * f[N - 3] +
                        3.0 * f[N - 4]) /
                       (2.0 * dth * dth * dth);
    return simpson - dth * dth * dth * dth / 180.0 * (d3b - d3a);
}

} // namespace detail

/// Integral of a per-node integrand against the area measure:
/// w_{n-1} * integral_0^pi integrand * area_density dtheta.
inline double surface_integral(const GeometrySnapshot& snap, std::span<const double> integrand,
                               QuadratureInfo* info = nullptr) {
    if (integrand.size() != snap.nodes())
        throw argument_error("integrand size does not match grid");
    std::vector<double> f(snap.nodes());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = integrand[j] * snap.area_density[j];
    return sphere_area(snap.n - 1) * detail::integrate_theta(f, snap.dtheta(), info);
}

/// Antiderivative G_n(r) = integral_0^r cosh^n(s) ds by the closed
/// power-reduction recurrence.
inline double cosh_power_antiderivative(int n, double r) {
    if (n < 0) throw argument_error("cosh power must be nonnegative");
    if (n == 0) return r;
    if (n == 1) return std::sinh(r);
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    // G_n = cosh^{n-1} sinh / n + (n-1)/n G_{n-2}
    double g0 = r;            // G_0
    double g1 = s;            // G_1
    double g = 0.0;
    for (int i = 2; i <= n; ++i) {
        g = pow_int(c, i - 1) * s / i + static_cast<double>(i - 1) / i * (i % 2 == 0 ? g0 : g1);
        (i % 2 == 0 ? g0 : g1) = g;
    }
    return g;
}

/// Weighted curvature integral B_l = integral lambda' E_l dmu for l >= 0.
/// B_{-1} reduces to the closed radial form
/// w_{n-1} * integral (sin theta)^{n-1} cosh^{n+1}(r) dtheta.
inline double weighted_integral(const GeometrySnapshot& snap, int l,
                                QuadratureInfo* info = nullptr) {
    const int n = snap.n;
    if (l < -1 || l > n) throw argument_error("weighted integral index out of range");
    const std::size_t m = snap.nodes();
    std::vector<double> f(m);
    if (l == -1) {
        const std::size_t last = m - 1;
        for (std::size_t j = 0; j < m; ++j) {
            const double sin_th = (j == 0 || j == last) ? 0.0 : std::sin(snap.theta[j]);
            f[j] = pow_int(sin_th, n - 1) * pow_int(snap.lambda[j], n + 1);
        }
        return sphere_area(n - 1) * detail::integrate_theta(f, snap.dtheta(), info);
    }
    for (std::size_t j = 0; j < m; ++j) f[j] = snap.lambda_prime[j] * snap.E(l, j);
    return surface_integral(snap, f, info);
}

/// Quermassintegral A_l. A_{-1} is the enclosed volume times (n+1), A_0 the
/// area, and for l >= 1 the recursion A_l = integral E_l dmu + l/(n-l+2) A_{l-2}
/// (curvature one, timelike signature).
inline double quermassintegral(const GeometrySnapshot& snap, int l,
                               QuadratureInfo* info = nullptr) {
    const int n = snap.n;
    if (l < -1 || l > n) throw argument_error("quermassintegral index out of range");
    const std::size_t m = snap.nodes();

    auto a_minus1 = [&] {
        std::vector<double> f(m);
        const std::size_t last = m - 1;
        for (std::size_t j = 0; j < m; ++j) {
            const double sin_th = (j == 0 || j == last) ? 0.0 : std::sin(snap.theta[j]);
            f[j] = pow_int(sin_th, n - 1) * cosh_power_antiderivative(n, snap.r[j]);
        }
        return (n + 1) * sphere_area(n - 1) * detail::integrate_theta(f, snap.dtheta(), info);
    };
    if (l == -1) return a_minus1();
    if (l == 0) {
        std::vector<double> ones(m, 1.0);
        return surface_integral(snap, ones, info);
    }
    // Build the chain A_{-1}, A_0, ..., A_l.
    double prev2 = a_minus1(); // A_{l-2} lane starting at A_{-1}
    std::vector<double> ones(m, 1.0);
    double prev1 = surface_integral(snap, ones, info); // A_0
    double cur = 0.0;
    for (int i = 1; i <= l; ++i) {
        cur = surface_integral(snap, snap.E_row(i), info) +
              static_cast<double>(i) / (n - i + 2) * prev2;
        prev2 = prev1;
        prev1 = cur;
    }
    return cur;
}

/// Relative defect of the integral identity
/// integral u E_l dmu = integral lambda' E_{l-1} dmu, floored at scale 1.
inline double minkowski_residual(const GeometrySnapshot& snap, int l,
                                 QuadratureInfo* info = nullptr) {
    const int n = snap.n;
    if (l < 1 || l > n) throw argument_error("Minkowski index out of range");
    const std::size_t m = snap.nodes();
    std::vector<double> f(m);
    for (std::size_t j = 0; j < m; ++j) f[j] = snap.u[j] * snap.E(l, j);
    const double lhs = surface_integral(snap, f, info);
    for (std::size_t j = 0; j < m; ++j) f[j] = snap.lambda_prime[j] * snap.E(l - 1, j);
    const double rhs = surface_integral(snap, f, info);
    return (lhs - rhs) / std::max(std::abs(rhs), 1.0);
}

/// All functionals and margins of one snapshot at flow time t. Index l is
/// stored at position l+1 in A and B.
struct FunctionalRecord {
    double t = 0.0;
    std::vector<double> A; // A_{-1} .. A_n
    std::vector<double> B; // B_{-1} .. B_n
    std::vector<double> minkowski; // residuals l = 1..n
    double margin_space = 0.0;
    double margin_cone = 0.0;
    double margin_pinch = 0.0;

    double a(int l) const { return A[static_cast<std::size_t>(l + 1)]; }
    double b(int l) const { return B[static_cast<std::size_t>(l + 1)]; }
    double mink(int l) const { return minkowski[static_cast<std::size_t>(l - 1)]; }
};

inline FunctionalRecord functional_record(const GeometrySnapshot& snap, double t) {
    const int n = snap.n;
    FunctionalRecord rec;
    rec.t = t;
    rec.A.resize(static_cast<std::size_t>(n) + 2);
    rec.B.resize(static_cast<std::size_t>(n) + 2);
    rec.minkowski.resize(static_cast<std::size_t>(n));

    // Share the A_l chain instead of restarting it per index.
    std::vector<double> ones(snap.nodes(), 1.0);
    rec.A[0] = quermassintegral(snap, -1);
    rec.A[1] = surface_integral(snap, ones);
    for (int l = 1; l <= n; ++l)
        rec.A[static_cast<std::size_t>(l) + 1] =
            surface_integral(snap, snap.E_row(l)) +
            static_cast<double>(l) / (n - l + 2) * rec.A[static_cast<std::size_t>(l) - 1];
    for (int l = -1; l <= n; ++l)
        rec.B[static_cast<std::size_t>(l) + 1] = weighted_integral(snap, l);
    for (int l = 1; l <= n; ++l)
        rec.minkowski[static_cast<std::size_t>(l) - 1] = minkowski_residual(snap, l);

    rec.margin_space = snap.min_upsilon_sq;
    rec.margin_cone = snap.cone_margin;
    rec.margin_pinch = snap.pinch_margin;
    return rec;
}

} // namespace dsflow
