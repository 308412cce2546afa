#pragma once

// Normalized elementary symmetric functions E_l of principal curvatures,
// cone membership for Gamma_k^+, and the curvature quotient F = E_k/E_{k-1}
// with its analytic gradient.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "dsflow/errors.hpp"

namespace dsflow {

/// Largest supported number of principal curvatures.
inline constexpr int kMaxCurvatures = 16;

/// Cone-margin floor below which F evaluation fails loudly.
inline constexpr double kConeEps = 1e-10;

/// x^p for small nonnegative integer p; the integrands never need more.
inline double pow_int(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

/// Binomial coefficient C(n, k), exact in double for n <= kMaxCurvatures.
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    static const auto table = [] {
        std::array<std::array<double, kMaxCurvatures + 1>, kMaxCurvatures + 1> c{};
        for (int i = 0; i <= kMaxCurvatures; ++i) {
            c[i][0] = 1.0;
            for (int j = 1; j <= i; ++j)
                c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0.0);
        }
        return c;
    }();
    if (n <= kMaxCurvatures) return table[n][k];
    double v = 1.0;
    for (int j = 1; j <= k; ++j) v = v * (n - k + j) / j;
    return v;
}

namespace detail {

inline void check_dim(std::size_t n) {
    if (n < 2 || n > kMaxCurvatures)
        throw argument_error("curvature tuple must have between 2 and 16 entries");
}

// Coefficients of prod_i (x + kappa_i): coeffs[l] = sigma_l(kappa).
// Incremental product build; no cancellation-prone closed sums.
inline std::array<double, kMaxCurvatures + 1> elementary_coeffs(std::span<const double> kappa) {
    std::array<double, kMaxCurvatures + 1> c{};
    c[0] = 1.0;
    int deg = 0;
    for (double x : kappa) {
        ++deg;
        for (int j = deg; j >= 1; --j) c[j] += x * c[j - 1];
    }
    return c;
}

} // namespace detail

/// E_l(kappa) = sigma_l(kappa) / C(n, l); E_0 = 1.
inline double elem_sym_normalized(std::span<const double> kappa, int l) {
    detail::check_dim(kappa.size());
    const int n = static_cast<int>(kappa.size());
    if (l < 0 || l > n) throw argument_error("elementary symmetric index out of range");
    if (l == 0) return 1.0;
    const auto c = detail::elementary_coeffs(kappa);
    return c[l] / binomial(n, l);
}

/// Curvature tuple with one distinguished value of multiplicity 1 and a
/// second value of multiplicity n-1 (rotationally symmetric graphs).
struct TwoValueCurvature {
    double kappa_profile = 0.0; // multiplicity 1
    double kappa_orbit = 0.0;   // multiplicity n-1
    int n = 2;

    std::vector<double> expanded() const {
        std::vector<double> v(static_cast<std::size_t>(n), kappa_orbit);
        v[0] = kappa_profile;
        return v;
    }
};

/// E_l of the expanded tuple, by the closed binomial form.
inline double elem_sym_two_value(const TwoValueCurvature& tv, int l) {
    detail::check_dim(static_cast<std::size_t>(tv.n));
    if (l < 0 || l > tv.n) throw argument_error("elementary symmetric index out of range");
    if (l == 0) return 1.0;
    const double b = tv.kappa_orbit;
    const double bl1 = pow_int(b, l - 1);
    return (binomial(tv.n - 1, l) * b * bl1 + binomial(tv.n - 1, l - 1) * tv.kappa_profile * bl1) /
           binomial(tv.n, l);
}

/// min_{l=1..k} E_l; kappa lies in Gamma_k^+ iff the margin is positive.
inline double cone_membership(std::span<const double> kappa, int k) {
    detail::check_dim(kappa.size());
    const int n = static_cast<int>(kappa.size());
    if (k < 1 || k > n) throw argument_error("cone index k out of range");
    const auto c = detail::elementary_coeffs(kappa);
    double margin = c[1] / binomial(n, 1);
    for (int l = 2; l <= k; ++l) margin = std::min(margin, c[l] / binomial(n, l));
    return margin;
}

inline double cone_membership(const TwoValueCurvature& tv, int k) {
    if (k < 1 || k > tv.n) throw argument_error("cone index k out of range");
    double margin = elem_sym_two_value(tv, 1);
    for (int l = 2; l <= k; ++l) margin = std::min(margin, elem_sym_two_value(tv, l));
    return margin;
}

/// F = E_k / E_{k-1}. Requires kappa in Gamma_k^+ with margin above eps_cone.
inline double curvature_ratio(std::span<const double> kappa, int k, double eps_cone = kConeEps) {
    const double margin = cone_membership(kappa, k);
    if (!(margin > eps_cone))
        throw degeneracy_error("curvature left Gamma_k^+ (cone margin too small)", margin);
    const auto c = detail::elementary_coeffs(kappa);
    const int n = static_cast<int>(kappa.size());
    return (c[k] / binomial(n, k)) / (c[k - 1] / binomial(n, k - 1));
}

inline double curvature_ratio(const TwoValueCurvature& tv, int k, double eps_cone = kConeEps) {
    const double margin = cone_membership(tv, k);
    if (!(margin > eps_cone))
        throw degeneracy_error("curvature left Gamma_k^+ (cone margin too small)", margin);
    return elem_sym_two_value(tv, k) / elem_sym_two_value(tv, k - 1);
}

/// Gradient (dF/dkappa_1, ..., dF/dkappa_n), computed from
/// dsigma_l/dkappa_i = sigma_{l-1}(kappa with entry i removed) and the
/// quotient rule. All components are positive on Gamma_k^+ and satisfy the
/// Euler relation sum_i kappa_i dF/dkappa_i = F.
inline std::vector<double> curvature_ratio_gradient(std::span<const double> kappa, int k,
                                                    double eps_cone = kConeEps) {
    const double margin = cone_membership(kappa, k);
    if (!(margin > eps_cone))
        throw degeneracy_error("curvature left Gamma_k^+ (cone margin too small)", margin);
    const int n = static_cast<int>(kappa.size());
    const auto c = detail::elementary_coeffs(kappa);
    const double Ek = c[k] / binomial(n, k);
    const double Ekm1 = c[k - 1] / binomial(n, k - 1);

    std::vector<double> grad(static_cast<std::size_t>(n));
    std::vector<double> rest(static_cast<std::size_t>(n) - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0, m = 0; j < n; ++j)
            if (j != i) rest[m++] = kappa[j];
        const auto cr = detail::elementary_coeffs(rest);
        const double dEk = cr[k - 1] / binomial(n, k);
        const double dEkm1 = k >= 2 ? cr[k - 2] / binomial(n, k - 1) : 0.0;
        grad[i] = (dEk * Ekm1 - Ek * dEkm1) / (Ekm1 * Ekm1);
    }
    return grad;
}

/// dF/dkappa_profile for a two-value tuple (the direction that carries the
/// second-order term of the graph equation). Closed form.
inline double curvature_ratio_dprofile(const TwoValueCurvature& tv, int k) {
    const int n = tv.n;
    const double b = tv.kappa_orbit;
    const double Ek = elem_sym_two_value(tv, k);
    const double Ekm1 = elem_sym_two_value(tv, k - 1);
    // sigma_{l-1} of the orbit-only remainder (b repeated n-1 times).
    const double dEk = binomial(n - 1, k - 1) * pow_int(b, k - 1) / binomial(n, k);
    const double dEkm1 =
        k >= 2 ? binomial(n - 1, k - 2) * pow_int(b, k - 2) / binomial(n, k - 1) : 0.0;
    return (dEk * Ekm1 - Ek * dEkm1) / (Ekm1 * Ekm1);
}

} // namespace dsflow
