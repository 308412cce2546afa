#pragma once

// Shared test utilities: deterministic uniforms, cone sampling, and a
// brute-force elementary-symmetric oracle independent of the library path.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dsflow/symfunc.hpp"

namespace testutil {

inline double u01(std::mt19937_64& eng) {
    return std::ldexp(static_cast<double>(eng() >> 11), -53);
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * u01(eng);
}

/// sigma_l by explicit subset enumeration; exact combinatorial reference.
inline double elem_sym_bruteforce(const std::vector<double>& kappa, int l) {
    const int n = static_cast<int>(kappa.size());
    if (l == 0) return 1.0;
    double sum = 0.0;
    std::vector<int> idx(l);
    for (int i = 0; i < l; ++i) idx[i] = i;
    while (true) {
        double prod = 1.0;
        for (int i = 0; i < l; ++i) prod *= kappa[idx[i]];
        sum += prod;
        int i = l - 1;
        while (i >= 0 && idx[i] == n - l + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < l; ++j) idx[j] = idx[j - 1] + 1;
    }
    return sum / dsflow::binomial(n, l);
}

/// Rejection-sample a curvature tuple strictly inside Gamma_k^+.
inline std::vector<double> sample_cone(std::mt19937_64& eng, int n, int k,
                                       double margin_floor = 1e-3) {
    std::vector<double> kappa(static_cast<std::size_t>(n));
    while (true) {
        for (auto& v : kappa) v = uniform(eng, -0.5, 2.5);
        if (dsflow::cone_membership(kappa, k) > margin_floor) return kappa;
    }
}

} // namespace testutil
