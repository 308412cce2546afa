#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dsflow/symfunc.hpp"
#include "helpers.hpp"

using namespace dsflow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normalized elementary symmetric functions on frozen examples") {
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK_THAT(elem_sym_normalized(ones, 2), WithinAbs(1.0, 1e-15));
    CHECK(elem_sym_normalized(ones, 0) == 1.0);

    const std::vector<double> k123{1.0, 2.0, 3.0};
    CHECK_THAT(elem_sym_normalized(k123, 2), WithinRel(11.0 / 3.0, 1e-15)); // (2+3+6)/3
    CHECK_THAT(elem_sym_normalized(k123, 1), WithinRel(2.0, 1e-15));
    CHECK(elem_sym_normalized(k123, 0) == 1.0);

    CHECK_THROWS_AS(elem_sym_normalized(k123, 4), argument_error);
    CHECK_THROWS_AS(elem_sym_normalized(k123, -1), argument_error);
    CHECK_THROWS_AS(elem_sym_normalized(std::vector<double>{1.0}, 0), argument_error);
}

TEST_CASE("elementary symmetric agrees with subset-enumeration oracle") {
    std::mt19937_64 eng(7);
    for (int n : {2, 3, 5, 8}) {
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> kappa(n);
            for (auto& v : kappa) v = testutil::uniform(eng, -2.0, 2.0);
            for (int l = 0; l <= n; ++l) {
                const double got = elem_sym_normalized(kappa, l);
                const double ref = testutil::elem_sym_bruteforce(kappa, l);
                CHECK_THAT(got, WithinAbs(ref, 1e-12 * std::max(1.0, std::abs(ref))));
            }
        }
    }
}

TEST_CASE("two-value form matches the expanded tuple") {
    SECTION("frozen examples") {
        const TwoValueCurvature equal{0.7, 0.7, 5};
        for (int l = 0; l <= 5; ++l)
            CHECK_THAT(elem_sym_two_value(equal, l), WithinRel(std::pow(0.7, l), 1e-14));

        const TwoValueCurvature t{1.0, 2.0, 3}; // expands to (1,2,2)
        CHECK_THAT(elem_sym_two_value(t, 2), WithinRel(8.0 / 3.0, 1e-15));

        const double th = std::tanh(0.8);
        const TwoValueCurvature slice{th, th, 2};
        CHECK_THAT(elem_sym_two_value(slice, 2),
                   WithinRel(elem_sym_normalized(slice.expanded(), 2), 1e-14));
        CHECK_THAT(elem_sym_two_value(slice, 2), WithinRel(th * th, 1e-14));
    }
    SECTION("random agreement to 1e-14 relative") {
        std::mt19937_64 eng(11);
        for (int n : {2, 3, 6, 12}) {
            for (int rep = 0; rep < 100; ++rep) {
                const TwoValueCurvature tv{testutil::uniform(eng, -1.5, 1.5),
                                           testutil::uniform(eng, -1.5, 1.5), n};
                const auto expanded = tv.expanded();
                for (int l = 0; l <= n; ++l) {
                    const double a = elem_sym_two_value(tv, l);
                    const double b = elem_sym_normalized(expanded, l);
                    CHECK_THAT(a, WithinAbs(b, 1e-14 * std::max(1.0, std::abs(b))));
                }
            }
        }
    }
    SECTION("index validation") {
        CHECK_THROWS_AS(elem_sym_two_value(TwoValueCurvature{1, 1, 3}, 4), argument_error);
    }
}

TEST_CASE("cone membership margins") {
    CHECK_THAT(cone_membership(std::vector<double>{1.0, 1.0, 1.0}, 3), WithinAbs(1.0, 1e-15));
    // E_1 = 5/3, E_2 = (-3 - 3 + 9)/3 = 1
    CHECK_THAT(cone_membership(std::vector<double>{-1.0, 3.0, 3.0}, 2), WithinAbs(1.0, 1e-14));
    // boundary: E_2 = 0 is rejected by any positive floor
    CHECK_THAT(cone_membership(std::vector<double>{0.0, 1.0}, 2), WithinAbs(0.0, 1e-16));
    CHECK_THROWS_AS(cone_membership(std::vector<double>{1.0, 1.0}, 3), argument_error);
}

TEST_CASE("curvature ratio on frozen examples") {
    CHECK_THAT(curvature_ratio(std::vector<double>{1.0, 1.0, 1.0, 1.0}, 3), WithinRel(1.0, 1e-14));
    const double th = std::tanh(1.3);
    CHECK_THAT(curvature_ratio(std::vector<double>{th, th, th}, 2), WithinRel(th, 1e-14));
    CHECK_THAT(curvature_ratio(std::vector<double>{1.0, 2.0, 3.0}, 2), WithinRel(11.0 / 6.0, 1e-14));

    CHECK_THROWS_AS(curvature_ratio(std::vector<double>{0.0, 1.0}, 2), degeneracy_error);
    // margin below the floor fails loudly rather than returning garbage
    CHECK_THROWS_AS(curvature_ratio(std::vector<double>{1e-13, 1e-13, 1e-13}, 2),
                    degeneracy_error);
}

TEST_CASE("gradient: symmetry, Euler relation, finite differences") {
    SECTION("equal curvatures give the uniform gradient") {
        for (int n : {2, 4, 7}) {
            const std::vector<double> kappa(n, 1.37);
            for (int k = 1; k <= n; ++k) {
                const auto g = curvature_ratio_gradient(kappa, k);
                for (double gi : g) CHECK_THAT(gi, WithinRel(1.0 / n, 1e-12));
            }
        }
    }
    SECTION("random interior points") {
        std::mt19937_64 eng(23);
        for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {5, 3}, {8, 4}}) {
            for (int rep = 0; rep < 40; ++rep) {
                const auto kappa = testutil::sample_cone(eng, n, k);
                const auto grad = curvature_ratio_gradient(kappa, k);
                const double F = curvature_ratio(kappa, k);

                double euler = 0.0, gsum = 0.0, gsq = 0.0, gmax = 0.0;
                for (int i = 0; i < n; ++i) {
                    CHECK(grad[i] > 0.0);
                    euler += kappa[i] * grad[i];
                    gsum += grad[i];
                    gsq += kappa[i] * kappa[i] * grad[i];
                    gmax = std::max(gmax, std::abs(grad[i]));
                }
                CHECK_THAT(euler, WithinRel(F, 1e-12));
                CHECK(gsum >= 1.0 - 1e-12);
                CHECK(gsq >= F * F - 1e-12 * std::max(1.0, F * F));

                // central differences, h scaled per coordinate
                auto pert = kappa;
                for (int i = 0; i < n; ++i) {
                    const double h = 3e-5 * std::max(1.0, std::abs(kappa[i]));
                    pert[i] = kappa[i] + h;
                    const double fp = curvature_ratio(pert, k);
                    pert[i] = kappa[i] - h;
                    const double fm = curvature_ratio(pert, k);
                    pert[i] = kappa[i];
                    const double fd = (fp - fm) / (2.0 * h);
                    CHECK_THAT(grad[i], WithinAbs(fd, 1e-6 * std::max(std::abs(fd), 1e-3 * gmax)));
                }
            }
        }
    }
}

TEST_CASE("quotient properties on random cone samples") {
    std::mt19937_64 eng(31);
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {5, 3}, {8, 4}}) {
        for (int rep = 0; rep < 200; ++rep) {
            const auto kappa = testutil::sample_cone(eng, n, k);
            const double F = curvature_ratio(kappa, k);

            const double Ekm2 = k >= 2 ? elem_sym_normalized(kappa, k - 2) : 1.0;
            const double Ekm1 = elem_sym_normalized(kappa, k - 1);
            const double Ek = elem_sym_normalized(kappa, k);
            const double Ekp1 = k + 1 <= n ? elem_sym_normalized(kappa, k + 1) : 0.0;
            const double scale = std::max({1.0, Ek * Ek, std::abs(Ekp1 * Ekm1)});
            CHECK(Ekp1 * Ekm1 <= Ek * Ek + 1e-12 * scale);
            if (k + 1 <= n) CHECK(Ekp1 / Ek <= F + 1e-12 * std::max(1.0, F));
            if (k >= 2 && Ekm2 > 0.0)
                CHECK(F <= Ekm1 / Ekm2 + 1e-12 * std::max(1.0, Ekm1 / Ekm2));

            // homogeneity of degree one
            const double t = testutil::uniform(eng, 0.1, 10.0);
            std::vector<double> scaled = kappa;
            for (auto& v : scaled) v *= t;
            CHECK_THAT(curvature_ratio(scaled, k), WithinRel(t * F, 1e-12));

            // midpoint concavity
            const auto kappa2 = testutil::sample_cone(eng, n, k);
            std::vector<double> mid(kappa.size());
            for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (kappa[i] + kappa2[i]);
            const double Fmid = curvature_ratio(mid, k);
            const double F2 = curvature_ratio(kappa2, k);
            CHECK(Fmid >= 0.5 * (F + F2) - 1e-12 * std::max(1.0, std::abs(Fmid)));

            // strict monotonicity in each entry
            std::vector<double> bumped = kappa;
            const int which = static_cast<int>(eng() % kappa.size());
            bumped[which] += 0.05;
            CHECK(curvature_ratio(bumped, k) > F);
        }
    }
}
