#include "glstat/kernels.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace glstat;

TEST(Kernels, GiniAbsDiffExample) {
    const std::vector<double> args{3.0, 1.0};
    EXPECT_EQ(eval_kernel(KernelSpec::gini_abs_diff(), args), 2.0);
}

TEST(Kernels, MinPairwiseExample) {
    const std::vector<double> args{0.0, 1.0, 3.0};
    EXPECT_EQ(eval_kernel(KernelSpec::min_pairwise(3), args), 1.0);
}

TEST(Kernels, RangeExample) {
    const std::vector<double> args{0.0, 1.0, 3.0};
    EXPECT_EQ(eval_kernel(KernelSpec::range(3), args), 3.0);
}

TEST(Kernels, CatalogDimensions) {
    EXPECT_EQ(builtin_kernel("gini_abs_diff").m(), 2u);
    EXPECT_EQ(builtin_kernel("min_pairwise", {{"m", 3}}).m(), 3u);
    EXPECT_EQ(builtin_kernel("identity").m(), 1u);
    EXPECT_EQ(builtin_kernel("range", {{"m", 5}}).m(), 5u);
    EXPECT_EQ(builtin_kernel("gini_abs_diff").kind(), KernelKind::gini_abs_diff);
}

TEST(Kernels, CatalogRejectsBadRequests) {
    EXPECT_THROW((void)builtin_kernel("nope"), std::invalid_argument);
    EXPECT_THROW((void)builtin_kernel("min_pairwise"), std::invalid_argument);
    EXPECT_THROW((void)builtin_kernel("min_pairwise", {{"m", 1}}), std::invalid_argument);
    EXPECT_THROW((void)builtin_kernel("range", {{"m", 2.5}}), std::invalid_argument);
    EXPECT_THROW((void)KernelSpec::min_pairwise(1), std::invalid_argument);
}

TEST(Kernels, DimensionMismatchIsArgumentError) {
    const std::vector<double> args{1.0, 2.0, 3.0};
    EXPECT_THROW((void)eval_kernel(KernelSpec::gini_abs_diff(), args), std::invalid_argument);
}

TEST(Kernels, NonFiniteInputIsDomainError) {
    const std::vector<double> nan_args{1.0, std::numeric_limits<double>::quiet_NaN()};
    const std::vector<double> inf_args{std::numeric_limits<double>::infinity(), 1.0};
    EXPECT_THROW((void)eval_kernel(KernelSpec::gini_abs_diff(), nan_args), std::domain_error);
    EXPECT_THROW((void)eval_kernel(KernelSpec::gini_abs_diff(), inf_args), std::domain_error);
}

TEST(Kernels, BuiltinsArePermutationInvariant) {
    glstat::Xoshiro256StarStar rng(11);
    const std::vector<KernelSpec> kernels{KernelSpec::gini_abs_diff(), KernelSpec::min_pairwise(3),
                                          KernelSpec::min_pairwise(4), KernelSpec::range(3), KernelSpec::range(5),
                                          KernelSpec::identity()};
    for (const auto& k : kernels) {
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> args(k.m());
            for (auto& a : args) {
                a = rng.normal() * 3.0;
            }
            EXPECT_TRUE(is_symmetric_at(k, args)) << k.name();
        }
    }
}

TEST(Kernels, AsymmetricCustomKernelIsDetected) {
    const auto k = KernelSpec::custom("first_minus_second", 2, [](std::span<const double> a) { return a[0] - a[1]; });
    const std::vector<double> args{1.0, 2.0};
    EXPECT_FALSE(is_symmetric_at(k, args));
    EXPECT_EQ(eval_kernel(k, args), -1.0);
}

TEST(Kernels, SignAndZeroProperties) {
    glstat::Xoshiro256StarStar rng(12);
    for (int rep = 0; rep < 500; ++rep) {
        const double x = rng.normal();
        const std::vector<double> same{x, x};
        EXPECT_EQ(eval_kernel(KernelSpec::gini_abs_diff(), same), 0.0);
        std::vector<double> args(4);
        for (auto& a : args) {
            a = rng.normal();
        }
        EXPECT_GE(eval_kernel(KernelSpec::range(4), args), 0.0);
        EXPECT_GE(eval_kernel(KernelSpec::min_pairwise(4), args), 0.0);
    }
}

TEST(Kernels, LipschitzSpotCheck) {
    glstat::Xoshiro256StarStar rng(13);
    const std::vector<KernelSpec> kernels{KernelSpec::gini_abs_diff(), KernelSpec::min_pairwise(3),
                                          KernelSpec::range(3), KernelSpec::identity()};
    for (const auto& k : kernels) {
        for (int rep = 0; rep < 10000; ++rep) {
            std::vector<double> a(k.m());
            std::vector<double> b(k.m());
            double dist2 = 0.0;
            for (std::size_t i = 0; i < k.m(); ++i) {
                a[i] = rng.normal();
                b[i] = a[i] + 0.1 * rng.normal();
                dist2 += (a[i] - b[i]) * (a[i] - b[i]);
            }
            EXPECT_LE(std::abs(k(a) - k(b)), 2.0 * std::sqrt(dist2) + 1e-15) << k.name();
        }
    }
}
