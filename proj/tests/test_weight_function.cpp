#include "glstat/weight_function.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

using namespace glstat;

TEST(WeightFunction, ConstantIntegral) {
    EXPECT_NEAR(j_integral(WeightFunctionJ::constant(1.0), 0.2, 0.5), 0.3, 1e-15);
}

TEST(WeightFunction, ZeroIntegral) {
    EXPECT_EQ(j_integral(WeightFunctionJ::zero(), 0.0, 1.0), 0.0);
    EXPECT_EQ(j_integral(WeightFunctionJ::zero(), 0.3, 0.4), 0.0);
    EXPECT_TRUE(WeightFunctionJ::constant(0.0).is_zero());
}

TEST(WeightFunction, GiniOrderStatisticWeightIntegratesToZero) {
    const auto j = WeightFunctionJ::gini_order_statistic(3);
    EXPECT_NEAR(j_integral(j, 0.0, 1.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(j(0.0), -3.0);
    EXPECT_DOUBLE_EQ(j(1.0), 3.0);
}

TEST(WeightFunction, VanishesOutsideSupport) {
    const auto j = WeightFunctionJ::constant(2.0, 0.25, 0.75);
    EXPECT_EQ(j(0.1), 0.0);
    EXPECT_EQ(j(0.9), 0.0);
    EXPECT_EQ(j(0.5), 2.0);
    EXPECT_NEAR(j_integral(j, 0.0, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(j_integral(j, 0.0, 0.5), 0.5, 1e-15);
    EXPECT_EQ(j_integral(j, 0.8, 1.0), 0.0);
}

TEST(WeightFunction, PiecewisePolynomialIntegral) {
    // 3t^2 on [0, 0.5], 1 + t on [0.5, 1]
    const auto j = WeightFunctionJ::piecewise({{0.0, 0.5, {0.0, 0.0, 3.0}}, {0.5, 1.0, {1.0, 1.0}}});
    EXPECT_NEAR(j_integral(j, 0.0, 1.0), 0.125 + 0.5 + (1.0 - 0.25) / 2.0, 1e-15);
    EXPECT_NEAR(j_integral(j, 0.25, 0.75), (0.125 - 0.015625) + 0.25 + (0.5625 - 0.25) / 2.0, 1e-15);
    EXPECT_NEAR(j.sup_abs(), 2.0, 1e-12);
}

TEST(WeightFunction, AdditivityOverSubintervals) {
    const auto j = WeightFunctionJ::linear(-1.0, 3.0, 0.1, 0.9);
    for (int k = 1; k < 10; ++k) {
        const double mid = k / 10.0;
        EXPECT_NEAR(j_integral(j, 0.0, mid) + j_integral(j, mid, 1.0), j_integral(j, 0.0, 1.0), 1e-15);
    }
}

TEST(WeightFunction, RejectsBadIntervalsAndPieces) {
    const auto j = WeightFunctionJ::constant(1.0);
    EXPECT_THROW((void)j_integral(j, -0.1, 0.5), std::invalid_argument);
    EXPECT_THROW((void)j_integral(j, 0.6, 0.5), std::invalid_argument);
    EXPECT_THROW((void)j_integral(j, 0.5, 1.1), std::invalid_argument);
    EXPECT_THROW((void)WeightFunctionJ::constant(1.0, 0.7, 0.2), std::invalid_argument);
    EXPECT_THROW((void)WeightFunctionJ::piecewise({{0.0, 0.6, {1.0}}, {0.5, 1.0, {1.0}}}), std::invalid_argument);
}
