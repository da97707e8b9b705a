#include "glstat/errors.hpp"
#include "glstat/ustat.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <vector>

using namespace glstat;
using testutil::each_index_tuple;

namespace {

double abs_diff(const std::vector<double>& a) { return std::abs(a[0] - a[1]); }

double min_pair(const std::vector<double>& a) {
    double best = std::abs(a[0] - a[1]);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            best = std::min(best, std::abs(a[i] - a[j]));
        }
    }
    return best;
}

double brute_g1(const std::vector<double>& xs, std::size_t m, double x,
                const std::function<double(const std::vector<double>&)>& h, bool literal) {
    const std::size_t n = xs.size();
    double partial = 0.0;
    double partial_count = 0.0;
    each_index_tuple(n, m - 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<double> args{x};
        for (auto i : idx) {
            args.push_back(xs[i]);
        }
        partial += h(args);
        partial_count += 1.0;
    });
    double full = 0.0;
    double full_count = 0.0;
    each_index_tuple(n, m, [&](const std::vector<std::size_t>& idx) {
        std::vector<double> args;
        for (auto i : idx) {
            args.push_back(xs[i]);
        }
        full += h(args);
        full_count += 1.0;
    });
    if (literal) {
        return partial / std::pow(double(n), double(m - 1)) - full / std::pow(double(n), double(m));
    }
    return partial / partial_count - full / full_count;
}

}  // namespace

TEST(Ustat, GiniOnThreePoints) {
    const Sample s{0, 1, 2};
    EXPECT_DOUBLE_EQ(u_statistic(s, KernelSpec::gini_abs_diff()), 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(u_statistic(s, KernelSpec::gini_abs_diff(), {false, kDefaultEnumerationCap}), 4.0 / 3.0);
    const std::vector<double> v{0, 1, 2};
    EXPECT_DOUBLE_EQ(gini_order_statistic_form(v), 4.0 / 3.0);
}

TEST(Ustat, ConstantSampleMinPairwiseIsZero) {
    EXPECT_EQ(u_statistic(Sample{2.5, 2.5, 2.5, 2.5}, KernelSpec::min_pairwise(3)), 0.0);
}

TEST(Ustat, TooFewObservations) {
    EXPECT_THROW((void)u_statistic(Sample{1.0, 2.0}, KernelSpec::min_pairwise(3)), InsufficientData);
    EXPECT_THROW((void)kernel_values(Sample{1.0}, KernelSpec::gini_abs_diff()), InsufficientData);
}

TEST(Ustat, SampleRejectsNonFinite) {
    EXPECT_THROW((Sample{1.0, std::nan("")}), std::domain_error);
}

TEST(Ustat, KernelValueExamples) {
    const auto a = kernel_values(Sample{0, 1, 2}, KernelSpec::gini_abs_diff());
    EXPECT_EQ(std::vector<double>(a.sorted_values().begin(), a.sorted_values().end()), (std::vector<double>{1, 1, 2}));
    const auto b = kernel_values(Sample{0, 1, 3}, KernelSpec::min_pairwise(3));
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b.sorted_values()[0], 1.0);
    const auto c = kernel_values(Sample{5}, KernelSpec::identity());
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.sorted_values()[0], 5.0);
}

TEST(Ustat, CapacityErrorMentionsSubsampling) {
    try {
        (void)kernel_values(testutil::normal_sample(100, 1), KernelSpec::min_pairwise(3), 1000);
        FAIL() << "expected CapacityExceeded";
    } catch (const CapacityExceeded& e) {
        EXPECT_NE(std::string(e.what()).find("subsampl"), std::string::npos);
    }
}

TEST(Ustat, EmpiricalUCdfExamples) {
    const Sample s{0, 1, 2};
    const auto k = KernelSpec::gini_abs_diff();
    EXPECT_DOUBLE_EQ(empirical_u_cdf(s, k, 1.0), 2.0 / 3.0);
    EXPECT_EQ(empirical_u_cdf(s, k, 0.5), 0.0);
    EXPECT_EQ(empirical_u_cdf(s, k, 2.0), 1.0);
    EXPECT_EQ(empirical_u_cdf(s, k, 100.0), 1.0);
}

TEST(Ustat, UQuantileExamples) {
    const Sample s{0, 1, 2};
    const auto k = KernelSpec::gini_abs_diff();
    EXPECT_EQ(u_quantile(s, k, 0.5), 1.0);
    EXPECT_EQ(u_quantile(s, k, 1.0), 2.0);
    EXPECT_EQ(u_quantile(Sample{0, 1, 3}, KernelSpec::min_pairwise(3), 0.5), 1.0);
    EXPECT_THROW((void)u_quantile(s, k, 0.0), std::invalid_argument);
    EXPECT_THROW((void)u_quantile(s, k, 1.5), std::invalid_argument);
}

TEST(Ustat, QuantileRankConventions) {
    EXPECT_EQ(quantile_rank(0.5, 4, QuantileConvention::ceil), 2u);
    EXPECT_EQ(quantile_rank(0.5, 5, QuantileConvention::ceil), 3u);
    EXPECT_EQ(quantile_rank(0.5, 5, QuantileConvention::floor_bracket), 2u);
    EXPECT_EQ(quantile_rank(0.1, 5, QuantileConvention::floor_bracket), 1u);
    EXPECT_EQ(quantile_rank(0.3, 10, QuantileConvention::ceil), 3u);
    EXPECT_EQ(quantile_rank(0.7, 10, QuantileConvention::floor_bracket), 7u);
}

TEST(Ustat, EmpiricalCdfExamples) {
    const Sample s{0, 1, 2};
    EXPECT_DOUBLE_EQ(empirical_cdf(s, 1.0), 2.0 / 3.0);
    EXPECT_EQ(empirical_cdf(s, -1.0), 0.0);
    EXPECT_EQ(empirical_cdf(s, 5.0), 1.0);
    EXPECT_THROW((void)empirical_cdf(Sample{}, 0.0), InsufficientData);
}

TEST(Ustat, UCdfIsAValidStepCdf) {
    const Sample s = testutil::normal_sample(9, 3);
    const auto values = kernel_values(s, KernelSpec::min_pairwise(3));
    const double N = static_cast<double>(values.size());
    double prev = 0.0;
    const auto sv = values.sorted_values();
    EXPECT_EQ(values.cdf(sv.front() - 1.0), 0.0);
    EXPECT_EQ(values.cdf(sv.back()), 1.0);
    for (double t = sv.front() - 0.1; t <= sv.back() + 0.1; t += 0.001) {
        const double c = values.cdf(t);
        EXPECT_GE(c, prev);
        const double steps = c * N;
        EXPECT_NEAR(steps, std::round(steps), 1e-9);
        prev = c;
    }
}

TEST(Ustat, QuantileCdfConsistency) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::vector<double> xs = testutil::normal_values(8, seed);
        xs[3] = xs[1];  // force ties
        const Sample s(xs);
        const auto values = kernel_values(s, KernelSpec::gini_abs_diff());
        const auto sv = values.sorted_values();
        for (std::size_t i = 0; i < sv.size(); ++i) {
            const double level = values.cdf(sv[i]);
            const double q = values.quantile(level);
            EXPECT_LE(q, sv[i]);
            const bool smallest_at_level = i == 0 || values.cdf(sv[i - 1]) < level;
            if (smallest_at_level) {
                EXPECT_EQ(q, sv[i]);
            }
        }
    }
}

TEST(Ustat, FastGiniMatchesEnumeration) {
    glstat::Xoshiro256StarStar rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.below(199);
        const Sample s = testutil::normal_sample(n, 1000 + rep);
        const double fast = u_statistic(s, KernelSpec::gini_abs_diff());
        const double slow = u_statistic(s, KernelSpec::gini_abs_diff(), {false, kDefaultEnumerationCap});
        EXPECT_LE(testutil::rel_diff(fast, slow), 1e-12) << "n=" << n;
    }
}

TEST(Ustat, UStatisticMatchesBruteForce) {
    const std::vector<double> xs = testutil::normal_values(9, 77);
    double total = 0.0;
    double count = 0.0;
    each_index_tuple(xs.size(), 3, [&](const std::vector<std::size_t>& idx) {
        total += min_pair({xs[idx[0]], xs[idx[1]], xs[idx[2]]});
        count += 1.0;
    });
    EXPECT_NEAR(u_statistic(Sample(xs), KernelSpec::min_pairwise(3)), total / count, 1e-14);
}

TEST(Ustat, G1HatExamples) {
    EXPECT_DOUBLE_EQ(hoeffding_g1_hat(Sample{0, 1}, KernelSpec::gini_abs_diff(), 0.0), -0.5);
    EXPECT_NEAR(hoeffding_g1_hat(Sample{0, 1, 2}, KernelSpec::gini_abs_diff(), 2.0), -1.0 / 3.0, 1e-15);
    const Sample constant{4, 4, 4, 4};
    for (const auto& k : {KernelSpec::gini_abs_diff(), KernelSpec::min_pairwise(3), KernelSpec::range(3),
                          KernelSpec::identity()}) {
        EXPECT_EQ(hoeffding_g1_hat(constant, k, 4.0), 0.0) << k.name();
        EXPECT_EQ(hoeffding_g1_hat(constant, k, 4.0, Normalization::paper_literal), 0.0) << k.name();
    }
}

TEST(Ustat, G1HatMatchesBruteForceOracle) {
    for (std::size_t n = 3; n <= 12; ++n) {
        const std::vector<double> xs = testutil::normal_values(n, 500 + n);
        const Sample s(xs);
        for (bool literal : {false, true}) {
            const auto mode = literal ? Normalization::paper_literal : Normalization::combinatorial;
            const auto gini_all = hoeffding_g1_hat_all(s, KernelSpec::gini_abs_diff(), mode);
            const auto q_all = hoeffding_g1_hat_all(s, KernelSpec::min_pairwise(3), mode);
            for (std::size_t i = 0; i < n; ++i) {
                const double og = brute_g1(xs, 2, xs[i], abs_diff, literal);
                const double oq = brute_g1(xs, 3, xs[i], min_pair, literal);
                EXPECT_NEAR(gini_all[i], og, 1e-12);
                EXPECT_NEAR(q_all[i], oq, 1e-12);
                EXPECT_NEAR(hoeffding_g1_hat(s, KernelSpec::gini_abs_diff(), xs[i], mode), og, 1e-12);
                EXPECT_NEAR(hoeffding_g1_hat(s, KernelSpec::min_pairwise(3), xs[i], mode), oq, 1e-12);
            }
            const double off = 0.123;
            EXPECT_NEAR(hoeffding_g1_hat(s, KernelSpec::min_pairwise(3), off, mode),
                        brute_g1(xs, 3, off, min_pair, literal), 1e-12);
        }
    }
}

// With self-inclusion the sample average of g1_hat is (1/n^2) sum_i h(X_i, X_i) - U_n / n
// for m = 2 in combinatorial mode, which is -U_n / n for the Gini kernel.
TEST(Ustat, G1HatSampleAverageIdentity) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Sample s = testutil::normal_sample(5 + seed, seed);
        const auto g = hoeffding_g1_hat_all(s, KernelSpec::gini_abs_diff());
        double avg = 0.0;
        for (double v : g) {
            avg += v;
        }
        avg /= static_cast<double>(g.size());
        const double u = u_statistic(s, KernelSpec::gini_abs_diff());
        EXPECT_NEAR(avg, -u / static_cast<double>(s.size()), 1e-12);
    }
}

TEST(Ustat, ProjectionDenominators) {
    const auto c = projection_denominators(6, 3, Normalization::combinatorial);
    EXPECT_EQ(c.partial, 15.0);
    EXPECT_EQ(c.full, 20.0);
    const auto l = projection_denominators(6, 3, Normalization::paper_literal);
    EXPECT_EQ(l.partial, 36.0);
    EXPECT_EQ(l.full, 216.0);
}

TEST(Ustat, PopulationHoeffdingExamples) {
    const std::vector<WeightedAtom> two{{0.0, 0.5}, {1.0, 0.5}};
    const auto d = hoeffding_decompose_population(two, KernelSpec::gini_abs_diff());
    EXPECT_NEAR(d.theta(), 0.5, 1e-15);
    const std::vector<std::size_t> zero{0};
    EXPECT_NEAR(d.g(zero), 0.0, 1e-15);

    const std::vector<WeightedAtom> point{{2.0, 1.0}};
    const auto p = hoeffding_decompose_population(point, KernelSpec::range(3));
    EXPECT_EQ(p.theta(), 0.0);
    const auto q = hoeffding_decompose_population(point, KernelSpec::identity());
    EXPECT_EQ(q.theta(), 2.0);
    const std::vector<std::size_t> one{0};
    EXPECT_EQ(q.g(one), 0.0);
}

TEST(Ustat, PopulationHoeffdingRejectsBadLaws) {
    const std::vector<WeightedAtom> bad_sum{{0.0, 0.5}, {1.0, 0.4}};
    EXPECT_THROW((void)hoeffding_decompose_population(bad_sum, KernelSpec::gini_abs_diff()), std::invalid_argument);
    const std::vector<WeightedAtom> negative{{0.0, 1.5}, {1.0, -0.5}};
    EXPECT_THROW((void)hoeffding_decompose_population(negative, KernelSpec::gini_abs_diff()), std::invalid_argument);
    const std::vector<WeightedAtom> many{{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}};
    EXPECT_THROW((void)hoeffding_decompose_population(many, KernelSpec::min_pairwise(3), 10), CapacityExceeded);
}

TEST(Ustat, PopulationHoeffdingReconstructsKernelForPairs) {
    const std::vector<WeightedAtom> law{{-1.0, 0.2}, {0.5, 0.3}, {2.0, 0.1}, {3.5, 0.4}};
    const auto k = KernelSpec::gini_abs_diff();
    const auto d = hoeffding_decompose_population(law, k);
    for (std::size_t a = 0; a < law.size(); ++a) {
        double eg1 = 0.0;
        for (std::size_t b = 0; b < law.size(); ++b) {
            const std::vector<std::size_t> ia{a};
            const std::vector<std::size_t> ib{b};
            const std::vector<std::size_t> ab{a, b};
            const double h = std::abs(law[a].value - law[b].value);
            EXPECT_NEAR(d.theta() + d.g(ia) + d.g(ib) + d.g(ab), h, 1e-12);
            eg1 += law[b].probability * d.g(ab);
        }
        EXPECT_NEAR(eg1, 0.0, 1e-12);
    }
    double mean_g1 = 0.0;
    for (std::size_t a = 0; a < law.size(); ++a) {
        const std::vector<std::size_t> ia{a};
        mean_g1 += law[a].probability * d.g(ia);
    }
    EXPECT_NEAR(mean_g1, 0.0, 1e-12);
}

TEST(Ustat, KernelValueDumps) {
    const auto values = kernel_values(Sample{0, 1, 2}, KernelSpec::gini_abs_diff());
    std::ostringstream csv;
    write_csv(values, csv);
    EXPECT_EQ(csv.str(), "value\n1\n1\n2\n");
    std::ostringstream bin;
    write_binary(values, bin);
    EXPECT_EQ(bin.str().size(), 24u);
    double first = 0.0;
    std::memcpy(&first, bin.str().data(), 8);
    EXPECT_EQ(first, 1.0);
}

TEST(Ustat, BinomialHelpers) {
    EXPECT_EQ(binomial(5, 2), 10u);
    EXPECT_EQ(binomial(1000, 3), 166167000u);
    EXPECT_EQ(binomial(3, 5), 0u);
    EXPECT_EQ(binomial(10000, 5000), UINT64_MAX);
    EXPECT_DOUBLE_EQ(binomial_real(1000, 3), 166167000.0);
}
