// Copyright 2026 The opfdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opfdist/errors.hpp"
#include "opfdist/stats.hpp"
#include "support.hpp"

namespace opfdist {
namespace {

ErrorKind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::InvalidArgument;
}

TEST(MidRanks, TiesShareTheAverage) {
    const std::vector<double> v{3.0, 1.0, 3.0, 2.0, 3.0};
    EXPECT_EQ(mid_ranks(v), (std::vector<double>{4, 1, 4, 2, 4}));
    const std::vector<double> near{1.0, 1.0 + 1e-14, 0.5};
    EXPECT_EQ(mid_ranks(near), (std::vector<double>{2.5, 2.5, 1}));
}

TEST(Wilcoxon, TenPairsWithStatisticEight) {
    // Ranks 1..10; the negative differences carry ranks 1, 3, 4 (sum 8).
    std::vector<double> a, b;
    for (int r = 1; r <= 10; ++r) {
        const bool negative = r == 1 || r == 3 || r == 4;
        a.push_back(negative ? 0.0 : r);
        b.push_back(negative ? r : 0.0);
    }
    const auto res = wilcoxon_signed_rank(a, b, 0.05);
    EXPECT_EQ(res.statistic, 8.0);
    EXPECT_TRUE(res.exact);
    EXPECT_NEAR(res.p_value, 50.0 / 1024.0, 1e-15);
    EXPECT_NEAR(res.p_value, 0.0488, 5e-5);
    EXPECT_TRUE(res.reject);
}

TEST(Wilcoxon, MatchesSignFlipEnumeration) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> coarse(-4, 4);  // forces ties and zeros
    std::uniform_real_distribution<double> fine(-1.0, 1.0);
    for (std::size_t n = 5; n <= 12; ++n)
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<double> a(n), b(n, 0.0), diff(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = trial % 2 ? coarse(rng) * 0.25 : fine(rng);
                diff[i] = a[i] - b[i];
            }
            const auto res = wilcoxon_signed_rank(a, b, 0.05);
            EXPECT_NEAR(res.p_value, testing::enumerated_wilcoxon_p(diff), 1e-12) << "n=" << n;
        }
}

TEST(Wilcoxon, AllZeroDifferences) {
    const std::vector<double> a{0.5, 0.6, 0.7, 0.8, 0.9};
    const auto res = wilcoxon_signed_rank(a, a, 0.05);
    EXPECT_TRUE(res.all_zero);
    EXPECT_EQ(res.p_value, 1.0);
    EXPECT_FALSE(res.reject);
}

TEST(Wilcoxon, LargeShiftRejects) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.0, 0.1);
    std::vector<double> a(25), b(25);
    for (std::size_t i = 0; i < 25; ++i) {
        b[i] = u(rng);
        a[i] = b[i] + 0.5 + u(rng);
    }
    const auto res = wilcoxon_signed_rank(a, b, 0.05);
    EXPECT_TRUE(res.exact);
    EXPECT_LT(res.p_value, 0.001);
    EXPECT_TRUE(res.reject);
}

TEST(Wilcoxon, NormalApproximationAboveExactLimit) {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> a(40), b(40, 0.0);
    for (auto& x : a) x = z(rng);
    const auto res = wilcoxon_signed_rank(a, b, 0.05);
    EXPECT_FALSE(res.exact);
    EXPECT_GT(res.p_value, 0.0);
    EXPECT_LE(res.p_value, 1.0);
    // Hand computation of the approximation for this sample.
    std::vector<double> mags;
    for (const double x : a) mags.push_back(std::fabs(x));
    const auto ranks = mid_ranks(mags);
    double wplus = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0) wplus += ranks[i];
    const double n = 40, mean = n * (n + 1) / 4, sd = std::sqrt(n * (n + 1) * (2 * n + 1) / 24);
    const double zstat = (std::fabs(wplus - mean) - 0.5) / sd;
    EXPECT_NEAR(res.p_value, std::erfc(zstat / std::sqrt(2.0)), 1e-12);
}

TEST(Wilcoxon, ArgumentErrors) {
    const std::vector<double> four{1, 2, 3, 4}, five{1, 2, 3, 4, 5}, six{1, 2, 3, 4, 5, 6};
    EXPECT_EQ(kind_of([&] { wilcoxon_signed_rank(four, four, 0.05); }), ErrorKind::TooFewPairs);
    EXPECT_EQ(kind_of([&] { wilcoxon_signed_rank(five, six, 0.05); }), ErrorKind::LengthMismatch);
    EXPECT_EQ(kind_of([&] { wilcoxon_signed_rank(five, five, 1.5); }), ErrorKind::InvalidArgument);
}

TEST(Nemenyi, PublishedCriticalValues) {
    // Two-tailed Nemenyi values for alpha = 0.05 as commonly tabulated
    // (three decimals, truncated in some tables).
    EXPECT_NEAR(nemenyi_q(2), 1.960, 1e-3);
    EXPECT_NEAR(nemenyi_q(3), 2.343, 1e-3);
    EXPECT_NEAR(nemenyi_q(5), 2.728, 1e-3);
    EXPECT_NEAR(nemenyi_q(10), 3.164, 1e-3);
    EXPECT_NEAR(nemenyi_q(50), 3.992343, 1e-9);
    EXPECT_NEAR(nemenyi_q(65), (4.076038 + 4.145576) / 2, 1e-12);
    EXPECT_THROW(nemenyi_q(1), Error);
    EXPECT_THROW(nemenyi_q(101), Error);
    EXPECT_THROW(nemenyi_q(5, 0.1), Error);
}

TEST(Nemenyi, CriticalDifferenceFormula) {
    EXPECT_NEAR(nemenyi_critical_difference(3, 10), 2.343701 * std::sqrt(3.0 * 4.0 / 60.0), 1e-12);
    EXPECT_NEAR(nemenyi_critical_difference(50, 550), 3.992343 * std::sqrt(50.0 * 51.0 / 3300.0), 1e-12);
}

TEST(Friedman, ForcedOrderingAndRankConservation) {
    std::vector<std::vector<double>> blocks;
    for (int b = 0; b < 8; ++b) blocks.push_back({0.9, 0.5 + 0.01 * b, 0.1});
    const auto r = friedman_test(blocks);
    EXPECT_EQ(r.mean_ranks, (std::vector<double>{3.0, 2.0, 1.0}));
    EXPECT_NEAR(r.statistic, 16.0, 1e-12);  // N (k - 1) when every block agrees
    EXPECT_LT(r.p_value, 0.001);
    double sum = 0;
    for (const double m : r.mean_ranks) sum += m;
    EXPECT_NEAR(sum / 3.0, 2.0, 1e-15);
}

TEST(Friedman, IdenticalClassifiers) {
    const std::vector<std::vector<double>> blocks(5, std::vector<double>{0.7, 0.7, 0.7, 0.7});
    const auto r = friedman_test(blocks);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
    for (const double m : r.mean_ranks) EXPECT_EQ(m, 2.5);
}

TEST(Friedman, TieCorrectedStatisticByHand) {
    // k = 3, N = 2; second block has a tie.
    const std::vector<std::vector<double>> blocks{{0.1, 0.2, 0.3}, {0.5, 0.5, 0.9}};
    // Rank sums: (1 + 1.5, 2 + 1.5, 3 + 3) = (2.5, 3.5, 6).
    const double s = 2.5 * 2.5 + 3.5 * 3.5 + 36.0;
    const double raw = 12.0 / (2 * 3 * 4) * s - 3 * 2 * 4;
    const double corrected = raw / (1.0 - 6.0 / (2 * 24));
    EXPECT_NEAR(friedman_test(blocks).statistic, corrected, 1e-12);
}

TEST(Friedman, PermutationInvariance) {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::vector<double>> blocks(12, std::vector<double>(5));
    for (auto& b : blocks)
        for (auto& v : b) v = std::round(u(rng) * 10) / 10;
    const auto base = friedman_test(blocks);
    const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    auto permuted = blocks;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t j = 0; j < 5; ++j) permuted[b][j] = blocks[b][perm[j]];
    const auto other = friedman_test(permuted);
    EXPECT_NEAR(other.statistic, base.statistic, 1e-12);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(other.mean_ranks[j], base.mean_ranks[perm[j]], 1e-12);
}

TEST(Friedman, Errors) {
    EXPECT_EQ(kind_of([] { friedman_test({{0.1, 0.2}, {0.3, 0.4}}); }), ErrorKind::TooFewClassifiers);
    EXPECT_THROW(friedman_test({{0.1, 0.2, 0.3}}), Error);
}

BenchmarkMatrix filled_matrix(std::size_t datasets, std::size_t classifiers, std::size_t runs, auto value) {
    std::vector<std::string> dn, cn;
    for (std::size_t d = 0; d < datasets; ++d) dn.push_back("ds" + std::to_string(d));
    for (std::size_t c = 0; c < classifiers; ++c) cn.push_back("C" + std::to_string(c));
    BenchmarkMatrix m(dn, cn, runs);
    for (std::size_t d = 0; d < datasets; ++d)
        for (std::size_t c = 0; c < classifiers; ++c)
            for (std::size_t r = 0; r < runs; ++r)
                for (std::size_t f = 0; f < 2; ++f)
                    m.at(d, c, r, f) = Cell{CellStatus::Ok, value(d, c, r, f), {}, 0, 0};
    return m;
}

TEST(FriedmanNemenyi, MatrixBlocksAreDatasetRunPairs) {
    const auto m = filled_matrix(2, 3, 5, [](auto, auto c, auto r, auto f) {
        return 0.5 + 0.1 * static_cast<double>(c) + 0.001 * static_cast<double>(r + f);
    });
    const auto rep = friedman_nemenyi(m, 0.05);
    EXPECT_EQ(rep.friedman.n_blocks, 10u);
    EXPECT_EQ(rep.friedman.mean_ranks, (std::vector<double>{1, 2, 3}));
    EXPECT_NEAR(rep.critical_difference, nemenyi_critical_difference(3, 10), 0);
    EXPECT_TRUE(rep.significant[0][2]);
    EXPECT_FALSE(rep.significant[0][0]);
}

TEST(FriedmanNemenyi, MissingCellsAndTooFewClassifiers) {
    auto m = filled_matrix(1, 3, 5, [](auto...) { return 0.5; });
    m.at(0, 1, 2, 0).status = CellStatus::Failed;
    EXPECT_EQ(kind_of([&] { friedman_nemenyi(m, 0.05); }), ErrorKind::MissingCells);
    const auto two = filled_matrix(1, 2, 5, [](auto...) { return 0.5; });
    EXPECT_EQ(kind_of([&] { friedman_nemenyi(two, 0.05); }), ErrorKind::TooFewClassifiers);
}

TEST(Analyse, SkipsBrokenColumnsAndKeepsNotes) {
    auto m = filled_matrix(1, 4, 6, [](auto, auto c, auto r, auto) {
        return 0.6 + 0.05 * static_cast<double>(c) + 0.01 * static_cast<double>(r % 3);
    });
    m.at(0, 3, 0, 1) = Cell{CellStatus::Failed, 0, "SingleClass: boom", 0, 0};
    const auto rep = analyse(m, 0.05);
    EXPECT_EQ(rep.classifiers, (std::vector<std::string>{"C0", "C1", "C2"}));
    ASSERT_EQ(rep.wilcoxon.size(), 6u);
    std::size_t not_applicable = 0;
    for (const auto& e : rep.wilcoxon) not_applicable += e.applicable ? 0 : 1;
    EXPECT_EQ(not_applicable, 3u);
}

TEST(Analyse, FewRunsMakesWilcoxonInapplicable) {
    const auto m = filled_matrix(1, 3, 3, [](auto, auto c, auto, auto) { return 0.1 * static_cast<double>(c); });
    const auto pairs = pairwise_wilcoxon(m, 0.05);
    ASSERT_EQ(pairs.size(), 3u);
    for (const auto& e : pairs) {
        EXPECT_FALSE(e.applicable);
        EXPECT_FALSE(e.note.empty());
    }
}

} // namespace
} // namespace opfdist
