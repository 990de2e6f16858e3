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

#include <random>

#include "opfdist/errors.hpp"
#include "opfdist/forest.hpp"
#include "support.hpp"

namespace opfdist {
namespace {

constexpr auto kNone = TrainedForest::kNoPredecessor;

std::vector<Sample> line_example() {
    // Two classes on a line: A at 0 and 1, B at 3 and 4.
    return {{FeatureVector{{0.0}}, 0, 0}, {FeatureVector{{1.0}}, 0, 1},
            {FeatureVector{{3.0}}, 1, 2}, {FeatureVector{{4.0}}, 1, 3}};
}

ErrorKind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;  // unreachable in the tests below
}

TEST(Forest, LineExampleTrainsAsExpected) {
    const TrainingGraph g(line_example(), DistanceId::D3);
    EXPECT_EQ(find_prototypes(g), (std::vector<std::size_t>{1, 2}));
    const auto f = train(g);
    EXPECT_EQ(std::vector<double>(f.cost().begin(), f.cost().end()), (std::vector<double>{1, 0, 0, 1}));
    EXPECT_EQ(std::vector<std::size_t>(f.predecessor().begin(), f.predecessor().end()),
              (std::vector<std::size_t>{1, kNone, kNone, 2}));
    EXPECT_EQ(std::vector<Label>(f.root_label().begin(), f.root_label().end()), (std::vector<Label>{0, 0, 1, 1}));
    EXPECT_EQ(std::vector<std::size_t>(f.ordered_nodes().begin(), f.ordered_nodes().end()),
              (std::vector<std::size_t>{1, 2, 0, 3}));
    EXPECT_TRUE(f.is_prototype(1));
    EXPECT_EQ(f.root_of(3), 2u);
}

TEST(Forest, LineExampleClassifies) {
    const auto f = train(TrainingGraph(line_example(), DistanceId::D3));
    const auto p = classify(f, FeatureVector{{1.9}});
    EXPECT_EQ(p.label, 0u);
    EXPECT_NEAR(p.cost, 0.9, 1e-15);
    EXPECT_EQ(p.conqueror, 1u);
    // Exhaustive min over s of max(C(s), d(s, q)) for q = 4: node 2 offers
    // max(0, 1) = 1 and is scanned before node 3 (cost 1).
    const auto q = classify(f, FeatureVector{{4.0}});
    EXPECT_EQ(q.label, 1u);
    EXPECT_EQ(q.cost, 1.0);
    EXPECT_EQ(q.conqueror, 2u);
    EXPECT_EQ(classify_full_scan(f, FeatureVector{{4.0}}), q);
}

TEST(Forest, GraphValidation) {
    EXPECT_EQ(kind_of([] { TrainingGraph({{FeatureVector{{1.0}}, 0, 0}}, DistanceId::D3); }),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] {
                  TrainingGraph({{FeatureVector{{1.0}}, 0, 0}, {FeatureVector{{1.0, 2.0}}, 1, 1}}, DistanceId::D3);
              }),
              ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] {
                  TrainingGraph({{FeatureVector{{1.0}}, 0, 0}, {FeatureVector{{2.0}}, 0, 1}}, DistanceId::D3);
              }),
              ErrorKind::SingleClass);
}

TEST(Forest, QueryDimensionChecked) {
    const auto f = train(TrainingGraph(line_example(), DistanceId::D3));
    EXPECT_EQ(kind_of([&] { classify(f, FeatureVector{{1.0, 2.0}}); }), ErrorKind::DimensionMismatch);
}

TEST(Forest, PrototypesMatchKruskal) {
    std::mt19937_64 rng(21);
    for (int g = 0; g < 200; ++g) {
        const auto samples = testing::random_samples(rng, 4 + rng() % 12, 2 + rng() % 3, 4);
        for (const auto id : {DistanceId::D3, DistanceId::D6, DistanceId::D8, DistanceId::D17}) {
            const TrainingGraph graph(samples, id);
            EXPECT_EQ(find_prototypes(graph), testing::kruskal_prototypes(samples, id)) << info(id).code;
        }
    }
}

TEST(Forest, CostsEqualBottleneckOracleForEveryMeasure) {
    std::mt19937_64 rng(22);
    for (int g = 0; g < 60; ++g) {
        const auto samples = testing::random_samples(rng, 4 + rng() % 9, 2 + rng() % 3, 5);
        for (const auto& d : registry()) {
            const TrainingGraph graph(samples, d.id);
            const auto f = train(graph);
            const std::vector<std::size_t> protos(f.prototypes().begin(), f.prototypes().end());
            const auto oracle = testing::bottleneck_costs(samples, d.id, protos);
            for (std::size_t i = 0; i < samples.size(); ++i) ASSERT_EQ(f.cost()[i], oracle[i]) << d.code;
        }
    }
}

TEST(Forest, StructuralInvariants) {
    std::mt19937_64 rng(23);
    for (int g = 0; g < 50; ++g) {
        const auto samples = testing::random_samples(rng, 10, 3, 3);
        const auto f = train(TrainingGraph(samples, DistanceId::D3));
        for (std::size_t i = 1; i < f.size(); ++i)
            EXPECT_LE(f.cost()[f.ordered_nodes()[i - 1]], f.cost()[f.ordered_nodes()[i]]);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto root = f.root_of(i);
            EXPECT_TRUE(f.is_prototype(root));
            EXPECT_EQ(f.root_label()[i], samples[root].label);
            if (!f.is_prototype(i)) {
                const auto p = f.predecessor()[i];
                EXPECT_EQ(f.cost()[i], std::max(f.cost()[p], evaluate(DistanceId::D3, samples[p].features,
                                                                      samples[i].features)));
            }
        }
        // Rebuilding from parts must reproduce the forest.
        const auto copy = TrainedForest::from_parts(
            samples, f.distance(), f.options(), {f.prototypes().begin(), f.prototypes().end()},
            {f.cost().begin(), f.cost().end()}, {f.predecessor().begin(), f.predecessor().end()},
            {f.root_label().begin(), f.root_label().end()}, {f.ordered_nodes().begin(), f.ordered_nodes().end()});
        EXPECT_EQ(copy, f);
    }
}

TEST(Forest, FromPartsRejectsBrokenStructure) {
    const auto f = train(TrainingGraph(line_example(), DistanceId::D3));
    auto parts = [&] {
        return std::tuple{line_example(),
                          std::vector<std::size_t>(f.prototypes().begin(), f.prototypes().end()),
                          std::vector<double>(f.cost().begin(), f.cost().end()),
                          std::vector<std::size_t>(f.predecessor().begin(), f.predecessor().end()),
                          std::vector<Label>(f.root_label().begin(), f.root_label().end()),
                          std::vector<std::size_t>(f.ordered_nodes().begin(), f.ordered_nodes().end())};
    };
    const auto build = [](auto t) {
        auto& [s, p, c, pr, rl, o] = t;
        return TrainedForest::from_parts(s, DistanceId::D3, {}, p, c, pr, rl, o);
    };
    EXPECT_NO_THROW(build(parts()));
    {
        auto t = parts();
        std::get<5>(t)[0] = std::get<5>(t)[1];  // not a permutation
        EXPECT_THROW(build(t), Error);
    }
    {
        auto t = parts();
        std::get<3>(t)[0] = 0;  // self loop
        EXPECT_THROW(build(t), Error);
    }
    {
        auto t = parts();
        std::get<4>(t)[3] = 0;  // root label disagrees
        EXPECT_THROW(build(t), Error);
    }
    {
        auto t = parts();
        std::get<2>(t)[1] = 0.5;  // prototype with non-zero cost
        EXPECT_THROW(build(t), Error);
    }
}

TEST(Forest, EarlyExitMatchesFullScan) {
    std::mt19937_64 rng(24);
    for (int g = 0; g < 40; ++g) {
        const auto samples = testing::random_samples(rng, 4 + rng() % 9, 2 + rng() % 3, 5);
        for (const auto& d : registry()) {
            const auto f = train(TrainingGraph(samples, d.id));
            for (int q = 0; q < 5; ++q) {
                const FeatureVector query(testing::uniform_vector(rng, 5));
                ASSERT_EQ(classify(f, query), classify_full_scan(f, query)) << d.code;
            }
        }
    }
}

TEST(Forest, ClassifyIsTheExhaustiveMinimum) {
    std::mt19937_64 rng(25);
    const auto samples = testing::random_samples(rng, 12, 3, 4);
    const auto f = train(TrainingGraph(samples, DistanceId::D6));
    for (int q = 0; q < 200; ++q) {
        const FeatureVector query(testing::uniform_vector(rng, 4));
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < samples.size(); ++s)
            best = std::min(best, std::max(f.cost()[s], evaluate(DistanceId::D6, samples[s].features, query)));
        const auto p = classify(f, query);
        EXPECT_EQ(p.cost, best);
        EXPECT_EQ(p.label, f.root_label()[p.conqueror]);
    }
}

TEST(Forest, BatchIndependentOfThreads) {
    std::mt19937_64 rng(26);
    const auto samples = testing::random_samples(rng, 30, 3, 4);
    const auto f = train(TrainingGraph(samples, DistanceId::D17));
    std::vector<FeatureVector> queries;
    for (int q = 0; q < 100; ++q) queries.emplace_back(testing::uniform_vector(rng, 4));
    const auto one = classify_batch(f, queries, 1);
    EXPECT_EQ(classify_batch(f, queries, 4), one);
    EXPECT_EQ(classify_batch(f, queries, 0), one);
    for (std::size_t i = 0; i < queries.size(); ++i) EXPECT_EQ(one[i], classify(f, queries[i]));
}

TEST(Forest, ZeroTrainingErrorOnSeparatedClusters) {
    std::mt19937_64 rng(27);
    std::vector<Sample> samples;
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (std::size_t i = 0; i < 30; ++i) {
        const Label c = static_cast<Label>(i % 3);
        samples.push_back({FeatureVector{{1.0 + 5.0 * c + jitter(rng), 1.0 + 5.0 * c + jitter(rng)}}, c, i});
    }
    const auto f = train(TrainingGraph(samples, DistanceId::D3));
    for (const auto& s : samples) EXPECT_EQ(classify(f, s.features).label, s.label);
}

TEST(Forest, TrainingIsDeterministic) {
    std::mt19937_64 rng(28);
    const auto samples = testing::random_samples(rng, 20, 4, 3);
    EXPECT_EQ(train(TrainingGraph(samples, DistanceId::D38)), train(TrainingGraph(samples, DistanceId::D38)));
}

} // namespace
} // namespace opfdist
