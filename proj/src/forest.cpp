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

#include "opfdist/forest.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <thread>

#include "opfdist/errors.hpp"

namespace opfdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = TrainedForest::kNoPredecessor;

} // namespace

TrainingGraph::TrainingGraph(std::vector<Sample> samples, DistanceId distance, EvalOptions options)
    : samples_(std::move(samples)), distance_(distance), options_(options) {
    if (samples_.size() < 2)
        fail(ErrorKind::InvalidArgument, "training graph needs at least two samples");
    const std::size_t dim = samples_.front().features.dim();
    bool two_labels = false;
    for (const auto& s : samples_) {
        if (s.features.dim() != dim)
            fail(ErrorKind::DimensionMismatch, "sample " + std::to_string(s.id) + " has dimension " +
                                                   std::to_string(s.features.dim()) + ", expected " +
                                                   std::to_string(dim));
        two_labels = two_labels || s.label != samples_.front().label;
    }
    if (!two_labels) fail(ErrorKind::SingleClass, "all training samples share one label");
}

std::vector<std::size_t> find_prototypes(const TrainingGraph& graph) {
    const std::size_t n = graph.size();
    const auto samples = graph.samples();
    std::vector<double> key(n, kInf);
    std::vector<std::size_t> parent(n, kNone);
    std::vector<char> in_tree(n, 0);
    std::vector<char> prototype(n, 0);

    std::size_t current = 0;
    for (std::size_t added = 0; added < n; ++added) {
        in_tree[current] = 1;
        const std::size_t p = parent[current];
        if (p != kNone && samples[p].label != samples[current].label) {
            prototype[p] = 1;
            prototype[current] = 1;
        }
        std::size_t next = kNone;
        for (std::size_t w = 0; w < n; ++w) {
            if (in_tree[w]) continue;
            const double d = graph.arc(current, w);
            if (d < key[w] || (d == key[w] && current < parent[w])) {
                key[w] = d;
                parent[w] = current;
            }
            if (next == kNone || key[w] < key[next]) next = w;
        }
        current = next;
    }

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (prototype[i]) out.push_back(i);
    return out;
}

TrainedForest train(const TrainingGraph& graph) {
    const std::size_t n = graph.size();
    const auto samples = graph.samples();

    TrainedForest f;
    f.samples_.assign(samples.begin(), samples.end());
    f.distance_ = graph.distance();
    f.options_ = graph.options();
    f.prototypes_ = find_prototypes(graph);
    f.cost_.assign(n, kInf);
    f.predecessor_.assign(n, kNone);
    f.root_label_.resize(n);
    f.ordered_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) f.root_label_[i] = samples[i].label;

    std::vector<char> queued(n, 0);
    for (const auto p : f.prototypes_) {
        f.cost_[p] = 0.0;
        queued[p] = 1;
    }

    auto& cost = f.cost_;
    for (;;) {
        std::size_t s = kNone;
        for (std::size_t i = 0; i < n; ++i)
            if (queued[i] && (s == kNone || cost[i] < cost[s])) s = i;
        if (s == kNone) break;
        queued[s] = 0;
        f.ordered_.push_back(s);

        for (std::size_t t = 0; t < n; ++t) {
            if (t == s || !(cost[t] > cost[s])) continue;
            const double c = std::max(cost[s], graph.arc(s, t));
            if (c < cost[t]) {
                cost[t] = c;
                f.predecessor_[t] = s;
                f.root_label_[t] = f.root_label_[s];
                queued[t] = 1;
            }
        }
    }
    return f;
}

std::size_t TrainedForest::root_of(std::size_t node) const noexcept {
    for (std::size_t steps = 0; steps <= size() && predecessor_[node] != kNone; ++steps)
        node = predecessor_[node];
    return node;
}

TrainedForest TrainedForest::from_parts(std::vector<Sample> samples, DistanceId distance,
                                        EvalOptions options, std::vector<std::size_t> prototypes,
                                        std::vector<double> cost,
                                        std::vector<std::size_t> predecessor,
                                        std::vector<Label> root_label,
                                        std::vector<std::size_t> ordered_nodes) {
    const std::size_t n = samples.size();
    const auto bad = [](const std::string& what) { fail(ErrorKind::InvalidArgument, what); };
    if (n < 2) bad("forest needs at least two samples");
    if (cost.size() != n || predecessor.size() != n || root_label.size() != n ||
        ordered_nodes.size() != n)
        bad("per-node arrays disagree with the sample count");
    for (const auto& s : samples)
        if (s.features.dim() != samples.front().features.dim()) bad("mixed sample dimensions");

    std::vector<char> seen(n, 0);
    for (const auto node : ordered_nodes) {
        if (node >= n || seen[node]) bad("ordered nodes are not a permutation");
        seen[node] = 1;
    }
    for (std::size_t i = 1; i < n; ++i)
        if (cost[ordered_nodes[i]] < cost[ordered_nodes[i - 1]]) bad("ordered nodes decrease in cost");

    if (prototypes.empty() || !std::is_sorted(prototypes.begin(), prototypes.end()))
        bad("prototype list must be non-empty and sorted");
    std::vector<char> is_proto(n, 0);
    for (const auto p : prototypes) {
        if (p >= n || is_proto[p]) bad("invalid prototype id");
        is_proto[p] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (is_proto[i] != (predecessor[i] == kNone)) bad("prototype/predecessor disagreement");
        if (is_proto[i] && cost[i] != 0.0) bad("prototype with non-zero cost");
        if (!is_proto[i] && (predecessor[i] >= n || predecessor[i] == i)) bad("invalid predecessor");
    }

    TrainedForest f;
    f.samples_ = std::move(samples);
    f.distance_ = distance;
    f.options_ = options;
    f.prototypes_ = std::move(prototypes);
    f.cost_ = std::move(cost);
    f.predecessor_ = std::move(predecessor);
    f.root_label_ = std::move(root_label);
    f.ordered_ = std::move(ordered_nodes);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = f.root_of(i);
        if (!is_proto[root]) bad("predecessor chain does not reach a prototype");
        if (f.root_label_[i] != f.root_label_[root]) bad("root label disagrees with tree root");
    }
    return f;
}

namespace {

void check_query(const TrainedForest& forest, const FeatureVector& query) {
    if (query.dim() != forest.dim())
        fail(ErrorKind::DimensionMismatch, "query has dimension " + std::to_string(query.dim()) +
                                               ", forest expects " + std::to_string(forest.dim()));
}

Prediction scan(const TrainedForest& forest, const FeatureVector& query, bool early_exit) {
    check_query(forest, query);
    const auto cost = forest.cost();
    const auto samples = forest.samples();
    double best = kInf;
    std::size_t winner = forest.ordered_nodes().front();
    for (const auto s : forest.ordered_nodes()) {
        if (early_exit && cost[s] >= best) break;
        const double c = std::max(cost[s], evaluate(forest.distance(), samples[s].features.values(),
                                                    query.values(), forest.options()));
        if (c < best) {
            best = c;
            winner = s;
        }
    }
    return Prediction{forest.root_label()[winner], best, winner};
}

} // namespace

Prediction classify(const TrainedForest& forest, const FeatureVector& query) {
    return scan(forest, query, true);
}

Prediction classify_full_scan(const TrainedForest& forest, const FeatureVector& query) {
    return scan(forest, query, false);
}

std::vector<Prediction> classify_batch(const TrainedForest& forest,
                                       std::span<const FeatureVector> queries, unsigned threads) {
    for (const auto& q : queries) check_query(forest, q);
    std::vector<Prediction> out(queries.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, queries.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < queries.size(); ++i) out[i] = classify(forest, queries[i]);
        return out;
    }
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < queries.size(); i += threads)
                    out[i] = classify(forest, queries[i]);
            });
        }
    }
    return out;
}

} // namespace opfdist
