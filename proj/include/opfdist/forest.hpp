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

#ifndef OPFDIST_FOREST_HPP
#define OPFDIST_FOREST_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "opfdist/distances.hpp"
#include "opfdist/feature_vector.hpp"

namespace opfdist {

/// Training set plus the arc-weighting measure. Arcs of the complete graph
/// are implicit: the weight of arc (s, t) is evaluate(distance, s, t).
class TrainingGraph {
public:
    /// Throws InvalidArgument for fewer than two samples, DimensionMismatch
    /// for mixed dimensions and SingleClass if only one label is present.
    TrainingGraph(std::vector<Sample> samples, DistanceId distance, EvalOptions options = {});

    std::span<const Sample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t dim() const noexcept { return samples_.front().features.dim(); }
    DistanceId distance() const noexcept { return distance_; }
    EvalOptions options() const noexcept { return options_; }

    double arc(std::size_t s, std::size_t t) const {
        return evaluate(distance_, samples_[s].features.values(), samples_[t].features.values(),
                        options_);
    }

private:
    std::vector<Sample> samples_;
    DistanceId distance_;
    EvalOptions options_;
};

/// Outcome of a classification: the minimum over training nodes s of
/// max(C(s), d(s, query)), the node achieving it, and that node's tree label.
struct Prediction {
    Label label = 0;
    double cost = 0.0;
    std::size_t conqueror = 0;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Immutable optimum-path forest. Node ids index samples().
class TrainedForest {
public:
    static constexpr std::size_t kNoPredecessor = static_cast<std::size_t>(-1);

    /// Assembles a forest from stored parts and validates its structural
    /// invariants (used by the archive loader). Throws InvalidArgument.
    static TrainedForest from_parts(std::vector<Sample> samples, DistanceId distance,
                                    EvalOptions options, std::vector<std::size_t> prototypes,
                                    std::vector<double> cost, std::vector<std::size_t> predecessor,
                                    std::vector<Label> root_label,
                                    std::vector<std::size_t> ordered_nodes);

    std::span<const Sample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t dim() const noexcept { return samples_.front().features.dim(); }
    DistanceId distance() const noexcept { return distance_; }
    EvalOptions options() const noexcept { return options_; }

    /// Sorted ascending.
    std::span<const std::size_t> prototypes() const noexcept { return prototypes_; }
    std::span<const double> cost() const noexcept { return cost_; }
    std::span<const std::size_t> predecessor() const noexcept { return predecessor_; }
    std::span<const Label> root_label() const noexcept { return root_label_; }
    /// Queue-removal order; costs are non-decreasing along it.
    std::span<const std::size_t> ordered_nodes() const noexcept { return ordered_; }

    bool is_prototype(std::size_t node) const noexcept { return predecessor_[node] == kNoPredecessor; }
    /// Follows predecessors up to the tree root.
    std::size_t root_of(std::size_t node) const noexcept;

    friend bool operator==(const TrainedForest&, const TrainedForest&) = default;

private:
    friend TrainedForest train(const TrainingGraph& graph);
    TrainedForest() = default;

    std::vector<Sample> samples_;
    DistanceId distance_ = DistanceId::D3;
    EvalOptions options_{};
    std::vector<std::size_t> prototypes_;
    std::vector<double> cost_;
    std::vector<std::size_t> predecessor_;
    std::vector<Label> root_label_;
    std::vector<std::size_t> ordered_;
};

/// Prototype estimation: Prim's minimum spanning tree over the complete graph
/// (start at node 0, lowest id wins ties, arc weight d(tree node, candidate)),
/// then every endpoint of an MST edge joining two labels. Sorted ascending.
std::vector<std::size_t> find_prototypes(const TrainingGraph& graph);

/// Conquering sweep from the prototype set under the f_max path cost.
/// Equal-cost queue entries leave lowest node id first.
TrainedForest train(const TrainingGraph& graph);

/// Scans ordered_nodes and stops at the first node whose training cost is not
/// below the best offer; the first strict minimum in scan order wins.
Prediction classify(const TrainedForest& forest, const FeatureVector& query);

/// Same tie-break as classify() but evaluates every training node.
Prediction classify_full_scan(const TrainedForest& forest, const FeatureVector& query);

/// Element-wise classify(). `threads` == 0 uses the hardware concurrency;
/// the result does not depend on it.
std::vector<Prediction> classify_batch(const TrainedForest& forest,
                                       std::span<const FeatureVector> queries,
                                       unsigned threads = 1);

} // namespace opfdist

#endif
