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

#ifndef OPFDIST_EVALUATION_HPP
#define OPFDIST_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opfdist/dataio.hpp"
#include "opfdist/distances.hpp"

namespace opfdist {

/// SplitMix64 finaliser; the building block of every derived seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// Child seed for `stream` under `parent`. Used as
///   dataset seed = derive_seed(config seed, crc32(dataset name))
///   run seed     = derive_seed(dataset seed, run index)
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

/// One stratified 2-fold partition. fold_assignment[i] is 0 or 1 for sample i.
struct SplitPlan {
    std::uint64_t seed = 0;
    std::size_t run_index = 0;
    std::vector<std::uint8_t> fold_assignment;

    friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

/// `runs` stratified 2-fold plans. Per class, the shuffled members are split
/// in half; an odd member goes to whichever fold is currently smaller (fold 0
/// on ties). Throws TooFewSamplesPerClass or InvalidArgument (runs == 0).
std::vector<SplitPlan> make_splits(const Dataset& dataset, std::uint64_t seed, std::size_t runs);

/// Fraction of exact matches. Throws LengthMismatch or Empty.
double accuracy(std::span<const Label> predictions, std::span<const Label> truth);
/// Mean per-class recall over the classes present in `truth`.
double balanced_accuracy(std::span<const Label> predictions, std::span<const Label> truth);

enum class CellStatus : std::uint8_t { Pending, Ok, Failed };

struct Cell {
    CellStatus status = CellStatus::Pending;
    double accuracy = 0.0;
    std::string error;
    double train_seconds = 0.0;
    double test_seconds = 0.0;
};

/// Accuracy observations indexed by (dataset, classifier, run, fold). Fold f
/// means "trained on fold f, tested on the other one".
class BenchmarkMatrix {
public:
    static constexpr std::size_t kFolds = 2;

    BenchmarkMatrix() = default;
    BenchmarkMatrix(std::vector<std::string> datasets, std::vector<std::string> classifiers,
                    std::size_t runs);

    const std::vector<std::string>& datasets() const noexcept { return datasets_; }
    const std::vector<std::string>& classifiers() const noexcept { return classifiers_; }
    std::size_t runs() const noexcept { return runs_; }
    std::size_t cell_count() const noexcept { return datasets_.size() * classifiers_.size() * runs_ * kFolds; }

    Cell& at(std::size_t dataset, std::size_t classifier, std::size_t run, std::size_t fold);
    const Cell& at(std::size_t dataset, std::size_t classifier, std::size_t run, std::size_t fold) const;

    std::optional<std::size_t> dataset_index(const std::string& name) const;
    std::optional<std::size_t> classifier_index(const std::string& name) const;
    /// Appends a classifier column with all cells pending.
    std::size_t add_classifier(const std::string& name);

    /// First error of a (dataset, classifier) column that is not fully Ok, or
    /// nullopt when every cell holds an accuracy.
    std::optional<std::string> column_error(std::size_t dataset, std::size_t classifier) const;
    /// Per-run accuracy with folds averaged. Requires a complete column.
    std::vector<double> run_accuracies(std::size_t dataset, std::size_t classifier) const;

    std::size_t count(CellStatus status) const;

private:
    std::vector<std::string> datasets_;
    std::vector<std::string> classifiers_;
    std::size_t runs_ = 0;
    // cells_[dataset][classifier][run * kFolds + fold]
    std::vector<std::vector<std::vector<Cell>>> cells_;
};

struct CellKey {
    std::size_t dataset, classifier, run, fold;
};

struct BenchOptions {
    NormalizationMode normalization = NormalizationMode::None;
    /// Per-dataset override; empty means `normalization` everywhere.
    std::vector<NormalizationMode> dataset_normalization;
    EvalOptions eval{};
    /// 0 = hardware concurrency. Results do not depend on it.
    unsigned threads = 1;
    /// Returns an already known cell (resume); such cells are not recomputed.
    std::function<std::optional<Cell>(const CellKey&)> lookup;
    /// Invoked once per freshly computed cell, serialised under a mutex.
    std::function<void(const CellKey&, const Cell&)> on_cell;
};

/// Trains on one fold and tests on the other for every (dataset, distance,
/// run, fold). Cell failures are recorded, never thrown.
BenchmarkMatrix run_benchmark(std::span<const Dataset> datasets, std::span<const DistanceId> distances,
                              std::uint64_t seed, std::size_t runs, const BenchOptions& options = {});

struct SummaryEntry {
    bool ok = false;
    double mean = 0.0;
    /// Sample standard deviation (n - 1) over runs; 0 for a single run.
    double stddev = 0.0;
    std::string error;
};

struct Summary {
    std::vector<std::string> datasets;
    std::vector<std::string> classifiers;
    /// entries[dataset][classifier]
    std::vector<std::vector<SummaryEntry>> entries;
};

/// Mean and sample std of the fold-averaged run accuracies. Throws Empty.
Summary summarize(const BenchmarkMatrix& matrix);

/// Merges third-party accuracies (CSV header: dataset,classifier,run[,fold],
/// accuracy) as extra classifier columns. A row without a fold fills both.
void merge_external_baselines(BenchmarkMatrix& matrix, const std::filesystem::path& csv);

} // namespace opfdist

#endif
