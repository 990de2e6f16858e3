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

#include "opfdist/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "opfdist/errors.hpp"
#include "opfdist/forest.hpp"

namespace opfdist {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(stream ^ 0xD1B54A32D192ED03ULL));
}

namespace {

// Unbiased draw from [0, bound). std::uniform_int_distribution is
// implementation-defined, which would make splits differ between standard
// libraries; mt19937_64 output itself is fully specified.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[bounded(rng, i)]);
}

} // namespace

std::vector<SplitPlan> make_splits(const Dataset& dataset, std::uint64_t seed, std::size_t runs) {
    if (runs == 0) fail(ErrorKind::InvalidArgument, "runs must be at least 1");
    std::vector<std::vector<std::size_t>> members(dataset.n_classes);
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) members.at(dataset.samples[i].label).push_back(i);
    for (std::size_t c = 0; c < members.size(); ++c)
        if (members[c].size() < 2)
            fail(ErrorKind::TooFewSamplesPerClass,
                 "dataset '" + dataset.name + "' class " +
                     (dataset.class_names.empty() ? std::to_string(c) : "'" + dataset.class_names[c] + "'") +
                     " has " + std::to_string(members[c].size()) + " sample(s); 2-fold splitting needs 2");

    std::vector<SplitPlan> plans;
    plans.reserve(runs);
    for (std::size_t r = 0; r < runs; ++r) {
        SplitPlan plan{derive_seed(seed, r), r, std::vector<std::uint8_t>(dataset.samples.size(), 0)};
        std::mt19937_64 rng(plan.seed);
        std::size_t fold_size[2] = {0, 0};
        for (auto indices : members) {
            shuffle(indices, rng);
            std::size_t first = indices.size() / 2;
            if (indices.size() % 2 == 1 && fold_size[0] <= fold_size[1]) ++first;
            for (std::size_t i = 0; i < indices.size(); ++i)
                plan.fold_assignment[indices[i]] = i < first ? 0 : 1;
            fold_size[0] += first;
            fold_size[1] += indices.size() - first;
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

double accuracy(std::span<const Label> predictions, std::span<const Label> truth) {
    if (predictions.size() != truth.size())
        fail(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                            std::to_string(truth.size()) + " labels");
    if (truth.empty()) fail(ErrorKind::Empty, "accuracy of an empty prediction set");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double balanced_accuracy(std::span<const Label> predictions, std::span<const Label> truth) {
    if (predictions.size() != truth.size())
        fail(ErrorKind::LengthMismatch, "prediction and label counts differ");
    if (truth.empty()) fail(ErrorKind::Empty, "balanced accuracy of an empty prediction set");
    const Label classes = *std::max_element(truth.begin(), truth.end()) + 1;
    std::vector<std::size_t> hits(classes, 0), totals(classes, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++totals[truth[i]];
        if (predictions[i] == truth[i]) ++hits[truth[i]];
    }
    double sum = 0.0;
    std::size_t present = 0;
    for (Label c = 0; c < classes; ++c) {
        if (totals[c] == 0) continue;
        sum += static_cast<double>(hits[c]) / static_cast<double>(totals[c]);
        ++present;
    }
    return sum / static_cast<double>(present);
}

BenchmarkMatrix::BenchmarkMatrix(std::vector<std::string> datasets, std::vector<std::string> classifiers,
                                 std::size_t runs)
    : datasets_(std::move(datasets)), classifiers_(std::move(classifiers)), runs_(runs) {
    cells_.assign(datasets_.size(),
                  std::vector<std::vector<Cell>>(classifiers_.size(), std::vector<Cell>(runs_ * kFolds)));
}

Cell& BenchmarkMatrix::at(std::size_t d, std::size_t c, std::size_t r, std::size_t f) {
    return cells_.at(d).at(c).at(r * kFolds + f);
}

const Cell& BenchmarkMatrix::at(std::size_t d, std::size_t c, std::size_t r, std::size_t f) const {
    return cells_.at(d).at(c).at(r * kFolds + f);
}

std::optional<std::size_t> BenchmarkMatrix::dataset_index(const std::string& name) const {
    const auto it = std::find(datasets_.begin(), datasets_.end(), name);
    if (it == datasets_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - datasets_.begin());
}

std::optional<std::size_t> BenchmarkMatrix::classifier_index(const std::string& name) const {
    const auto it = std::find(classifiers_.begin(), classifiers_.end(), name);
    if (it == classifiers_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - classifiers_.begin());
}

std::size_t BenchmarkMatrix::add_classifier(const std::string& name) {
    if (classifier_index(name)) fail(ErrorKind::InvalidArgument, "duplicate classifier '" + name + "'");
    classifiers_.push_back(name);
    for (auto& per_dataset : cells_) per_dataset.emplace_back(runs_ * kFolds);
    return classifiers_.size() - 1;
}

std::optional<std::string> BenchmarkMatrix::column_error(std::size_t d, std::size_t c) const {
    for (const auto& cell : cells_.at(d).at(c)) {
        if (cell.status == CellStatus::Failed) return cell.error;
        if (cell.status == CellStatus::Pending) return std::string("missing cell");
    }
    return std::nullopt;
}

std::vector<double> BenchmarkMatrix::run_accuracies(std::size_t d, std::size_t c) const {
    if (auto error = column_error(d, c))
        fail(ErrorKind::MissingCells, "column " + datasets_.at(d) + "/" + classifiers_.at(c) + ": " + *error);
    std::vector<double> out(runs_);
    for (std::size_t r = 0; r < runs_; ++r) out[r] = (at(d, c, r, 0).accuracy + at(d, c, r, 1).accuracy) / 2.0;
    return out;
}

std::size_t BenchmarkMatrix::count(CellStatus status) const {
    std::size_t n = 0;
    for (const auto& per_dataset : cells_)
        for (const auto& column : per_dataset)
            for (const auto& cell : column) n += cell.status == status ? 1 : 0;
    return n;
}

namespace {

struct FoldData {
    std::vector<Sample> train;
    std::vector<FeatureVector> test;
    std::vector<Label> truth;
};

FoldData prepare_fold(const Dataset& dataset, const SplitPlan& plan, std::size_t fold, NormalizationMode mode) {
    std::vector<Sample> train;
    std::vector<const Sample*> test;
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        if (plan.fold_assignment[i] == fold)
            train.push_back(dataset.samples[i]);
        else
            test.push_back(&dataset.samples[i]);
    }
    const auto spec = fit_normalization(train, mode);
    FoldData data;
    data.train = apply_normalization(spec, train);
    for (const auto* s : test) {
        data.test.push_back(apply_normalization(spec, s->features));
        data.truth.push_back(s->label);
    }
    return data;
}

Cell evaluate_cell(const FoldData& data, DistanceId distance, EvalOptions eval) {
    using Clock = std::chrono::steady_clock;
    Cell cell;
    try {
        const auto t0 = Clock::now();
        const auto forest = train(TrainingGraph(data.train, distance, eval));
        const auto t1 = Clock::now();
        std::vector<Label> predicted;
        predicted.reserve(data.test.size());
        for (const auto& q : data.test) predicted.push_back(classify(forest, q).label);
        const auto t2 = Clock::now();
        cell.accuracy = accuracy(predicted, data.truth);
        cell.train_seconds = std::chrono::duration<double>(t1 - t0).count();
        cell.test_seconds = std::chrono::duration<double>(t2 - t1).count();
        cell.status = CellStatus::Ok;
    } catch (const std::exception& e) {
        cell.status = CellStatus::Failed;
        cell.error = e.what();
    }
    return cell;
}

} // namespace

BenchmarkMatrix run_benchmark(std::span<const Dataset> datasets, std::span<const DistanceId> distances,
                              std::uint64_t seed, std::size_t runs, const BenchOptions& options) {
    if (runs == 0) fail(ErrorKind::InvalidArgument, "runs must be at least 1");
    std::vector<std::string> dataset_names, classifier_names;
    for (const auto& d : datasets) dataset_names.push_back(d.name);
    for (const auto id : distances) classifier_names.emplace_back(info(id).code);
    BenchmarkMatrix matrix(dataset_names, classifier_names, runs);

    // A dataset that cannot be split fails all of its cells.
    std::vector<std::vector<SplitPlan>> plans(datasets.size());
    std::vector<std::string> split_errors(datasets.size());
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        try {
            plans[d] = make_splits(datasets[d], derive_seed(seed, crc32(datasets[d].name)), runs);
        } catch (const Error& e) {
            split_errors[d] = e.what();
        }
    }

    struct Group {
        std::size_t dataset, run, fold;
    };
    std::vector<Group> groups;
    for (std::size_t d = 0; d < datasets.size(); ++d)
        for (std::size_t r = 0; r < runs; ++r)
            for (std::size_t f = 0; f < BenchmarkMatrix::kFolds; ++f) groups.push_back({d, r, f});

    std::mutex report_mutex;
    const auto record = [&](const CellKey& key, const Cell& cell, bool fresh) {
        matrix.at(key.dataset, key.classifier, key.run, key.fold) = cell;
        if (fresh && options.on_cell) {
            std::lock_guard lock(report_mutex);
            options.on_cell(key, cell);
        }
    };

    const auto run_group = [&](const Group& g) {
        std::vector<std::size_t> todo;
        for (std::size_t c = 0; c < distances.size(); ++c) {
            const CellKey key{g.dataset, c, g.run, g.fold};
            if (options.lookup) {
                if (auto known = options.lookup(key)) {
                    record(key, *known, false);
                    continue;
                }
            }
            todo.push_back(c);
        }
        if (todo.empty()) return;
        if (!split_errors[g.dataset].empty()) {
            Cell failed{CellStatus::Failed, 0.0, split_errors[g.dataset], 0.0, 0.0};
            for (const auto c : todo) record({g.dataset, c, g.run, g.fold}, failed, true);
            return;
        }
        const NormalizationMode mode = options.dataset_normalization.empty()
            ? options.normalization
            : options.dataset_normalization.at(g.dataset);
        FoldData data;
        try {
            data = prepare_fold(datasets[g.dataset], plans[g.dataset][g.run], g.fold, mode);
        } catch (const std::exception& e) {
            Cell failed{CellStatus::Failed, 0.0, e.what(), 0.0, 0.0};
            for (const auto c : todo) record({g.dataset, c, g.run, g.fold}, failed, true);
            return;
        }
        for (const auto c : todo)
            record({g.dataset, c, g.run, g.fold}, evaluate_cell(data, distances[c], options.eval), true);
    };

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(groups.size(), 1)));
    if (threads <= 1) {
        for (const auto& g : groups) run_group(g);
        return matrix;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < groups.size(); i = next++) run_group(groups[i]);
            });
    }
    return matrix;
}

Summary summarize(const BenchmarkMatrix& matrix) {
    if (matrix.cell_count() == 0) fail(ErrorKind::Empty, "benchmark matrix has no cells");
    Summary summary{matrix.datasets(), matrix.classifiers(), {}};
    summary.entries.resize(matrix.datasets().size());
    for (std::size_t d = 0; d < matrix.datasets().size(); ++d) {
        for (std::size_t c = 0; c < matrix.classifiers().size(); ++c) {
            SummaryEntry entry;
            if (auto error = matrix.column_error(d, c)) {
                entry.error = *error;
            } else {
                const auto acc = matrix.run_accuracies(d, c);
                const double n = static_cast<double>(acc.size());
                entry.ok = true;
                entry.mean = std::accumulate(acc.begin(), acc.end(), 0.0) / n;
                if (acc.size() > 1) {
                    double ss = 0.0;
                    for (const double a : acc) ss += (a - entry.mean) * (a - entry.mean);
                    entry.stddev = std::sqrt(ss / (n - 1.0));
                }
            }
            summary.entries[d].push_back(std::move(entry));
        }
    }
    return summary;
}

namespace {

std::size_t parse_index(const std::string& text, std::size_t line, const char* what) {
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
        fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad " + what + " '" + text + "'");
    return value;
}

} // namespace

void merge_external_baselines(BenchmarkMatrix& matrix, const std::filesystem::path& csv) {
    const auto records = parse_csv_text(read_text_file(csv));
    if (records.empty()) fail(ErrorKind::EmptyFile, csv.string() + " has no header");
    const auto& header = records.front().fields;
    const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_dataset = column("dataset"), c_classifier = column("classifier"), c_run = column("run"),
               c_fold = column("fold"), c_accuracy = column("accuracy");
    if (!c_dataset || !c_classifier || !c_run || !c_accuracy)
        fail(ErrorKind::ParseError, csv.string() + ": header must contain dataset,classifier,run,accuracy");

    // Columns already produced by the benchmark must not be overwritten.
    const std::size_t own_columns = matrix.classifiers().size();
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.fields.size() != header.size())
            fail(ErrorKind::RaggedRows, csv.string() + ": line " + std::to_string(rec.line));
        const auto d = matrix.dataset_index(rec.fields[*c_dataset]);
        if (!d) continue;  // baseline for a dataset that is not part of this study
        const auto& name = rec.fields[*c_classifier];
        auto c = matrix.classifier_index(name);
        if (c && *c < own_columns)
            fail(ErrorKind::InvalidArgument, "external classifier '" + name + "' clashes with a benchmark column");
        if (!c) c = matrix.add_classifier(name);
        const std::size_t run = parse_index(rec.fields[*c_run], rec.line, "run");
        if (run >= matrix.runs())
            fail(ErrorKind::ParseError, "line " + std::to_string(rec.line) + ": run " + std::to_string(run) +
                                            " outside 0.." + std::to_string(matrix.runs() - 1));
        const auto& acc_text = rec.fields[*c_accuracy];
        double acc = 0.0;
        const auto [end, ec] = std::from_chars(acc_text.data(), acc_text.data() + acc_text.size(), acc);
        if (acc_text.empty() || ec != std::errc{} || end != acc_text.data() + acc_text.size() || !(acc >= 0.0 && acc <= 1.0))
            fail(ErrorKind::ParseError, "line " + std::to_string(rec.line) + ": accuracy '" + acc_text +
                                            "' is not in [0, 1]");
        const Cell cell{CellStatus::Ok, acc, {}, 0.0, 0.0};
        if (c_fold && !rec.fields[*c_fold].empty()) {
            const std::size_t fold = parse_index(rec.fields[*c_fold], rec.line, "fold");
            if (fold >= BenchmarkMatrix::kFolds)
                fail(ErrorKind::ParseError, "line " + std::to_string(rec.line) + ": fold must be 0 or 1");
            matrix.at(*d, *c, run, fold) = cell;
        } else {
            for (std::size_t f = 0; f < BenchmarkMatrix::kFolds; ++f) matrix.at(*d, *c, run, f) = cell;
        }
    }
}

} // namespace opfdist
