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

#ifndef OPFDIST_STATS_HPP
#define OPFDIST_STATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "opfdist/evaluation.hpp"

namespace opfdist {

/// Values closer than this are treated as tied (ranks) or as zero
/// (Wilcoxon differences). Accuracies are ratios of small integers, so
/// mathematically equal values can differ in the last bits.
inline constexpr double kTieTolerance = 1e-12;

/// Mid-ranks (1-based) of `values` in ascending order.
std::vector<double> mid_ranks(std::span<const double> values);

struct WilcoxonResult {
    /// min(W+, W-) over the non-zero differences.
    double statistic = 0.0;
    double p_value = 1.0;
    bool reject = false;
    /// Pairs left after dropping zero differences.
    std::size_t n_used = 0;
    bool exact = true;
    bool all_zero = false;
};

/// Largest non-zero pair count that uses the exact null distribution.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// Two-sided signed-rank test. Zero differences are dropped and tied
/// magnitudes get mid-ranks. Up to kWilcoxonExactLimit pairs the p-value comes
/// from the exact (tie-aware) permutation distribution, above it from the
/// normal approximation with tie and continuity corrections. All-zero
/// differences give p = 1 with all_zero set.
/// Throws LengthMismatch, TooFewPairs (n < 5) or InvalidArgument (alpha).
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha);

/// Nemenyi critical value q_alpha(k) (studentised range at infinite degrees
/// of freedom divided by sqrt(2)). Tabulated for alpha = 0.05 and
/// 2 <= k <= 100; gaps in the table are linearly interpolated.
double nemenyi_q(std::size_t k, double alpha = 0.05);

/// CD = q_alpha(k) * sqrt(k (k + 1) / (6 N)).
double nemenyi_critical_difference(std::size_t k, std::size_t n_blocks, double alpha = 0.05);

struct FriedmanResult {
    double statistic = 0.0;
    double p_value = 1.0;
    /// Rank k is the best (highest accuracy), rank 1 the worst.
    std::vector<double> mean_ranks;
    std::size_t n_blocks = 0;
};

/// `blocks[b][j]` is classifier j's score in block b. Higher is better.
FriedmanResult friedman_test(const std::vector<std::vector<double>>& blocks);

struct WilcoxonEntry {
    std::string dataset;
    std::string classifier_a;
    std::string classifier_b;
    bool applicable = true;
    std::string note;
    WilcoxonResult result;
};

struct StatReport {
    double alpha = 0.05;
    std::vector<std::string> classifiers;  // ranked classifiers, matrix order
    std::vector<WilcoxonEntry> wilcoxon;
    FriedmanResult friedman;
    double critical_difference = 0.0;
    /// significant[i][j]: |mean_rank_i - mean_rank_j| > CD.
    std::vector<std::vector<bool>> significant;
};

/// Friedman over (dataset, run) blocks with folds averaged, followed by the
/// Nemenyi critical difference. `classifiers` selects matrix columns by name
/// (empty = all). Throws TooFewClassifiers, MissingCells or Empty.
StatReport friedman_nemenyi(const BenchmarkMatrix& matrix, double alpha,
                            const std::vector<std::string>& classifiers = {});

/// Pairwise Wilcoxon per dataset over fold-averaged run accuracies. Pairs
/// that cannot be tested (failed column, too few runs) are kept with
/// applicable = false and a note.
std::vector<WilcoxonEntry> pairwise_wilcoxon(const BenchmarkMatrix& matrix, double alpha);

/// Wilcoxon entries plus Friedman/Nemenyi over every complete classifier.
/// Friedman is skipped (k = 0 in the result) when fewer than three complete
/// classifiers exist.
StatReport analyse(const BenchmarkMatrix& matrix, double alpha);

} // namespace opfdist

#endif
