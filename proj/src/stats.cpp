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

#include "opfdist/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "opfdist/errors.hpp"

namespace opfdist {

namespace {

struct Ranking {
    std::vector<double> ranks;
    double tie_term = 0.0;  // sum over tie groups of t^3 - t
};

Ranking rank_with_ties(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    Ranking out{std::vector<double>(n), 0.0};
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start + 1;
        while (end < n && values[order[end]] - values[order[start]] <= kTieTolerance) ++end;
        // positions start..end-1 hold ranks start+1..end
        const double rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t i = start; i < end; ++i) out.ranks[order[i]] = rank;
        const double t = static_cast<double>(end - start);
        out.tie_term += t * t * t - t;
        start = end;
    }
    return out;
}

// alpha = 0.05, k = 2..60, from the studentised range distribution with
// infinite degrees of freedom, divided by sqrt(2).
constexpr std::array<double, 59> kQ05Dense = {
    1.959964, 2.343701, 2.569032, 2.727774, 2.849705, 2.948320, 3.030878, 3.101730, 3.163684,
    3.218654, 3.268004, 3.312739, 3.353618, 3.391230, 3.426041, 3.458425, 3.488685, 3.517073,
    3.543799, 3.569040, 3.592946, 3.615646, 3.637252, 3.657861, 3.677556, 3.696413, 3.714498,
    3.731869, 3.748578, 3.764672, 3.780193, 3.795179, 3.809664, 3.823680, 3.837254, 3.850413,
    3.863181, 3.875579, 3.887627, 3.899344, 3.910747, 3.921852, 3.932673, 3.943224, 3.953518,
    3.963566, 3.973379, 3.982969, 3.992343, 4.001512, 4.010485, 4.019268, 4.027869, 4.036297,
    4.044556, 4.052654, 4.060597, 4.068390, 4.076038,
};

struct SparseQ {
    std::size_t k;
    double q;
};

constexpr std::array<SparseQ, 5> kQ05Sparse = {{
    {60, 4.076038}, {70, 4.145576}, {80, 4.204953}, {90, 4.256692}, {100, 4.302488},
}};

} // namespace

std::vector<double> mid_ranks(std::span<const double> values) { return rank_with_ties(values).ranks; }

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha) {
    if (a.size() != b.size())
        fail(ErrorKind::LengthMismatch, "paired samples of length " + std::to_string(a.size()) + " and " +
                                            std::to_string(b.size()));
    if (a.size() < 5) fail(ErrorKind::TooFewPairs, "signed-rank test needs at least 5 pairs");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");

    std::vector<double> magnitude;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (std::fabs(d) <= kTieTolerance) continue;
        magnitude.push_back(std::fabs(d));
        positive.push_back(d > 0.0);
    }
    WilcoxonResult result;
    result.n_used = magnitude.size();
    if (magnitude.empty()) {
        result.all_zero = true;
        return result;
    }

    // Mid-ranks are multiples of 1/2, so doubled ranks are exact integers.
    const auto ranks = rank_with_ties(magnitude).ranks;
    std::vector<std::size_t> doubled(ranks.size());
    std::size_t total2 = 0, plus2 = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        doubled[i] = static_cast<std::size_t>(std::llround(2.0 * ranks[i]));
        total2 += doubled[i];
        if (positive[i]) plus2 += doubled[i];
    }
    const std::size_t low2 = std::min(plus2, total2 - plus2);
    result.statistic = static_cast<double>(low2) / 2.0;

    const std::size_t m = magnitude.size();
    if (m <= kWilcoxonExactLimit) {
        // counts[s]: number of sign patterns whose positive doubled-rank sum is s.
        std::vector<double> counts(total2 + 1, 0.0);
        counts[0] = 1.0;
        for (const auto r : doubled)
            for (std::size_t s = total2; s >= r; --s) {
                counts[s] += counts[s - r];
                if (s == r) break;
            }
        double tail = 0.0;
        for (std::size_t s = 0; s <= low2; ++s) tail += counts[s];
        result.p_value = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(m)));
        result.exact = true;
    } else {
        double variance = 0.0;
        for (const double r : ranks) variance += r * r;
        variance /= 4.0;
        const double mean = static_cast<double>(total2) / 4.0;
        const double deviation = std::max(0.0, std::fabs(static_cast<double>(plus2) / 2.0 - mean) - 0.5);
        const double z = deviation / std::sqrt(variance);
        result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
        result.exact = false;
    }
    result.reject = result.p_value < alpha;
    return result;
}

double nemenyi_q(std::size_t k, double alpha) {
    if (std::fabs(alpha - 0.05) > 1e-12)
        fail(ErrorKind::InvalidArgument, "Nemenyi critical values are tabulated for alpha = 0.05 only");
    if (k < 2 || k > kQ05Sparse.back().k)
        fail(ErrorKind::InvalidArgument, "Nemenyi critical values cover 2 <= k <= 100, got " + std::to_string(k));
    if (k - 2 < kQ05Dense.size()) return kQ05Dense[k - 2];
    for (std::size_t i = 1; i < kQ05Sparse.size(); ++i) {
        const auto& lo = kQ05Sparse[i - 1];
        const auto& hi = kQ05Sparse[i];
        if (k <= hi.k) {
            const double t = static_cast<double>(k - lo.k) / static_cast<double>(hi.k - lo.k);
            return lo.q + t * (hi.q - lo.q);
        }
    }
    return kQ05Sparse.back().q;
}

double nemenyi_critical_difference(std::size_t k, std::size_t n_blocks, double alpha) {
    if (n_blocks == 0) fail(ErrorKind::Empty, "critical difference needs at least one block");
    const double kd = static_cast<double>(k);
    return nemenyi_q(k, alpha) * std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n_blocks)));
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& blocks) {
    if (blocks.size() < 2) fail(ErrorKind::Empty, "Friedman test needs at least two blocks");
    const std::size_t k = blocks.front().size();
    if (k < 3) fail(ErrorKind::TooFewClassifiers, "Friedman test needs at least three classifiers");
    std::vector<double> rank_sums(k, 0.0);
    double tie_term = 0.0;
    for (const auto& block : blocks) {
        if (block.size() != k) fail(ErrorKind::InvalidArgument, "blocks have different widths");
        const auto ranking = rank_with_ties(block);
        for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranking.ranks[j];
        tie_term += ranking.tie_term;
    }
    const double n = static_cast<double>(blocks.size());
    const double kd = static_cast<double>(k);

    FriedmanResult out;
    out.n_blocks = blocks.size();
    double squares = 0.0;
    for (const double r : rank_sums) {
        squares += r * r;
        out.mean_ranks.push_back(r / n);
    }
    const double numerator = 12.0 / (n * kd * (kd + 1.0)) * squares - 3.0 * n * (kd + 1.0);
    const double correction = 1.0 - tie_term / (n * (kd * kd * kd - kd));
    out.statistic = correction > 1e-12 ? std::max(0.0, numerator / correction) : 0.0;
    out.p_value = boost::math::gamma_q((kd - 1.0) / 2.0, out.statistic / 2.0);
    return out;
}

StatReport friedman_nemenyi(const BenchmarkMatrix& matrix, double alpha,
                            const std::vector<std::string>& classifiers) {
    std::vector<std::size_t> columns;
    if (classifiers.empty()) {
        columns.resize(matrix.classifiers().size());
        std::iota(columns.begin(), columns.end(), 0);
    } else {
        for (const auto& name : classifiers) {
            const auto c = matrix.classifier_index(name);
            if (!c) fail(ErrorKind::InvalidArgument, "unknown classifier '" + name + "'");
            columns.push_back(*c);
        }
    }
    if (columns.size() < 3) fail(ErrorKind::TooFewClassifiers, "ranking needs at least three classifiers");
    if (matrix.datasets().empty() || matrix.runs() == 0) fail(ErrorKind::Empty, "benchmark matrix is empty");

    std::vector<std::vector<double>> per_column(columns.size());
    std::vector<std::vector<double>> blocks(matrix.datasets().size() * matrix.runs(),
                                            std::vector<double>(columns.size()));
    for (std::size_t d = 0; d < matrix.datasets().size(); ++d)
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const auto acc = matrix.run_accuracies(d, columns[j]);
            for (std::size_t r = 0; r < acc.size(); ++r) blocks[d * matrix.runs() + r][j] = acc[r];
        }

    StatReport report;
    report.alpha = alpha;
    for (const auto c : columns) report.classifiers.push_back(matrix.classifiers()[c]);
    report.friedman = friedman_test(blocks);
    report.critical_difference = nemenyi_critical_difference(columns.size(), blocks.size(), alpha);
    const auto& ranks = report.friedman.mean_ranks;
    report.significant.assign(columns.size(), std::vector<bool>(columns.size(), false));
    for (std::size_t i = 0; i < columns.size(); ++i)
        for (std::size_t j = 0; j < columns.size(); ++j)
            report.significant[i][j] = std::fabs(ranks[i] - ranks[j]) > report.critical_difference;
    return report;
}

std::vector<WilcoxonEntry> pairwise_wilcoxon(const BenchmarkMatrix& matrix, double alpha) {
    std::vector<WilcoxonEntry> out;
    const auto& names = matrix.classifiers();
    for (std::size_t d = 0; d < matrix.datasets().size(); ++d) {
        std::vector<std::optional<std::vector<double>>> acc(names.size());
        for (std::size_t c = 0; c < names.size(); ++c)
            if (!matrix.column_error(d, c)) acc[c] = matrix.run_accuracies(d, c);
        for (std::size_t i = 0; i < names.size(); ++i)
            for (std::size_t j = i + 1; j < names.size(); ++j) {
                WilcoxonEntry entry{matrix.datasets()[d], names[i], names[j], true, {}, {}};
                if (!acc[i] || !acc[j]) {
                    entry.applicable = false;
                    entry.note = "incomplete column";
                } else if (matrix.runs() < 5) {
                    entry.applicable = false;
                    entry.note = "fewer than 5 runs";
                } else {
                    entry.result = wilcoxon_signed_rank(*acc[i], *acc[j], alpha);
                }
                out.push_back(std::move(entry));
            }
    }
    return out;
}

StatReport analyse(const BenchmarkMatrix& matrix, double alpha) {
    std::vector<std::string> complete;
    for (std::size_t c = 0; c < matrix.classifiers().size(); ++c) {
        bool ok = true;
        for (std::size_t d = 0; d < matrix.datasets().size() && ok; ++d) ok = !matrix.column_error(d, c);
        if (ok) complete.push_back(matrix.classifiers()[c]);
    }
    StatReport report;
    if (complete.size() >= 3 && matrix.datasets().size() * matrix.runs() >= 2)
        report = friedman_nemenyi(matrix, alpha, complete);
    report.alpha = alpha;
    report.wilcoxon = pairwise_wilcoxon(matrix, alpha);
    return report;
}

} // namespace opfdist
