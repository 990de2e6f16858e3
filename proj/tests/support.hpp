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

// Brute-force reference implementations shared by the unit tests and the
// acceptance binary. They deliberately avoid the library's algorithms.

#ifndef OPFDIST_TESTS_SUPPORT_HPP
#define OPFDIST_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "opfdist/distances.hpp"
#include "opfdist/feature_vector.hpp"
#include "opfdist/forest.hpp"

namespace opfdist::testing {

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t dim, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(dim);
    for (auto& x : v) x = u(rng);
    return v;
}

/// n samples in [0,1]^dim with labels drawn from `classes` labels; the first
/// `classes` samples cover every label so the set is never single-class.
inline std::vector<Sample> random_samples(std::mt19937_64& rng, std::size_t n, std::size_t classes,
                                          std::size_t dim) {
    std::uniform_int_distribution<std::size_t> pick(0, classes - 1);
    std::vector<Sample> out;
    for (std::size_t i = 0; i < n; ++i) {
        const Label label = static_cast<Label>(i < classes ? i : pick(rng));
        out.push_back({FeatureVector(uniform_vector(rng, dim)), label, i});
    }
    std::shuffle(out.begin(), out.end(), rng);
    for (std::size_t i = 0; i < n; ++i) out[i].id = i;
    return out;
}

/// Minimax path costs from the prototype set, by Floyd-Warshall on the
/// directed arc weights d(s, t). Paths start with handicap 0 at a prototype.
inline std::vector<double> bottleneck_costs(const std::vector<Sample>& samples, DistanceId id,
                                            const std::vector<std::size_t>& prototypes, EvalOptions opts = {}) {
    const std::size_t n = samples.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> mm(n, std::vector<double>(n, inf));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
            if (s != t) mm[s][t] = evaluate(id, samples[s].features, samples[t].features, opts);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mm[i][j] = std::min(mm[i][j], std::max(mm[i][k], mm[k][j]));
    std::vector<double> cost(n, inf);
    for (const auto p : prototypes) cost[p] = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (cost[t] == 0.0) continue;
        for (const auto p : prototypes) cost[t] = std::min(cost[t], std::max(0.0, mm[p][t]));
    }
    return cost;
}

/// Prototypes from Kruskal's MST. Only meaningful for symmetric measures with
/// pairwise distinct weights, where the MST is unique.
inline std::vector<std::size_t> kruskal_prototypes(const std::vector<Sample>& samples, DistanceId id) {
    const std::size_t n = samples.size();
    struct Edge {
        double w;
        std::size_t a, b;
    };
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            edges.push_back({evaluate(id, samples[a].features, samples[b].features), a, b});
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) { return l.w < r.w; });
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::set<std::size_t> protos;
    for (const auto& e : edges) {
        const auto ra = find(e.a), rb = find(e.b);
        if (ra == rb) continue;
        parent[ra] = rb;
        if (samples[e.a].label != samples[e.b].label) {
            protos.insert(e.a);
            protos.insert(e.b);
        }
    }
    return {protos.begin(), protos.end()};
}

/// Two-sided signed-rank p-value by enumerating all 2^m sign patterns of the
/// non-zero differences: the share of patterns whose min(W+, W-) is at most
/// the observed one.
inline double enumerated_wilcoxon_p(const std::vector<double>& diffs, double zero_tol = 1e-12) {
    std::vector<double> mags;
    std::vector<bool> pos;
    for (const double d : diffs)
        if (std::fabs(d) > zero_tol) {
            mags.push_back(std::fabs(d));
            pos.push_back(d > 0);
        }
    const std::size_t m = mags.size();
    if (m == 0) return 1.0;
    // Mid-ranks by counting, O(m^2).
    std::vector<double> rank(m);
    for (std::size_t i = 0; i < m; ++i) {
        double below = 0, equal = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (std::fabs(mags[j] - mags[i]) <= zero_tol)
                ++equal;
            else if (mags[j] < mags[i])
                ++below;
        }
        rank[i] = below + (equal + 1.0) / 2.0;
    }
    const double total = static_cast<double>(m) * (m + 1) / 2.0;
    double w_plus = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (pos[i]) w_plus += rank[i];
    const double observed = std::min(w_plus, total - w_plus);
    std::uint64_t extreme = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1U) w += rank[i];
        if (std::min(w, total - w) <= observed + 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(m));
}

} // namespace opfdist::testing

#endif
