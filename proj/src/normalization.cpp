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

#include <algorithm>
#include <string>

#include "opfdist/dataio.hpp"
#include "opfdist/errors.hpp"

namespace opfdist {

std::string_view to_string(NormalizationMode mode) noexcept {
    return mode == NormalizationMode::MinMax01 ? "min_max_01" : "none";
}

NormalizationMode parse_normalization_mode(std::string_view text) {
    if (text == "none") return NormalizationMode::None;
    if (text == "min_max_01" || text == "minmax") return NormalizationMode::MinMax01;
    fail(ErrorKind::InvalidArgument, "unknown normalization mode '" + std::string(text) + "'");
}

NormalizationSpec fit_normalization(std::span<const Sample> train, NormalizationMode mode) {
    if (train.empty()) fail(ErrorKind::Empty, "cannot fit normalization on an empty training set");
    NormalizationSpec spec{mode, {}, {}};
    if (mode == NormalizationMode::None) return spec;
    const auto first = train.front().features.values();
    spec.min.assign(first.begin(), first.end());
    spec.max.assign(first.begin(), first.end());
    for (const auto& s : train) {
        const auto v = s.features.values();
        if (v.size() != spec.min.size())
            fail(ErrorKind::DimensionMismatch, "training samples have mixed dimensions");
        for (std::size_t f = 0; f < v.size(); ++f) {
            spec.min[f] = std::min(spec.min[f], v[f]);
            spec.max[f] = std::max(spec.max[f], v[f]);
        }
    }
    return spec;
}

FeatureVector apply_normalization(const NormalizationSpec& spec, const FeatureVector& v) {
    if (spec.mode == NormalizationMode::None) return v;
    if (v.dim() != spec.min.size())
        fail(ErrorKind::DimensionMismatch, "vector has dimension " + std::to_string(v.dim()) +
                                               ", normalization expects " + std::to_string(spec.min.size()));
    std::vector<double> out(v.dim());
    for (std::size_t f = 0; f < v.dim(); ++f) {
        const double range = spec.max[f] - spec.min[f];
        out[f] = range > 0.0 ? std::clamp((v[f] - spec.min[f]) / range, 0.0, 1.0) : 0.0;
    }
    return FeatureVector(std::move(out));
}

std::vector<Sample> apply_normalization(const NormalizationSpec& spec, std::span<const Sample> samples) {
    std::vector<Sample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back({apply_normalization(spec, s.features), s.label, s.id});
    return out;
}

} // namespace opfdist
