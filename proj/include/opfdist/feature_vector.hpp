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

#ifndef OPFDIST_FEATURE_VECTOR_HPP
#define OPFDIST_FEATURE_VECTOR_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace opfdist {

/// Dense, non-empty vector of finite reals. Construction rejects empty input
/// and NaN/infinite components with ErrorKind::InvalidArgument.
class FeatureVector {
public:
    FeatureVector() = delete;
    explicit FeatureVector(std::vector<double> values);
    FeatureVector(std::initializer_list<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::vector<double> values_;
};

using Label = std::uint32_t;

/// A labelled training or testing sample. `id` is the sample's index within
/// the dataset it was loaded from.
struct Sample {
    FeatureVector features;
    Label label = 0;
    std::size_t id = 0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

} // namespace opfdist

#endif
