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

#ifndef OPFDIST_DISTANCES_HPP
#define OPFDIST_DISTANCES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opfdist/feature_vector.hpp"

namespace opfdist {

/// The 47 measures, numbered as in the catalogue (D1 Chebyshev ... D47
/// chi-square statistic). The numeric value is the catalogue number.
enum class DistanceId : std::uint8_t {
    D1 = 1, D2, D3, D4, D5, D6, D7, D8, D9, D10,
    D11, D12, D13, D14, D15, D16, D17, D18, D19, D20,
    D21, D22, D23, D24, D25, D26, D27, D28, D29, D30,
    D31, D32, D33, D34, D35, D36, D37, D38, D39, D40,
    D41, D42, D43, D44, D45, D46, D47,
};

inline constexpr std::size_t kDistanceCount = 47;

enum class Taxonomy {
    Lp,
    L1,
    InnerProduct,
    SquaredChord,
    SquaredL2,
    ShannonEntropy,
    Vicissitude,
    Other,
};

std::string_view to_string(Taxonomy taxonomy) noexcept;

struct DistanceInfo {
    DistanceId id;
    std::string_view code;   // "D1" .. "D47"
    std::string_view name;
    Taxonomy taxonomy;
    /// Square roots of individual components (or of their products) appear in
    /// the formula; negative inputs are only meaningful in permissive mode.
    bool requires_nonnegative_input;
    /// d(x, x) == 0 holds analytically for the formula as printed.
    bool satisfies_identity;
    /// d(x, y) == d(y, x) holds bit-for-bit.
    bool symmetric;
};

/// All 47 entries in catalogue order.
std::span<const DistanceInfo> registry() noexcept;
const DistanceInfo& info(DistanceId id) noexcept;

/// Parses "D7" / "d7" / "7". Returns nullopt for anything outside D1..D47.
std::optional<DistanceId> parse_distance_code(std::string_view text);
/// Expands "all" or a comma-separated list of codes; throws InvalidArgument.
std::vector<DistanceId> parse_distance_list(std::string_view text);

struct EvalOptions {
    /// Reject negative components for measures that take square roots of
    /// inputs (ErrorKind::DomainViolation) instead of clamping them to 0.
    bool strict = false;

    friend bool operator==(const EvalOptions&, const EvalOptions&) = default;
};

/// Substitute for a vanishing denominator (or a vanishing log argument).
inline constexpr double kDegenerateEpsilon = 1e-10;

/// Evaluates measure `id` on two equally sized vectors. Always returns a
/// finite value: a 0/0 term contributes 0, any other zero denominator is
/// replaced by kDegenerateEpsilon, and overflowing intermediates saturate at
/// +-DBL_MAX.
double evaluate(DistanceId id, std::span<const double> x, std::span<const double> y,
                EvalOptions options = {});
double evaluate(DistanceId id, const FeatureVector& x, const FeatureVector& y,
                EvalOptions options = {});

/// out[i] = evaluate(id, query, corpus[i]).
std::vector<double> evaluate_batch(DistanceId id, const FeatureVector& query,
                                   std::span<const FeatureVector> corpus,
                                   EvalOptions options = {});

enum class Axiom { Identity, Symmetry, TriangleInequality, NonNegativity };

std::string_view to_string(Axiom axiom) noexcept;

struct AxiomOutcome {
    Axiom axiom;
    bool holds = true;
    /// Sample indices of the first counterexample (x, y, z); unused slots are
    /// equal to the first index.
    std::size_t i = 0, j = 0, k = 0;
    /// Offending value: d(x,x), |d(x,y) - d(y,x)|, d(x,y) - d(x,z) - d(z,y)
    /// or d(x,y) depending on the axiom.
    double value = 0.0;
};

struct AxiomReport {
    DistanceId id;
    AxiomOutcome identity{Axiom::Identity};
    AxiomOutcome symmetry{Axiom::Symmetry};
    AxiomOutcome triangle{Axiom::TriangleInequality};
    AxiomOutcome non_negativity{Axiom::NonNegativity};

    bool all_hold() const noexcept {
        return identity.holds && symmetry.holds && triangle.holds && non_negativity.holds;
    }
};

/// Exhaustive empirical check over all samples, ordered pairs and ordered
/// triples. `tolerance` is an absolute slack applied to every comparison.
AxiomReport check_axioms(DistanceId id, std::span<const FeatureVector> samples, double tolerance,
                         EvalOptions options = {});

/// Registry as CSV (code,name,taxonomy,requires_nonnegative_input,
/// satisfies_identity,symmetric), one row per measure.
std::string registry_csv();

} // namespace opfdist

#endif
