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

#ifndef OPFDIST_DATAIO_HPP
#define OPFDIST_DATAIO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "opfdist/feature_vector.hpp"
#include "opfdist/forest.hpp"

namespace opfdist {

/// Labelled samples with a contiguous 0-based label range. class_names[k] is
/// the textual label that was mapped to k (first appearance order).
struct Dataset {
    std::string name;
    std::vector<Sample> samples;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::vector<std::string> class_names;

    std::vector<std::size_t> class_counts() const;
};

/// Throws InvalidArgument when a Dataset breaks its invariants.
void validate(const Dataset& dataset);

/// Column holding the class label: a header name, or an index where negative
/// values count from the end (-1 is the last column).
using LabelColumn = std::variant<std::string, long>;

LabelColumn parse_label_column(std::string_view text);

enum class DataFormat { Csv, Svmlight };

DataFormat parse_data_format(std::string_view text);

/// Comma-separated, optional header row. Features are parsed as binary64;
/// errors carry 1-based line and column numbers.
Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column, bool has_header);

/// Unlabelled variant for prediction inputs. An empty file yields no rows.
std::vector<FeatureVector> load_csv_features(const std::filesystem::path& path, bool has_header);

/// `<label> <index>:<value> ...` with 1-based, strictly ascending indices per
/// line. Densified to the largest index seen; absent entries are 0.
Dataset load_svmlight(const std::filesystem::path& path);

/// Writes f0..f{n-1},label with full-precision reals and textual labels.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

enum class NormalizationMode : std::uint8_t { None = 0, MinMax01 = 1 };

std::string_view to_string(NormalizationMode mode) noexcept;
NormalizationMode parse_normalization_mode(std::string_view text);

struct NormalizationSpec {
    NormalizationMode mode = NormalizationMode::None;
    std::vector<double> min;
    std::vector<double> max;

    friend bool operator==(const NormalizationSpec&, const NormalizationSpec&) = default;
};

/// Per-feature ranges of the given (training) samples. Throws Empty.
NormalizationSpec fit_normalization(std::span<const Sample> train, NormalizationMode mode);
/// Affine map onto [0, 1] with clamping; constant features map to 0.
FeatureVector apply_normalization(const NormalizationSpec& spec, const FeatureVector& v);
std::vector<Sample> apply_normalization(const NormalizationSpec& spec, std::span<const Sample> samples);

inline constexpr std::uint32_t kForestFormatVersion = 1;

struct ForestArchive {
    TrainedForest forest;
    NormalizationSpec normalization;
    std::vector<std::string> class_names;
    std::uint32_t format_version = kForestFormatVersion;
};

/// Binary, little-endian, CRC-32 protected; layout in docs/forest-format.md.
void save_forest(const std::filesystem::path& path, const TrainedForest& forest,
                 const NormalizationSpec& normalization, std::span<const std::string> class_names);
/// Throws IoError, VersionMismatch or CorruptArchive.
ForestArchive load_forest(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_forest(const TrainedForest& forest,
                                        const NormalizationSpec& normalization,
                                        std::span<const std::string> class_names,
                                        std::uint32_t format_version = kForestFormatVersion);
ForestArchive decode_forest(std::span<const std::uint8_t> bytes);

/// CRC-32 of a byte range, used for archives and run manifests.
std::uint32_t crc32(std::span<const std::uint8_t> bytes);
std::uint32_t crc32(std::string_view text);

/// Generic CSV helpers for report and journal files: quoted fields, CRLF and a
/// leading BOM are accepted; blank lines are skipped. Each record keeps its
/// 1-based line number in `line`.
struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv_text(std::string_view text);
/// Quotes a field when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename, so readers never observe a
/// partially written file.
void write_text_file(const std::filesystem::path& path, std::string_view content);

} // namespace opfdist

#endif
