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

#ifndef OPFDIST_CLI_HPP
#define OPFDIST_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfdist/dataio.hpp"
#include "opfdist/distances.hpp"

namespace opfdist {

struct DatasetEntry {
    std::string name;
    std::filesystem::path path;  // resolved against the config directory
    std::string path_text;       // as written in the config
    DataFormat format = DataFormat::Csv;
    LabelColumn label_column = -1L;
    bool has_header = true;
    /// Overrides BenchConfig::normalization for this dataset.
    std::optional<NormalizationMode> normalization;
};

struct BenchConfig {
    std::vector<DatasetEntry> datasets;
    std::vector<DistanceId> distances;
    std::size_t runs = 25;
    std::uint64_t seed = 0;
    NormalizationMode normalization = NormalizationMode::None;
    std::filesystem::path output_dir;
    unsigned parallelism = 0;  // 0 = auto
    std::optional<std::filesystem::path> external_baselines;
    double alpha = 0.05;
    bool strict = false;
};

/// Validates and resolves a JSON config; relative paths are taken relative
/// to `base_dir`. Throws ConfigError.
BenchConfig parse_bench_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
BenchConfig load_bench_config(const std::filesystem::path& path);

/// Everything that influences cell values and reports, in a fixed key order.
/// Output directory and parallelism are left out on purpose.
nlohmann::json canonical_config(const BenchConfig& config);

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

/// Entry point of the `opfdist` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace opfdist

#endif
