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

#ifndef OPFDIST_REPORTS_HPP
#define OPFDIST_REPORTS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opfdist/evaluation.hpp"
#include "opfdist/stats.hpp"

namespace opfdist {

/// Shortest text that parses back to the same binary64.
std::string format_real(double value);
/// Fixed four-decimal rendering used by the human-facing tables.
std::string format_fixed4(double value);

/// One matrix cell addressed by names, as stored in matrix.csv and in the
/// bench journal.
struct CellRecord {
    std::string dataset;
    std::string classifier;
    std::size_t run = 0;
    std::size_t fold = 0;
    Cell cell;
};

/// dataset,classifier,run,fold,status,accuracy,error[,train_seconds,test_seconds]
std::string cell_csv_header(bool with_timings);
std::string cell_csv_row(const CellRecord& record, bool with_timings);
/// Header-driven; timing columns are optional. A trailing line without a
/// newline (an interrupted append) is ignored. Throws ParseError.
std::vector<CellRecord> parse_cell_csv(std::string_view text);

std::vector<CellRecord> matrix_records(const BenchmarkMatrix& matrix);
/// Rebuilds a matrix; dataset and classifier order follow first appearance.
/// Throws ParseError on duplicate cells, MissingCells on gaps.
BenchmarkMatrix matrix_from_records(const std::vector<CellRecord>& records);

/// Every cell without timings. Deterministic for a given matrix.
std::string matrix_csv(const BenchmarkMatrix& matrix);
/// Per-cell wall-clock seconds. Not deterministic by nature.
std::string timings_csv(const BenchmarkMatrix& matrix);

/// Per-dataset marks relative to the best mean: "best", "equivalent"
/// (Wilcoxon does not reject), "different" or "NA".
std::vector<std::vector<std::string>> wilcoxon_grid(const Summary& summary, const StatReport& stats);

struct ReportFile {
    std::string name;
    std::uint32_t crc32 = 0;
    std::size_t bytes = 0;
};

/// Writes into `out_dir`:
///   summary_table.csv   rows = datasets, columns = classifiers, "m ± s"
///   summary_raw.csv     the same values at full precision, long format
///   wilcoxon_pairs.csv  every pairwise test
///   wilcoxon_grid.csv   best / equivalent / different marks
///   ranks.csv           classifier, mean_rank, cd
///   friedman.csv        omnibus statistic and critical difference
///   nemenyi_pairs.csv   rank gaps against the critical difference
///   manifest.json       `manifest` plus versions and the file list
/// Returns the files in that order. Throws IoError.
std::vector<ReportFile> write_reports(const Summary& summary, const StatReport& stats,
                                      const std::filesystem::path& out_dir,
                                      nlohmann::json manifest = nlohmann::json::object());

} // namespace opfdist

#endif
