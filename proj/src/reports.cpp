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

#include "opfdist/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "opfdist/dataio.hpp"
#include "opfdist/errors.hpp"

namespace opfdist {

std::string format_real(double value) { return fmt::format("{}", value); }

std::string format_fixed4(double value) { return fmt::format("{:.4f}", value); }

namespace {

std::string_view status_text(CellStatus status) {
    switch (status) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Failed: return "failed";
    case CellStatus::Pending: break;
    }
    return "pending";
}

std::string single_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '\r', ' ');
    return text;
}

std::string located(std::size_t line, const std::string& what) {
    return "line " + std::to_string(line) + ": " + what;
}

template <class T>
T parse_number(const std::string& text, std::size_t line, std::string_view what) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
        fail(ErrorKind::ParseError, located(line, "bad " + std::string(what) + " '" + text + "'"));
    return value;
}

struct Writer {
    std::filesystem::path dir;
    std::vector<ReportFile> files;

    void put(const std::string& name, const std::string& content) {
        write_text_file(dir / name, content);
        files.push_back({name, crc32(content), content.size()});
    }
};

} // namespace

std::string cell_csv_header(bool with_timings) {
    return with_timings ? "dataset,classifier,run,fold,status,accuracy,error,train_seconds,test_seconds\n"
                        : "dataset,classifier,run,fold,status,accuracy,error\n";
}

std::string cell_csv_row(const CellRecord& r, bool with_timings) {
    std::string row = csv_escape(r.dataset) + ',' + csv_escape(r.classifier) + ',' + std::to_string(r.run) +
                      ',' + std::to_string(r.fold) + ',' + std::string(status_text(r.cell.status)) + ',' +
                      (r.cell.status == CellStatus::Ok ? format_real(r.cell.accuracy) : std::string()) + ',' +
                      csv_escape(single_line(r.cell.error));
    if (with_timings) row += ',' + format_real(r.cell.train_seconds) + ',' + format_real(r.cell.test_seconds);
    return row + '\n';
}

std::vector<CellRecord> parse_cell_csv(std::string_view text) {
    // An append cut short by an interruption leaves a line without '\n'.
    if (const auto nl = text.rfind('\n'); nl == std::string_view::npos)
        text = {};
    else
        text = text.substr(0, nl + 1);
    const auto rows = parse_csv_text(text);
    std::vector<CellRecord> out;
    if (rows.empty()) return out;
    const auto& header = rows.front().fields;
    const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_dataset = column("dataset"), c_classifier = column("classifier"), c_run = column("run"),
               c_fold = column("fold"), c_status = column("status"), c_accuracy = column("accuracy"),
               c_error = column("error"), c_train = column("train_seconds"), c_test = column("test_seconds");
    if (!c_dataset || !c_classifier || !c_run || !c_fold || !c_status || !c_accuracy || !c_error)
        fail(ErrorKind::ParseError, "cell table header must contain dataset,classifier,run,fold,status,accuracy,error");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        const std::size_t line = rows[i].line;
        if (f.size() != header.size())
            fail(ErrorKind::RaggedRows, located(line, std::to_string(f.size()) + " fields, expected " +
                                                          std::to_string(header.size())));
        CellRecord r;
        r.dataset = f[*c_dataset];
        r.classifier = f[*c_classifier];
        r.run = parse_number<std::size_t>(f[*c_run], line, "run");
        r.fold = parse_number<std::size_t>(f[*c_fold], line, "fold");
        if (r.fold >= BenchmarkMatrix::kFolds) fail(ErrorKind::ParseError, located(line, "fold must be 0 or 1"));
        const auto& status = f[*c_status];
        if (status == "ok") {
            r.cell.status = CellStatus::Ok;
            r.cell.accuracy = parse_number<double>(f[*c_accuracy], line, "accuracy");
        } else if (status == "failed") {
            r.cell.status = CellStatus::Failed;
        } else if (status != "pending") {
            fail(ErrorKind::ParseError, located(line, "unknown status '" + status + "'"));
        }
        r.cell.error = f[*c_error];
        if (c_train && !f[*c_train].empty()) r.cell.train_seconds = parse_number<double>(f[*c_train], line, "time");
        if (c_test && !f[*c_test].empty()) r.cell.test_seconds = parse_number<double>(f[*c_test], line, "time");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CellRecord> matrix_records(const BenchmarkMatrix& m) {
    std::vector<CellRecord> out;
    out.reserve(m.cell_count());
    for (std::size_t d = 0; d < m.datasets().size(); ++d)
        for (std::size_t c = 0; c < m.classifiers().size(); ++c)
            for (std::size_t r = 0; r < m.runs(); ++r)
                for (std::size_t f = 0; f < BenchmarkMatrix::kFolds; ++f)
                    out.push_back({m.datasets()[d], m.classifiers()[c], r, f, m.at(d, c, r, f)});
    return out;
}

BenchmarkMatrix matrix_from_records(const std::vector<CellRecord>& records) {
    std::vector<std::string> datasets, classifiers;
    std::size_t runs = 0;
    for (const auto& r : records) {
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
        if (std::find(classifiers.begin(), classifiers.end(), r.classifier) == classifiers.end())
            classifiers.push_back(r.classifier);
        runs = std::max(runs, r.run + 1);
    }
    if (records.empty()) fail(ErrorKind::Empty, "no cells");
    BenchmarkMatrix m(datasets, classifiers, runs);
    std::vector<bool> seen(m.cell_count(), false);
    for (const auto& r : records) {
        const std::size_t d = *m.dataset_index(r.dataset), c = *m.classifier_index(r.classifier);
        const std::size_t slot = ((d * classifiers.size() + c) * runs + r.run) * BenchmarkMatrix::kFolds + r.fold;
        if (seen[slot])
            fail(ErrorKind::ParseError, "duplicate cell " + r.dataset + "/" + r.classifier + " run " +
                                            std::to_string(r.run) + " fold " + std::to_string(r.fold));
        seen[slot] = true;
        m.at(d, c, r.run, r.fold) = r.cell;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        fail(ErrorKind::MissingCells, "cell table does not cover every dataset, classifier, run and fold");
    return m;
}

std::string matrix_csv(const BenchmarkMatrix& matrix) {
    std::string out = cell_csv_header(false);
    for (const auto& r : matrix_records(matrix)) out += cell_csv_row(r, false);
    return out;
}

std::string timings_csv(const BenchmarkMatrix& matrix) {
    std::string out = "dataset,classifier,run,fold,train_seconds,test_seconds\n";
    for (const auto& r : matrix_records(matrix))
        out += fmt::format("{},{},{},{},{},{}\n", csv_escape(r.dataset), csv_escape(r.classifier), r.run, r.fold,
                           format_real(r.cell.train_seconds), format_real(r.cell.test_seconds));
    return out;
}

std::vector<std::vector<std::string>> wilcoxon_grid(const Summary& summary, const StatReport& stats) {
    std::map<std::tuple<std::string, std::string, std::string>, const WilcoxonEntry*> tests;
    for (const auto& e : stats.wilcoxon) {
        tests[{e.dataset, e.classifier_a, e.classifier_b}] = &e;
        tests[{e.dataset, e.classifier_b, e.classifier_a}] = &e;
    }
    std::vector<std::vector<std::string>> grid(summary.datasets.size(),
                                               std::vector<std::string>(summary.classifiers.size(), "NA"));
    for (std::size_t d = 0; d < summary.datasets.size(); ++d) {
        const auto& row = summary.entries[d];
        std::optional<std::size_t> best;
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row[c].ok && (!best || row[c].mean > row[*best].mean)) best = c;
        if (!best) continue;
        grid[d][*best] = "best";
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c == *best || !row[c].ok) continue;
            const auto it = tests.find({summary.datasets[d], summary.classifiers[*best], summary.classifiers[c]});
            if (it == tests.end() || !it->second->applicable) continue;
            grid[d][c] = it->second->result.reject ? "different" : "equivalent";
        }
    }
    return grid;
}

std::vector<ReportFile> write_reports(const Summary& summary, const StatReport& stats,
                                      const std::filesystem::path& out_dir, nlohmann::json manifest) {
    if (summary.datasets.empty() || summary.classifiers.empty())
        fail(ErrorKind::Empty, "nothing to report");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
    Writer w{out_dir, {}};

    std::string header = "dataset";
    for (const auto& c : summary.classifiers) header += ',' + csv_escape(c);
    header += '\n';

    std::string table = header;
    std::string raw = "dataset,classifier,status,mean,stddev,error\n";
    for (std::size_t d = 0; d < summary.datasets.size(); ++d) {
        table += csv_escape(summary.datasets[d]);
        for (std::size_t c = 0; c < summary.classifiers.size(); ++c) {
            const auto& e = summary.entries[d][c];
            table += ',' + (e.ok ? format_fixed4(e.mean) + " ± " + format_fixed4(e.stddev) : std::string("NA"));
            raw += csv_escape(summary.datasets[d]) + ',' + csv_escape(summary.classifiers[c]) + ',' +
                   (e.ok ? "ok," + format_real(e.mean) + ',' + format_real(e.stddev) + ','
                         : "failed,,," + csv_escape(single_line(e.error)));
            raw += '\n';
        }
        table += '\n';
    }
    w.put("summary_table.csv", table);
    w.put("summary_raw.csv", raw);

    std::string pairs = "dataset,classifier_a,classifier_b,applicable,n_used,statistic,p_value,exact,reject,note\n";
    for (const auto& e : stats.wilcoxon) {
        pairs += csv_escape(e.dataset) + ',' + csv_escape(e.classifier_a) + ',' + csv_escape(e.classifier_b) + ',';
        if (e.applicable) {
            const auto& r = e.result;
            pairs += fmt::format("true,{},{},{},{},{},{}", r.n_used, format_real(r.statistic), format_real(r.p_value),
                                 r.exact, r.reject, r.all_zero ? "all differences zero" : "");
        } else {
            pairs += "false,,,,,," + csv_escape(e.note);
        }
        pairs += '\n';
    }
    w.put("wilcoxon_pairs.csv", pairs);

    std::string grid_csv = header;
    const auto grid = wilcoxon_grid(summary, stats);
    for (std::size_t d = 0; d < grid.size(); ++d) {
        grid_csv += csv_escape(summary.datasets[d]);
        for (const auto& mark : grid[d]) grid_csv += ',' + mark;
        grid_csv += '\n';
    }
    w.put("wilcoxon_grid.csv", grid_csv);

    const bool ranked = !stats.classifiers.empty();
    std::string ranks = "classifier,mean_rank,cd\n";
    std::string nemenyi = "classifier_a,classifier_b,rank_difference,significant\n";
    std::string friedman = "k,n_blocks,statistic,p_value,alpha,critical_difference\n";
    if (ranked) {
        const auto& mr = stats.friedman.mean_ranks;
        for (std::size_t i = 0; i < stats.classifiers.size(); ++i)
            ranks += csv_escape(stats.classifiers[i]) + ',' + format_real(mr[i]) + ',' +
                     format_real(stats.critical_difference) + '\n';
        for (std::size_t i = 0; i < stats.classifiers.size(); ++i)
            for (std::size_t j = i + 1; j < stats.classifiers.size(); ++j)
                nemenyi += fmt::format("{},{},{},{}\n", csv_escape(stats.classifiers[i]),
                                       csv_escape(stats.classifiers[j]), format_real(std::fabs(mr[i] - mr[j])),
                                       static_cast<bool>(stats.significant[i][j]));
        friedman += fmt::format("{},{},{},{},{},{}\n", stats.classifiers.size(), stats.friedman.n_blocks,
                                format_real(stats.friedman.statistic), format_real(stats.friedman.p_value),
                                format_real(stats.alpha), format_real(stats.critical_difference));
    }
    w.put("ranks.csv", ranks);
    w.put("friedman.csv", friedman);
    w.put("nemenyi_pairs.csv", nemenyi);

    manifest["library_version"] = OPFDIST_VERSION;
    manifest["forest_format_version"] = kForestFormatVersion;
    manifest["alpha"] = stats.alpha;
    auto listing = nlohmann::json::array();
    for (const auto& f : w.files)
        listing.push_back({{"name", f.name}, {"crc32", fmt::format("{:08x}", f.crc32)}, {"bytes", f.bytes}});
    if (manifest.contains("files"))
        for (const auto& extra : manifest["files"]) listing.push_back(extra);
    manifest["files"] = listing;
    w.put("manifest.json", manifest.dump(2) + '\n');
    return w.files;
}

} // namespace opfdist
