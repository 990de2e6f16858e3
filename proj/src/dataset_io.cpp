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
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "opfdist/dataio.hpp"
#include "opfdist/errors.hpp"

namespace opfdist {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string located(std::size_t line, std::size_t column, const std::string& what) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
}

/// Strict binary64 parse of a whole token. Non-numeric text raises
/// NonNumericFeature; NaN/inf tokens raise ParseError.
double parse_feature(std::string_view token, std::size_t line, std::size_t column) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || end != token.data() + token.size() || ec == std::errc::invalid_argument)
        fail(ErrorKind::NonNumericFeature,
             located(line, column, "'" + std::string(token) + "' is not a number"));
    if (ec == std::errc::result_out_of_range || !std::isfinite(value))
        fail(ErrorKind::ParseError, located(line, column, "non-finite value '" + std::string(token) + "'"));
    return value;
}

struct Row {
    std::size_t line;
    std::vector<std::string> fields;
};

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.emplace_back(trim(field));
    return fields;
}

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

Table read_csv_table(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (header_pending) {
            table.header = std::move(fields);
            header_pending = false;
            continue;
        }
        const std::size_t expected = table.header.empty()
            ? (table.rows.empty() ? fields.size() : table.rows.front().fields.size())
            : table.header.size();
        if (fields.size() != expected)
            fail(ErrorKind::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(expected));
        table.rows.push_back({line_no, std::move(fields)});
    }
    return table;
}

std::size_t resolve_label_column(const LabelColumn& column, const Table& table) {
    const std::size_t width = table.header.empty() ? table.rows.front().fields.size() : table.header.size();
    if (const auto* name = std::get_if<std::string>(&column)) {
        if (table.header.empty())
            fail(ErrorKind::ParseError, "label column '" + *name + "' given by name but file has no header");
        const auto it = std::find(table.header.begin(), table.header.end(), *name);
        if (it == table.header.end()) fail(ErrorKind::ParseError, "no column named '" + *name + "'");
        return static_cast<std::size_t>(it - table.header.begin());
    }
    const long index = std::get<long>(column);
    const long resolved = index < 0 ? static_cast<long>(width) + index : index;
    if (resolved < 0 || resolved >= static_cast<long>(width))
        fail(ErrorKind::ParseError, "label column index " + std::to_string(index) + " out of range for " +
                                        std::to_string(width) + " columns");
    return static_cast<std::size_t>(resolved);
}

class LabelMap {
public:
    Label map(const std::string& text) {
        const auto [it, inserted] = index_.try_emplace(text, static_cast<Label>(names_.size()));
        if (inserted) names_.push_back(text);
        return it->second;
    }
    std::vector<std::string> take_names() { return std::move(names_); }

private:
    std::unordered_map<std::string, Label> index_;
    std::vector<std::string> names_;
};

} // namespace

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(n_classes, 0);
    for (const auto& s : samples) ++counts[s.label];
    return counts;
}

void validate(const Dataset& dataset) {
    const auto bad = [&](const std::string& what) {
        fail(ErrorKind::InvalidArgument, "dataset '" + dataset.name + "': " + what);
    };
    if (dataset.samples.empty()) bad("no samples");
    if (dataset.n_features == 0) bad("no features");
    if (!dataset.class_names.empty() && dataset.class_names.size() != dataset.n_classes)
        bad("class name count differs from class count");
    std::vector<char> used(dataset.n_classes, 0);
    for (const auto& s : dataset.samples) {
        if (s.features.dim() != dataset.n_features) bad("sample " + std::to_string(s.id) + " has wrong dimension");
        if (s.label >= dataset.n_classes) bad("label out of range");
        used[s.label] = 1;
    }
    if (std::find(used.begin(), used.end(), 0) != used.end()) bad("labels are not contiguous");
}

LabelColumn parse_label_column(std::string_view text) {
    text = trim(text);
    long index = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
    if (!text.empty() && ec == std::errc{} && end == text.data() + text.size()) return index;
    return std::string(text);
}

DataFormat parse_data_format(std::string_view text) {
    if (text == "csv") return DataFormat::Csv;
    if (text == "svmlight" || text == "libsvm") return DataFormat::Svmlight;
    fail(ErrorKind::InvalidArgument, "unknown data format '" + std::string(text) + "'");
}

Dataset load_csv(const std::filesystem::path& path, const LabelColumn& label_column, bool has_header) {
    const Table table = read_csv_table(path, has_header);
    if (table.rows.empty()) fail(ErrorKind::EmptyFile, path.string() + " contains no data rows");
    const std::size_t label_at = resolve_label_column(label_column, table);
    const std::size_t width = table.rows.front().fields.size();
    if (width < 2) fail(ErrorKind::ParseError, "need at least one feature column besides the label");

    Dataset ds;
    ds.name = path.stem().string();
    ds.n_features = width - 1;
    LabelMap labels;
    for (const auto& row : table.rows) {
        std::vector<double> values;
        values.reserve(ds.n_features);
        for (std::size_t c = 0; c < width; ++c)
            if (c != label_at) values.push_back(parse_feature(row.fields[c], row.line, c + 1));
        if (row.fields[label_at].empty())
            fail(ErrorKind::ParseError, located(row.line, label_at + 1, "empty label"));
        ds.samples.push_back({FeatureVector(std::move(values)), labels.map(row.fields[label_at]),
                              ds.samples.size()});
    }
    ds.class_names = labels.take_names();
    ds.n_classes = ds.class_names.size();
    return ds;
}

std::vector<FeatureVector> load_csv_features(const std::filesystem::path& path, bool has_header) {
    const Table table = read_csv_table(path, has_header);
    std::vector<FeatureVector> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<double> values;
        for (std::size_t c = 0; c < row.fields.size(); ++c)
            values.push_back(parse_feature(row.fields[c], row.line, c + 1));
        out.emplace_back(std::move(values));
    }
    return out;
}

Dataset load_svmlight(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());

    struct SparseRow {
        Label label;
        std::vector<std::pair<std::size_t, double>> entries;
    };
    std::vector<SparseRow> rows;
    LabelMap labels;
    std::size_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string token;
        if (!(tokens >> token)) continue;
        SparseRow row{labels.map(token), {}};
        std::size_t column = 1;
        std::size_t previous = 0;
        while (tokens >> token) {
            ++column;
            const auto colon = token.find(':');
            if (colon == std::string::npos)
                fail(ErrorKind::ParseError, located(line_no, column, "expected index:value, got '" + token + "'"));
            const std::string_view key(token.data(), colon);
            if (key == "qid") continue;
            std::size_t index = 0;
            const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), index);
            if (ec != std::errc{} || end != key.data() + key.size() || index == 0)
                fail(ErrorKind::ParseError, located(line_no, column, "invalid feature index '" + std::string(key) + "'"));
            if (index <= previous)
                fail(ErrorKind::NonAscendingIndices,
                     located(line_no, column, "index " + std::to_string(index) + " follows " + std::to_string(previous)));
            previous = index;
            const double value = parse_feature(std::string_view(token).substr(colon + 1), line_no, column);
            row.entries.emplace_back(index, value);
            max_index = std::max(max_index, index);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorKind::EmptyFile, path.string() + " contains no data rows");
    if (max_index == 0) fail(ErrorKind::ParseError, path.string() + " contains no feature entries");

    Dataset ds;
    ds.name = path.stem().string();
    ds.n_features = max_index;
    for (auto& row : rows) {
        std::vector<double> dense(max_index, 0.0);
        for (const auto& [index, value] : row.entries) dense[index - 1] = value;
        ds.samples.push_back({FeatureVector(std::move(dense)), row.label, ds.samples.size()});
    }
    ds.class_names = labels.take_names();
    ds.n_classes = ds.class_names.size();
    return ds;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ostringstream out;
    for (std::size_t f = 0; f < dataset.n_features; ++f) out << 'f' << f << ',';
    out << "label\n";
    char buffer[64];
    for (const auto& s : dataset.samples) {
        for (const double v : s.features.values()) {
            const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
            out.write(buffer, end - buffer);
            out << ',';
        }
        if (dataset.class_names.empty())
            out << s.label << '\n';
        else
            out << dataset.class_names[s.label] << '\n';
    }
    write_text_file(path, out.str());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::IoError, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) fail(ErrorKind::IoError, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(ErrorKind::IoError, "cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::vector<CsvRecord> parse_csv_text(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<CsvRecord> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        out.push_back({line_no, split_csv_line(line)});
    }
    return out;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace opfdist
