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

#include "opfdist/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "opfdist/errors.hpp"
#include "opfdist/evaluation.hpp"
#include "opfdist/forest.hpp"
#include "opfdist/reports.hpp"
#include "opfdist/stats.hpp"

namespace opfdist {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::ConfigError, msg); }

std::string hex32(std::uint32_t v) { return fmt::format("{:08x}", v); }

fs::path resolve(const fs::path& base, const std::string& text) {
    const fs::path p(text);
    return p.is_absolute() ? p : (base / p).lexically_normal();
}

template <class F>
auto config_field(const std::string& where, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        config_error(where + ": " + e.what());
    } catch (const Error& e) {
        config_error(where + ": " + e.what());
    }
}

DatasetEntry parse_dataset_entry(const json& j, const fs::path& base, std::size_t index) {
    const std::string where = "datasets[" + std::to_string(index) + "]";
    if (!j.is_object()) config_error(where + " must be an object");
    static const std::set<std::string> known = {"name", "path", "format", "label_column", "has_header",
                                                "normalization"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) config_error(where + ": unknown key '" + key + "'");
    if (!j.contains("path") || !j["path"].is_string()) config_error(where + ": 'path' is required");
    DatasetEntry e;
    e.path_text = j["path"].get<std::string>();
    e.path = resolve(base, e.path_text);
    e.name = j.contains("name") ? config_field(where + ".name", [&] { return j["name"].get<std::string>(); })
                                : fs::path(e.path_text).stem().string();
    if (e.name.empty()) config_error(where + ": empty name");
    if (j.contains("format"))
        e.format = config_field(where + ".format",
                                [&] { return parse_data_format(j["format"].get<std::string>()); });
    if (j.contains("label_column")) {
        const auto& lc = j["label_column"];
        if (lc.is_number_integer())
            e.label_column = lc.get<long>();
        else if (lc.is_string())
            e.label_column = parse_label_column(lc.get<std::string>());
        else
            config_error(where + ".label_column must be a string or an integer");
    }
    if (j.contains("has_header"))
        e.has_header = config_field(where + ".has_header", [&] { return j["has_header"].get<bool>(); });
    if (j.contains("normalization"))
        e.normalization = config_field(where + ".normalization", [&] {
            return parse_normalization_mode(j["normalization"].get<std::string>());
        });
    return e;
}

Dataset load_dataset(const DatasetEntry& e) {
    Dataset ds = e.format == DataFormat::Svmlight ? load_svmlight(e.path)
                                                  : load_csv(e.path, e.label_column, e.has_header);
    ds.name = e.name;
    return ds;
}

std::string label_column_text(const LabelColumn& lc) {
    if (const auto* name = std::get_if<std::string>(&lc)) return *name;
    return std::to_string(std::get<long>(lc));
}

int report_error(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << '\n';
    if (const auto* ours = dynamic_cast<const Error*>(&e))
        if (ours->kind() == ErrorKind::ConfigError) return kExitUsageError;
    return kExitDataError;
}

std::optional<DistanceId> distance_arg(const std::string& text, std::ostream& err) {
    auto id = parse_distance_code(text);
    if (!id) err << "error: unknown distance code '" << text << "' (expected D1..D47)\n";
    return id;
}

double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// ---- train -------------------------------------------------------------

struct TrainArgs {
    std::string data, format = "csv", label_column = "-1", distance = "D3", normalization = "none", model;
    bool no_header = false, strict = false;
    std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const auto id = distance_arg(a.distance, err);
    if (!id) return kExitUsageError;
    DatasetEntry entry;
    entry.path = a.data;
    entry.name = fs::path(a.data).stem().string();
    entry.format = parse_data_format(a.format);
    entry.label_column = parse_label_column(a.label_column);
    entry.has_header = !a.no_header;
    const auto mode = parse_normalization_mode(a.normalization);
    const Dataset ds = load_dataset(entry);
    const auto spec = fit_normalization(ds.samples, mode);
    const auto t0 = std::chrono::steady_clock::now();
    const auto forest = train(TrainingGraph(apply_normalization(spec, ds.samples), *id, EvalOptions{a.strict}));
    const double seconds = elapsed(t0);
    save_forest(a.model, forest, spec, ds.class_names);
    out << "samples: " << forest.size() << '\n'
        << "features: " << forest.dim() << '\n'
        << "classes: " << ds.n_classes << '\n'
        << "prototypes: " << forest.prototypes().size() << '\n'
        << "distance: " << info(*id).code << '\n'
        << "normalization: " << to_string(mode) << '\n'
        << "train_seconds: " << format_real(seconds) << '\n'
        << "model: " << a.model << '\n';
    return kExitOk;
}

// ---- predict -----------------------------------------------------------

struct PredictArgs {
    std::string model, data, format = "csv", label_column, out;
    bool no_header = false;
    unsigned threads = 1;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
    const auto archive = load_forest(a.model);
    const auto format = parse_data_format(a.format);
    const bool has_header = !a.no_header;

    std::vector<FeatureVector> queries;
    std::vector<std::string> truth;
    const std::string text = read_text_file(a.data);
    const bool has_rows = format == DataFormat::Svmlight
        ? text.find_first_not_of(" \t\r\n") != std::string::npos
        : parse_csv_text(text).size() > (has_header ? 1u : 0u);
    if (has_rows) {
        if (format == DataFormat::Svmlight || !a.label_column.empty()) {
            const Dataset ds = format == DataFormat::Svmlight
                ? load_svmlight(a.data)
                : load_csv(a.data, parse_label_column(a.label_column), has_header);
            for (const auto& s : ds.samples) {
                queries.push_back(s.features);
                truth.push_back(ds.class_names.at(s.label));
            }
        } else {
            queries = load_csv_features(a.data, has_header);
        }
    }
    const auto& forest = archive.forest;
    for (std::size_t i = 0; i < queries.size(); ++i)
        if (queries[i].dim() != forest.dim())
            fail(ErrorKind::DimensionMismatch, "row " + std::to_string(i + 1) + " has " +
                                                   std::to_string(queries[i].dim()) + " features, model expects " +
                                                   std::to_string(forest.dim()));
    for (auto& q : queries) q = apply_normalization(archive.normalization, q);
    const auto predictions = classify_batch(forest, queries, a.threads);

    const auto name_of = [&](Label l) {
        return l < archive.class_names.size() ? archive.class_names[l] : std::to_string(l);
    };
    std::string csv = "row,label,cost,conqueror\n";
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& p = predictions[i];
        const std::string label = name_of(p.label);
        csv += fmt::format("{},{},{},{}\n", i, csv_escape(label), format_real(p.cost),
                           forest.samples()[p.conqueror].id);
        if (!truth.empty() && truth[i] == label) ++hits;
    }
    if (a.out.empty())
        out << csv;
    else
        write_text_file(a.out, csv);
    if (!truth.empty()) {
        std::ostream& info_out = a.out.empty() ? err : out;
        info_out << "rows: " << predictions.size() << '\n'
                 << "accuracy: " << format_real(static_cast<double>(hits) / static_cast<double>(truth.size()))
                 << '\n';
    } else if (!a.out.empty()) {
        out << "rows: " << predictions.size() << '\n';
    }
    return kExitOk;
}

// ---- axioms ------------------------------------------------------------

struct AxiomArgs {
    std::string which = "all", out;
    std::size_t samples = 50, dim = 5;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    bool strict = false;
};

std::string describe(const AxiomOutcome& o) {
    switch (o.axiom) {
    case Axiom::Identity: return fmt::format("identity: d(x{0},x{0})={1}", o.i, format_real(o.value));
    case Axiom::Symmetry:
        return fmt::format("symmetry: |d(x{0},x{1})-d(x{1},x{0})|={2}", o.i, o.j, format_real(o.value));
    case Axiom::TriangleInequality:
        return fmt::format("triangle: d(x{0},x{1})-d(x{0},x{2})-d(x{2},x{1})={3}", o.i, o.j, o.k,
                           format_real(o.value));
    case Axiom::NonNegativity: return fmt::format("non_negativity: d(x{},x{})={}", o.i, o.j, format_real(o.value));
    }
    return {};
}

int cmd_axioms(const AxiomArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<DistanceId> ids;
    if (a.which == "all") {
        for (const auto& d : registry()) ids.push_back(d.id);
    } else {
        const auto id = distance_arg(a.which, err);
        if (!id) return kExitUsageError;
        ids.push_back(*id);
    }
    if (a.samples == 0 || a.dim == 0) fail(ErrorKind::ConfigError, "--samples and --dim must be positive");
    // Uniform [0, 1) from the top 53 bits; the standard distributions are
    // implementation-defined and would make reports platform-dependent.
    std::mt19937_64 rng(a.seed);
    std::vector<FeatureVector> vectors;
    for (std::size_t i = 0; i < a.samples; ++i) {
        std::vector<double> v(a.dim);
        for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        vectors.emplace_back(std::move(v));
    }
    const auto verdict = [](const AxiomOutcome& o) { return o.holds ? "pass" : "fail"; };
    std::string table = "code,name,identity,symmetry,triangle,non_negativity,first_counterexample\n";
    for (const auto id : ids) {
        const auto r = check_axioms(id, vectors, a.tolerance, EvalOptions{a.strict});
        std::string example;
        for (const auto* o : {&r.identity, &r.symmetry, &r.triangle, &r.non_negativity})
            if (!o->holds) {
                example = describe(*o);
                break;
            }
        table += fmt::format("{},{},{},{},{},{},{}\n", info(id).code, csv_escape(info(id).name),
                             verdict(r.identity), verdict(r.symmetry), verdict(r.triangle),
                             verdict(r.non_negativity), csv_escape(example));
    }
    if (a.out.empty())
        out << table;
    else
        write_text_file(a.out, table);
    return kExitOk;
}

// ---- bench -------------------------------------------------------------

using CellName = std::tuple<std::string, std::string, std::size_t, std::size_t>;

int cmd_bench(const std::string& config_path, std::optional<unsigned> threads_override, std::ostream& out,
              std::ostream& err) {
    const BenchConfig config = load_bench_config(config_path);
    std::vector<Dataset> datasets;
    json dataset_meta = json::array();
    std::string hash_input = canonical_config(config).dump();
    std::vector<NormalizationMode> modes;
    for (const auto& e : config.datasets) {
        datasets.push_back(load_dataset(e));
        const auto& ds = datasets.back();
        const auto file_crc = hex32(crc32(read_text_file(e.path)));
        hash_input += '|' + file_crc;
        modes.push_back(e.normalization.value_or(config.normalization));
        dataset_meta.push_back({{"name", ds.name},
                                {"path", e.path_text},
                                {"crc32", file_crc},
                                {"samples", ds.samples.size()},
                                {"features", ds.n_features},
                                {"classes", ds.n_classes},
                                {"normalization", std::string(to_string(modes.back()))}});
        err << fmt::format("bench: loaded {} ({} samples, {} features, {} classes)\n", ds.name, ds.samples.size(),
                           ds.n_features, ds.n_classes);
    }
    const std::string manifest_hash = hex32(crc32(hash_input));

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create " + config.output_dir.string() + ": " + ec.message());
    const fs::path journal_path = config.output_dir / "cells_journal.csv";
    const fs::path state_path = config.output_dir / "run_state.json";

    // Resume only when the previous run had exactly the same inputs.
    std::map<CellName, Cell> known;
    if (fs::exists(state_path) && fs::exists(journal_path)) {
        const auto state = json::parse(read_text_file(state_path), nullptr, false);
        if (!state.is_discarded() && state.value("manifest_hash", "") == manifest_hash) {
            for (auto& r : parse_cell_csv(read_text_file(journal_path)))
                known.emplace(CellName{r.dataset, r.classifier, r.run, r.fold}, r.cell);
        } else {
            err << "bench: output directory holds a run with different inputs; starting over\n";
        }
    }
    {
        // Rewrite the journal from what was recovered so appends start on a clean line.
        std::string journal = cell_csv_header(true);
        for (const auto& [key, cell] : known)
            journal += cell_csv_row({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), cell},
                                    true);
        write_text_file(journal_path, journal);
        write_text_file(state_path, json{{"manifest_hash", manifest_hash}}.dump(2) + '\n');
    }

    std::ofstream journal(journal_path, std::ios::app | std::ios::binary);
    if (!journal) fail(ErrorKind::IoError, "cannot append to " + journal_path.string());

    std::vector<std::string> classifier_names;
    for (const auto id : config.distances) classifier_names.emplace_back(info(id).code);
    const std::size_t total = datasets.size() * config.distances.size() * config.runs * BenchmarkMatrix::kFolds;
    std::size_t resumed = 0, computed = 0;
    const std::size_t step = std::max<std::size_t>(1, total / 20);

    BenchOptions options;
    options.normalization = config.normalization;
    options.dataset_normalization = modes;
    options.eval = EvalOptions{config.strict};
    options.threads = threads_override.value_or(config.parallelism);
    options.lookup = [&](const CellKey& k) -> std::optional<Cell> {
        const auto it = known.find({datasets[k.dataset].name, classifier_names[k.classifier], k.run, k.fold});
        if (it == known.end()) return std::nullopt;
        return it->second;
    };
    options.on_cell = [&](const CellKey& k, const Cell& cell) {
        journal << cell_csv_row({datasets[k.dataset].name, classifier_names[k.classifier], k.run, k.fold, cell},
                                true);
        journal.flush();
        if (++computed % step == 0) err << fmt::format("bench: {} cells computed\n", computed);
    };
    const auto t0 = std::chrono::steady_clock::now();
    auto matrix = run_benchmark(datasets, config.distances, config.seed, config.runs, options);
    journal.close();
    resumed = total - computed;

    if (config.external_baselines) merge_external_baselines(matrix, *config.external_baselines);

    const std::string matrix_text = matrix_csv(matrix);
    write_text_file(config.output_dir / "matrix.csv", matrix_text);
    write_text_file(config.output_dir / "timings.csv", timings_csv(matrix));

    const auto summary = summarize(matrix);
    const auto stats = analyse(matrix, config.alpha);
    const std::size_t failed = matrix.count(CellStatus::Failed);
    json manifest = {
        {"manifest_hash", manifest_hash},
        {"seed", config.seed},
        {"config", canonical_config(config)},
        {"datasets", dataset_meta},
        {"protocol", "stratified 2-fold cross-validation, each fold trains once and tests on the other"},
        {"seeding", "dataset seed = derive_seed(seed, crc32(name)); run seed = derive_seed(dataset seed, run)"},
        {"cells", {{"total", matrix.cell_count()}, {"ok", matrix.count(CellStatus::Ok)}, {"failed", failed}}},
        {"files", json::array({{{"name", "matrix.csv"},
                                {"crc32", hex32(crc32(matrix_text))},
                                {"bytes", matrix_text.size()}}})},
    };
    write_reports(summary, stats, config.output_dir, manifest);
    const json status = {{"manifest_hash", manifest_hash},
                         {"cells_total", total},
                         {"cells_computed", computed},
                         {"cells_resumed", resumed},
                         {"cells_failed", failed},
                         {"wall_seconds", elapsed(t0)}};
    write_text_file(config.output_dir / "run_status.json", status.dump(2) + '\n');
    err << fmt::format("bench: {} cells ({} computed, {} resumed), {} failed\n", total, computed, resumed, failed);
    if (failed > 0) err << fmt::format("warning: {} cells failed; see summary_raw.csv\n", failed);
    out << "output: " << config.output_dir.string() << '\n';
    return kExitOk;
}

// ---- rank --------------------------------------------------------------

struct RankArgs {
    std::string matrix, out, baselines;
    double alpha = 0.05;
};

int cmd_rank(const RankArgs& a, std::ostream& out, std::ostream& err) {
    const std::string text = read_text_file(a.matrix);
    auto matrix = matrix_from_records(parse_cell_csv(text));
    if (!a.baselines.empty()) merge_external_baselines(matrix, a.baselines);
    const auto stats = analyse(matrix, a.alpha);
    json manifest = {{"source_matrix", {{"crc32", hex32(crc32(text))}, {"bytes", text.size()}}}};
    if (!a.baselines.empty()) manifest["external_baselines_crc32"] = hex32(crc32(read_text_file(a.baselines)));
    write_reports(summarize(matrix), stats, a.out, manifest);
    if (stats.classifiers.empty())
        err << "rank: fewer than three complete classifiers, Friedman test skipped\n";
    out << "output: " << a.out << '\n';
    return kExitOk;
}

} // namespace

BenchConfig parse_bench_config(const json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) config_error("config must be a JSON object");
    static const std::set<std::string> known = {"datasets",      "distances", "runs",        "seed",
                                                "normalization", "output_dir", "parallelism", "external_baselines",
                                                "alpha",         "strict"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key)) config_error("unknown key '" + key + "'");

    BenchConfig c;
    if (!doc.contains("datasets") || !doc["datasets"].is_array() || doc["datasets"].empty())
        config_error("'datasets' must be a non-empty list");
    std::set<fs::path> paths;
    std::set<std::string> names;
    for (std::size_t i = 0; i < doc["datasets"].size(); ++i) {
        auto e = parse_dataset_entry(doc["datasets"][i], base_dir, i);
        if (!paths.insert(e.path).second) config_error("dataset path listed twice: " + e.path_text);
        if (!names.insert(e.name).second) config_error("dataset name listed twice: " + e.name);
        c.datasets.push_back(std::move(e));
    }

    if (!doc.contains("distances")) config_error("'distances' is required");
    const auto& dist = doc["distances"];
    if (dist.is_string()) {
        c.distances = config_field("distances", [&] { return parse_distance_list(dist.get<std::string>()); });
    } else if (dist.is_array()) {
        for (const auto& d : dist) {
            const auto code = config_field("distances", [&] { return d.get<std::string>(); });
            const auto id = parse_distance_code(code);
            if (!id) config_error("unknown distance code '" + code + "'");
            if (std::find(c.distances.begin(), c.distances.end(), *id) != c.distances.end())
                config_error("distance listed twice: " + code);
            c.distances.push_back(*id);
        }
    } else {
        config_error("'distances' must be \"all\" or a list of codes");
    }
    if (c.distances.empty()) config_error("'distances' is empty");

    if (doc.contains("runs")) {
        const auto runs = config_field("runs", [&] { return doc["runs"].get<long long>(); });
        if (runs < 1) config_error("'runs' must be at least 1");
        c.runs = static_cast<std::size_t>(runs);
    }
    if (doc.contains("seed")) c.seed = config_field("seed", [&] { return doc["seed"].get<std::uint64_t>(); });
    if (doc.contains("normalization"))
        c.normalization = config_field("normalization", [&] {
            return parse_normalization_mode(doc["normalization"].get<std::string>());
        });
    if (!doc.contains("output_dir") || !doc["output_dir"].is_string()) config_error("'output_dir' is required");
    c.output_dir = resolve(base_dir, doc["output_dir"].get<std::string>());
    if (doc.contains("parallelism")) {
        const auto& p = doc["parallelism"];
        if (p.is_string() && p.get<std::string>() == "auto")
            c.parallelism = 0;
        else if (p.is_number_integer() && p.get<long long>() >= 1)
            c.parallelism = static_cast<unsigned>(p.get<long long>());
        else
            config_error("'parallelism' must be \"auto\" or a positive integer");
    }
    if (doc.contains("external_baselines") && !doc["external_baselines"].is_null())
        c.external_baselines = resolve(
            base_dir, config_field("external_baselines", [&] { return doc["external_baselines"].get<std::string>(); }));
    if (doc.contains("alpha")) {
        c.alpha = config_field("alpha", [&] { return doc["alpha"].get<double>(); });
        if (!(c.alpha > 0.0 && c.alpha < 1.0)) config_error("'alpha' must lie in (0, 1)");
    }
    if (doc.contains("strict")) c.strict = config_field("strict", [&] { return doc["strict"].get<bool>(); });
    return c;
}

BenchConfig load_bench_config(const fs::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        config_error(e.what());
    }
    const auto doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) config_error(path.string() + " is not valid JSON");
    return parse_bench_config(doc, fs::absolute(path).parent_path());
}

json canonical_config(const BenchConfig& c) {
    json datasets = json::array();
    for (const auto& e : c.datasets) {
        json d = {{"name", e.name},
                  {"path", e.path_text},
                  {"format", e.format == DataFormat::Csv ? "csv" : "svmlight"},
                  {"label_column", label_column_text(e.label_column)},
                  {"has_header", e.has_header}};
        if (e.normalization) d["normalization"] = std::string(to_string(*e.normalization));
        datasets.push_back(d);
    }
    json distances = json::array();
    for (const auto id : c.distances) distances.push_back(std::string(info(id).code));
    return {{"datasets", datasets},
            {"distances", distances},
            {"runs", c.runs},
            {"seed", c.seed},
            {"normalization", std::string(to_string(c.normalization))},
            {"external_baselines", c.external_baselines ? json(c.external_baselines->filename().string()) : json()},
            {"alpha", c.alpha},
            {"strict", c.strict}};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimum-path forest classifier with 47 distance measures"};
    app.name("opfdist");
    app.set_version_flag("--version", fmt::format("opfdist {} (forest format {})", OPFDIST_VERSION,
                                                  kForestFormatVersion));
    app.require_subcommand(1);

    TrainArgs ta;
    auto* train_cmd = app.add_subcommand("train", "Train a forest and save it");
    train_cmd->add_option("--data", ta.data, "Training file")->required();
    train_cmd->add_option("--format", ta.format, "csv or svmlight")->capture_default_str();
    train_cmd->add_option("--label-column", ta.label_column, "Label column name or index (negative from the end)")
        ->capture_default_str();
    train_cmd->add_flag("--no-header", ta.no_header, "CSV has no header row");
    train_cmd->add_option("--distance", ta.distance, "Distance code D1..D47")->capture_default_str();
    train_cmd->add_option("--normalization", ta.normalization, "none or min_max_01")->capture_default_str();
    train_cmd->add_option("--seed", ta.seed, "Accepted for scripting symmetry; training is deterministic");
    train_cmd->add_flag("--strict", ta.strict, "Reject negative inputs for root-based measures");
    train_cmd->add_option("--model", ta.model, "Output archive")->required();

    PredictArgs pa;
    auto* predict_cmd = app.add_subcommand("predict", "Classify rows with a saved forest");
    predict_cmd->add_option("--model", pa.model, "Forest archive")->required();
    predict_cmd->add_option("--data", pa.data, "Input file")->required();
    predict_cmd->add_option("--format", pa.format, "csv or svmlight")->capture_default_str();
    predict_cmd->add_option("--label-column", pa.label_column, "Column with true labels, if present");
    predict_cmd->add_flag("--no-header", pa.no_header, "CSV has no header row");
    predict_cmd->add_option("--out", pa.out, "Predictions CSV (default: standard output)");
    predict_cmd->add_option("--threads", pa.threads, "Worker threads, 0 = all cores")->capture_default_str();

    std::string config_path;
    std::optional<unsigned> bench_threads;
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark grid from a JSON config");
    bench_cmd->add_option("config", config_path, "Config file")->required();
    bench_cmd->add_option("--threads", bench_threads, "Override the config's parallelism (0 = auto)");

    AxiomArgs aa;
    auto* axioms_cmd = app.add_subcommand("axioms", "Check metric axioms on random vectors");
    axioms_cmd->add_option("distance", aa.which, "Distance code or 'all'")->capture_default_str();
    axioms_cmd->add_option("--samples", aa.samples, "Number of random vectors")->capture_default_str();
    axioms_cmd->add_option("--dim", aa.dim, "Vector dimension")->capture_default_str();
    axioms_cmd->add_option("--seed", aa.seed, "Random seed")->capture_default_str();
    axioms_cmd->add_option("--tolerance", aa.tolerance, "Absolute slack")->capture_default_str();
    axioms_cmd->add_flag("--strict", aa.strict, "Reject negative inputs for root-based measures");
    axioms_cmd->add_option("--out", aa.out, "Write the table to a file");

    RankArgs ra;
    auto* rank_cmd = app.add_subcommand("rank", "Recompute statistics and reports from a matrix CSV");
    rank_cmd->add_option("--matrix", ra.matrix, "matrix.csv from a bench run")->required();
    rank_cmd->add_option("--out", ra.out, "Report directory")->required();
    rank_cmd->add_option("--alpha", ra.alpha, "Significance level")->capture_default_str();
    rank_cmd->add_option("--baselines", ra.baselines, "External baseline accuracies CSV");

    auto* registry_cmd = app.add_subcommand("distances", "Print the distance catalogue as CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    try {
        if (*train_cmd) return cmd_train(ta, out, err);
        if (*predict_cmd) return cmd_predict(pa, out, err);
        if (*bench_cmd) return cmd_bench(config_path, bench_threads, out, err);
        if (*axioms_cmd) return cmd_axioms(aa, out, err);
        if (*rank_cmd) return cmd_rank(ra, out, err);
        if (*registry_cmd) {
            out << registry_csv();
            return kExitOk;
        }
    } catch (const std::exception& e) {
        return report_error(e, err);
    }
    return kExitUsageError;
}

} // namespace opfdist
