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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "opfdist/dataio.hpp"
#include "opfdist/errors.hpp"
#include "support.hpp"

namespace opfdist {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("opfdist_dataio_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path file(const std::string& name, const std::string& content) {
        const auto p = dir_ / name;
        write_text_file(p, content);
        return p;
    }
    fs::path dir_;
};

ErrorKind kind_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::InvalidArgument;
}

using Csv = TempDir;
using Svmlight = TempDir;
using Archive = TempDir;

TEST_F(Csv, LabelsMapInOrderOfFirstAppearance) {
    const auto p = file("toy.csv", "x,y,label\n1,2,a\n3,4,b\n5,6,a\n");
    const auto ds = load_csv(p, std::string("label"), true);
    EXPECT_EQ(ds.name, "toy");
    EXPECT_EQ(ds.n_features, 2u);
    ASSERT_EQ(ds.samples.size(), 3u);
    EXPECT_EQ(ds.samples[0].label, 0u);
    EXPECT_EQ(ds.samples[1].label, 1u);
    EXPECT_EQ(ds.samples[2].label, 0u);
    EXPECT_EQ(ds.class_names, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(ds.samples[1].features[1], 4.0);
    EXPECT_NO_THROW(validate(ds));
}

TEST_F(Csv, LabelColumnByIndex) {
    const auto p = file("first.csv", "c,1,2\nd,3,4\n");
    const auto ds = load_csv(p, 0L, false);
    EXPECT_EQ(ds.samples[1].features[0], 3.0);
    EXPECT_EQ(ds.class_names[1], "d");
    const auto last = load_csv(file("last.csv", "1,2,c\n3,4,d\n"), -1L, false);
    EXPECT_EQ(last.samples[0].features[1], 2.0);
    EXPECT_EQ(std::get<long>(parse_label_column("-1")), -1);
    EXPECT_EQ(std::get<std::string>(parse_label_column("class")), "class");
}

TEST_F(Csv, CrlfBomAndBlankLines) {
    const auto p = file("dos.csv", "\xEF\xBB\xBFx,label\r\n1,a\r\n\r\n2,b\r\n");
    const auto ds = load_csv(p, std::string("label"), true);
    EXPECT_EQ(ds.samples.size(), 2u);
}

TEST_F(Csv, NanIsRejectedWithLocation) {
    const auto p = file("nan.csv", "x,y,label\n1,2,a\n3,nan,b\n");
    try {
        load_csv(p, -1L, true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 3, column 2"), std::string::npos) << e.what();
    }
}

TEST_F(Csv, StructuralErrors) {
    EXPECT_EQ(kind_of([&] { load_csv(file("ragged.csv", "1,2,a\n3,b\n"), -1L, false); }), ErrorKind::RaggedRows);
    EXPECT_EQ(kind_of([&] { load_csv(file("empty.csv", ""), -1L, false); }), ErrorKind::EmptyFile);
    EXPECT_EQ(kind_of([&] { load_csv(file("hdr.csv", "x,label\n"), -1L, true); }), ErrorKind::EmptyFile);
    EXPECT_EQ(kind_of([&] { load_csv(file("word.csv", "1,two,a\n"), -1L, false); }),
              ErrorKind::NonNumericFeature);
    EXPECT_EQ(kind_of([&] { load_csv(file("name.csv", "x,label\n1,a\n"), std::string("cls"), true); }),
              ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { load_csv(file("range.csv", "1,a\n"), 5L, false); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { load_csv(dir_ / "missing.csv", -1L, false); }), ErrorKind::IoError);
}

TEST_F(Csv, WriteThenReadIsAFixedPoint) {
    std::mt19937_64 rng(5);
    Dataset ds{"rt", {}, 4, 3, {"x", "y", "z"}};
    for (std::size_t i = 0; i < 30; ++i)
        ds.samples.push_back({FeatureVector(testing::uniform_vector(rng, 4, -1e6, 1e6)), static_cast<Label>(i % 3), i});
    const auto p = dir_ / "rt.csv";
    write_csv(ds, p);
    const auto back = load_csv(p, std::string("label"), true);
    ASSERT_EQ(back.samples.size(), ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        EXPECT_EQ(back.samples[i].features, ds.samples[i].features);
        EXPECT_EQ(back.samples[i].label, ds.samples[i].label);
    }
    EXPECT_EQ(back.class_names, ds.class_names);
    const auto first = read_text_file(p);
    write_csv(back, p);
    EXPECT_EQ(read_text_file(p), first);
}

TEST(CsvText, QuotingAndEscaping) {
    const auto rows = parse_csv_text("a,\"b,c\",\"d\"\"e\"\n\n1,2,3");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "b,c", "d\"e"}));
    EXPECT_EQ(rows[1].line, 3u);
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("q\"q"), "\"q\"\"q\"");
}

TEST_F(Svmlight, DenseExpansion) {
    const auto p = file("s.svm", "+1 1:0.5 3:2 # comment\n-1 qid:3 2:1.5\n\n+1 3:-1\n");
    const auto ds = load_svmlight(p);
    EXPECT_EQ(ds.n_features, 3u);
    ASSERT_EQ(ds.samples.size(), 3u);
    EXPECT_EQ(ds.samples[0].features, (FeatureVector{{0.5, 0.0, 2.0}}));
    EXPECT_EQ(ds.samples[1].features, (FeatureVector{{0.0, 1.5, 0.0}}));
    EXPECT_EQ(ds.samples[2].label, 0u);
    EXPECT_EQ(ds.class_names, (std::vector<std::string>{"+1", "-1"}));
}

TEST_F(Svmlight, Errors) {
    EXPECT_EQ(kind_of([&] { load_svmlight(file("a.svm", "1 3:1 2:1\n")); }), ErrorKind::NonAscendingIndices);
    EXPECT_EQ(kind_of([&] { load_svmlight(file("b.svm", "1 3:1 3:2\n")); }), ErrorKind::NonAscendingIndices);
    EXPECT_EQ(kind_of([&] { load_svmlight(file("c.svm", "1 0:1\n")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { load_svmlight(file("d.svm", "1 x\n")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { load_svmlight(file("e.svm", "1 1:abc\n")); }), ErrorKind::NonNumericFeature);
    EXPECT_EQ(kind_of([&] { load_svmlight(file("f.svm", "# only\n")); }), ErrorKind::EmptyFile);
}

TEST(Normalization, NoneIsIdentity) {
    const std::vector<Sample> train{{FeatureVector{{2.0, -7.0}}, 0, 0}, {FeatureVector{{4.0, 9.0}}, 1, 1}};
    const auto spec = fit_normalization(train, NormalizationMode::None);
    const FeatureVector v{{123.0, -5.0}};
    EXPECT_EQ(apply_normalization(spec, v), v);
}

TEST(Normalization, MinMaxScalesAndHandlesConstants) {
    const std::vector<Sample> train{{FeatureVector{{2.0, 5.0}}, 0, 0}, {FeatureVector{{4.0, 5.0}}, 1, 1}};
    const auto spec = fit_normalization(train, NormalizationMode::MinMax01);
    EXPECT_EQ(apply_normalization(spec, FeatureVector{{3.0, 5.0}}), (FeatureVector{{0.5, 0.0}}));
    EXPECT_EQ(apply_normalization(spec, FeatureVector{{2.0, 6.0}}), (FeatureVector{{0.0, 0.0}}));
}

TEST(Normalization, FitUsesOnlyTheTrainingFold) {
    const std::vector<Sample> train{{FeatureVector{{0.0}}, 0, 0}, {FeatureVector{{10.0}}, 1, 1}};
    const auto spec = fit_normalization(train, NormalizationMode::MinMax01);
    // Test points outside the training range do not move the fitted bounds.
    EXPECT_EQ(apply_normalization(spec, FeatureVector{{100.0}})[0], 1.0);
    EXPECT_EQ(apply_normalization(spec, FeatureVector{{-5.0}})[0], 0.0);
    EXPECT_EQ(spec.min, std::vector<double>{0.0});
    EXPECT_EQ(spec.max, std::vector<double>{10.0});
}

TEST(Normalization, Errors) {
    EXPECT_EQ(kind_of([] { fit_normalization({}, NormalizationMode::MinMax01); }), ErrorKind::Empty);
    const std::vector<Sample> mixed{{FeatureVector{{0.0}}, 0, 0}, {FeatureVector{{1.0, 2.0}}, 1, 1}};
    EXPECT_EQ(kind_of([&] { fit_normalization(mixed, NormalizationMode::MinMax01); }),
              ErrorKind::DimensionMismatch);
    const std::vector<Sample> one{{FeatureVector{{0.0}}, 0, 0}};
    const auto spec = fit_normalization(one, NormalizationMode::MinMax01);
    EXPECT_EQ(kind_of([&] { apply_normalization(spec, FeatureVector{{1.0, 1.0}}); }),
              ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { parse_normalization_mode("zscore"); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(parse_normalization_mode("min_max_01"), NormalizationMode::MinMax01);
}

TrainedForest line_forest() {
    return train(TrainingGraph({{FeatureVector{{0.0}}, 0, 0}, {FeatureVector{{1.0}}, 0, 1},
                                {FeatureVector{{3.0}}, 1, 2}, {FeatureVector{{4.0}}, 1, 3}},
                               DistanceId::D3));
}

TEST_F(Archive, RoundTripPreservesEverything) {
    const auto forest = line_forest();
    const std::vector<Sample> train_set(forest.samples().begin(), forest.samples().end());
    const auto norm = fit_normalization(train_set, NormalizationMode::MinMax01);
    const std::vector<std::string> names{"A", "B"};
    const auto p = dir_ / "line.opf";
    save_forest(p, forest, norm, names);
    const auto back = load_forest(p);
    EXPECT_EQ(back.forest, forest);
    EXPECT_EQ(back.normalization, norm);
    EXPECT_EQ(back.class_names, names);
    EXPECT_EQ(back.format_version, kForestFormatVersion);
    for (const double q : {-1.0, 0.4, 1.9, 2.2, 4.0, 9.0}) {
        const FeatureVector v{{q}};
        EXPECT_EQ(classify(back.forest, v), classify(forest, v));
    }
}

TEST_F(Archive, RandomForestsRoundTrip) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const auto f = train(TrainingGraph(testing::random_samples(rng, 25, 3, 4), DistanceId::D7));
        const auto bytes = encode_forest(f, {}, {});
        EXPECT_EQ(decode_forest(bytes).forest, f);
        EXPECT_EQ(encode_forest(decode_forest(bytes).forest, {}, {}), bytes);
    }
}

TEST(ArchiveBytes, DamageIsDetected) {
    const auto bytes = encode_forest(line_forest(), {}, std::vector<std::string>{"A", "B"});
    for (std::size_t cut : {std::size_t{0}, std::size_t{7}, std::size_t{20}, bytes.size() - 1}) {
        const std::span<const std::uint8_t> part(bytes.data(), cut);
        EXPECT_EQ(kind_of([&] { decode_forest(part); }), ErrorKind::CorruptArchive) << cut;
    }
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        auto damaged = bytes;
        damaged[i] ^= 0x5A;
        const auto k = kind_of([&] { decode_forest(damaged); });
        EXPECT_TRUE(k == ErrorKind::CorruptArchive || k == ErrorKind::VersionMismatch) << i;
    }
    const auto future = encode_forest(line_forest(), {}, {}, kForestFormatVersion + 1);
    EXPECT_EQ(kind_of([&] { decode_forest(future); }), ErrorKind::VersionMismatch);
}

TEST(Crc32, KnownCheckValue) {
    EXPECT_EQ(crc32(std::string_view("123456789")), 0xCBF43926u);
}

} // namespace
} // namespace opfdist
