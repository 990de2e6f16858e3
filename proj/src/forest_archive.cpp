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

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <boost/crc.hpp>

#include "opfdist/dataio.hpp"
#include "opfdist/errors.hpp"

namespace opfdist {

namespace {

constexpr std::array<std::uint8_t, 8> kMagic = {'O', 'P', 'F', 'F', 'O', 'R', 'S', 'T'};
constexpr std::size_t kHeaderSize = 8 + 4 + 8;  // magic, version, payload size
constexpr std::size_t kTrailerSize = 4;         // crc32
constexpr std::uint64_t kNoneNode = ~std::uint64_t{0};

class Writer {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes_.insert(bytes_.end(), s.begin(), s.end());
    }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    void put(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    double f64() { return std::bit_cast<double>(get(8)); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    /// Guards allocations driven by counts read from the file.
    std::size_t count(std::uint64_t n, std::size_t min_bytes_each) {
        if (n > (bytes_.size() - pos_) / std::max<std::size_t>(min_bytes_each, 1))
            fail(ErrorKind::CorruptArchive, "element count exceeds archive size");
        return static_cast<std::size_t>(n);
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) fail(ErrorKind::CorruptArchive, "unexpected end of archive");
    }
    std::uint64_t get(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

std::uint32_t crc32(std::string_view text) {
    return crc32(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> encode_forest(const TrainedForest& forest, const NormalizationSpec& normalization,
                                        std::span<const std::string> class_names,
                                        std::uint32_t format_version) {
    const std::size_t n = forest.size();
    const std::size_t dim = forest.dim();

    Writer payload;
    payload.u8(static_cast<std::uint8_t>(forest.distance()));
    payload.u8(forest.options().strict ? 1 : 0);
    payload.u8(static_cast<std::uint8_t>(normalization.mode));
    payload.u8(0);
    payload.u64(n);
    payload.u64(dim);
    payload.u64(class_names.size());
    for (const auto& name : class_names) payload.str(name);
    if (normalization.mode == NormalizationMode::MinMax01) {
        for (const double v : normalization.min) payload.f64(v);
        for (const double v : normalization.max) payload.f64(v);
    }
    for (const auto& s : forest.samples()) {
        payload.u64(s.id);
        payload.u32(s.label);
        for (const double v : s.features.values()) payload.f64(v);
    }
    for (const double c : forest.cost()) payload.f64(c);
    for (const auto p : forest.predecessor())
        payload.u64(p == TrainedForest::kNoPredecessor ? kNoneNode : p);
    for (const auto l : forest.root_label()) payload.u32(l);
    for (const auto o : forest.ordered_nodes()) payload.u64(o);
    payload.u64(forest.prototypes().size());
    for (const auto p : forest.prototypes()) payload.u64(p);

    Writer out;
    out.bytes().assign(kMagic.begin(), kMagic.end());
    out.u32(format_version);
    out.u64(payload.bytes().size());
    out.bytes().insert(out.bytes().end(), payload.bytes().begin(), payload.bytes().end());
    out.u32(crc32(out.bytes()));
    return std::move(out.bytes());
}

ForestArchive decode_forest(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize + kTrailerSize)
        fail(ErrorKind::CorruptArchive, "archive truncated (" + std::to_string(bytes.size()) + " bytes)");
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
        fail(ErrorKind::CorruptArchive, "bad magic bytes");
    Reader header(bytes.subspan(8, 12));
    const std::uint32_t version = header.u32();
    if (version != kForestFormatVersion)
        fail(ErrorKind::VersionMismatch, "archive format version " + std::to_string(version) +
                                             ", this build reads version " + std::to_string(kForestFormatVersion));
    const std::uint64_t payload_size = header.u64();
    if (payload_size != bytes.size() - kHeaderSize - kTrailerSize)
        fail(ErrorKind::CorruptArchive, "archive size does not match its header");
    Reader trailer(bytes.subspan(bytes.size() - kTrailerSize));
    if (trailer.u32() != crc32(bytes.first(bytes.size() - kTrailerSize)))
        fail(ErrorKind::CorruptArchive, "checksum mismatch");

    Reader r(bytes.subspan(kHeaderSize, payload_size));
    const auto distance_code = r.u8();
    if (distance_code < 1 || distance_code > kDistanceCount)
        fail(ErrorKind::CorruptArchive, "unknown distance code " + std::to_string(distance_code));
    const bool strict = r.u8() != 0;
    const auto mode_byte = r.u8();
    if (mode_byte > 1) fail(ErrorKind::CorruptArchive, "unknown normalization mode");
    r.u8();
    const std::size_t n = r.count(r.u64(), 8);
    const std::size_t dim = r.count(r.u64(), 8);
    const std::size_t n_classes = r.count(r.u64(), 4);
    if (dim == 0) fail(ErrorKind::CorruptArchive, "zero feature dimension");

    std::vector<std::string> class_names;
    for (std::size_t i = 0; i < n_classes; ++i) class_names.push_back(r.str());

    NormalizationSpec spec{static_cast<NormalizationMode>(mode_byte), {}, {}};
    if (spec.mode == NormalizationMode::MinMax01) {
        r.count(2 * dim, 8);
        for (std::size_t f = 0; f < dim; ++f) spec.min.push_back(r.f64());
        for (std::size_t f = 0; f < dim; ++f) spec.max.push_back(r.f64());
    }

    r.count(n, 12 + 8 * dim);
    std::vector<Sample> samples;
    samples.reserve(n);
    try {
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t id = r.u64();
            const Label label = r.u32();
            std::vector<double> values(dim);
            for (auto& v : values) v = r.f64();
            samples.push_back({FeatureVector(std::move(values)), label, static_cast<std::size_t>(id)});
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CorruptArchive) throw;
        fail(ErrorKind::CorruptArchive, e.what());
    }
    r.count(n, 8 + 8 + 4 + 8);
    std::vector<double> cost(n);
    for (auto& c : cost) c = r.f64();
    std::vector<std::size_t> predecessor(n);
    for (auto& p : predecessor) {
        const std::uint64_t v = r.u64();
        p = v == kNoneNode ? TrainedForest::kNoPredecessor : static_cast<std::size_t>(v);
    }
    std::vector<Label> root_label(n);
    for (auto& l : root_label) l = r.u32();
    std::vector<std::size_t> ordered(n);
    for (auto& o : ordered) o = static_cast<std::size_t>(r.u64());
    std::vector<std::size_t> prototypes(r.count(r.u64(), 8));
    for (auto& p : prototypes) p = static_cast<std::size_t>(r.u64());
    if (!r.done()) fail(ErrorKind::CorruptArchive, "trailing bytes after forest payload");

    for (const auto l : root_label)
        if (n_classes != 0 && l >= n_classes) fail(ErrorKind::CorruptArchive, "root label out of range");

    try {
        auto forest = TrainedForest::from_parts(std::move(samples), static_cast<DistanceId>(distance_code),
                                                EvalOptions{strict}, std::move(prototypes), std::move(cost),
                                                std::move(predecessor), std::move(root_label),
                                                std::move(ordered));
        return ForestArchive{std::move(forest), std::move(spec), std::move(class_names), version};
    } catch (const Error& e) {
        fail(ErrorKind::CorruptArchive, e.what());
    }
}

void save_forest(const std::filesystem::path& path, const TrainedForest& forest,
                 const NormalizationSpec& normalization, std::span<const std::string> class_names) {
    const auto bytes = encode_forest(forest, normalization, class_names);
    write_text_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

ForestArchive load_forest(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    return decode_forest(std::span(reinterpret_cast<const std::uint8_t*>(content.data()), content.size()));
}

} // namespace opfdist
