// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/media_io.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "keytok/binary.hpp"
#include "keytok/error.hpp"
#include "keytok/splitmix64.hpp"

namespace keytok {

namespace {

const std::string kModule = "media_io";

constexpr std::string_view kFrameMagic = "KFVB";
constexpr std::string_view kEmbeddingMagic = "KFVE";
constexpr std::uint16_t kVersion = 1;

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
    throw Error(code, kModule, message);
}

}  // namespace

void validate(const FrameSequence& seq) {
    if (seq.frames.empty()) {
        fail(ErrorCode::EmptyInput, "frame sequence has zero frames");
    }
    if (seq.fps.num == 0 || seq.fps.den == 0) {
        fail(ErrorCode::InvalidArgument, "fps must be a positive rational");
    }
    const auto& first = seq.frames.front();
    if (first.width < kMinFrameSide || first.height < kMinFrameSide) {
        fail(ErrorCode::InvalidArgument, "frame sides must be >= 8 pixels, got " + std::to_string(first.width) + "x" +
                                             std::to_string(first.height));
    }
    if (first.width > std::numeric_limits<std::uint16_t>::max() ||
        first.height > std::numeric_limits<std::uint16_t>::max()) {
        fail(ErrorCode::InvalidArgument, "frame sides must fit in 16 bits");
    }
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        const auto& f = seq.frames[t];
        if (f.width != first.width || f.height != first.height) {
            fail(ErrorCode::ShapeMismatch, "frame " + std::to_string(t) + " is " + std::to_string(f.width) + "x" +
                                               std::to_string(f.height) + ", expected " +
                                               std::to_string(first.width) + "x" + std::to_string(first.height));
        }
        if (f.index != t) {
            fail(ErrorCode::InvalidArgument, "frame indices must be contiguous from 0; position " + std::to_string(t) +
                                                 " has index " + std::to_string(f.index));
        }
        if (f.luma.size() != std::size_t{f.width} * f.height) {
            fail(ErrorCode::ShapeMismatch, "frame " + std::to_string(t) + " luma length mismatch");
        }
    }
}

std::span<const float> EmbeddingSet::item(std::size_t i) const {
    if (i >= count) {
        fail(ErrorCode::MissingInput,
             "embedding row " + std::to_string(i) + " out of range (count " + std::to_string(count) + ")");
    }
    const std::size_t n = floats_per_item();
    return std::span<const float>(data).subspan(i * n, n);
}

void validate(const EmbeddingSet& set) {
    if (set.kind != EmbeddingKind::FrameLevel && set.kind != EmbeddingKind::PatchGrid) {
        fail(ErrorCode::InvalidArgument, "unknown embedding kind " + std::to_string(static_cast<int>(set.kind)));
    }
    if (set.count == 0) {
        fail(ErrorCode::EmptyInput, "embedding set has zero items");
    }
    if (set.dim == 0 || set.rows == 0 || set.cols == 0) {
        fail(ErrorCode::InvalidArgument, "embedding grid and dim must be nonzero");
    }
    if (set.kind == EmbeddingKind::FrameLevel && (set.rows != 1 || set.cols != 1)) {
        fail(ErrorCode::ShapeMismatch, "frame-level embeddings must use a 1x1 grid");
    }
    if (set.data.size() != std::size_t{set.count} * set.floats_per_item()) {
        fail(ErrorCode::ShapeMismatch, "embedding payload length does not match header");
    }
}

std::vector<std::uint8_t> encode_frame_bank(const FrameSequence& seq) {
    validate(seq);
    binary::Writer w;
    w.magic(kFrameMagic);
    w.u16(kVersion);
    w.u16(static_cast<std::uint16_t>(seq.width()));
    w.u16(static_cast<std::uint16_t>(seq.height()));
    w.u32(static_cast<std::uint32_t>(seq.size()));
    w.u32(seq.fps.num);
    w.u32(seq.fps.den);
    for (const auto& f : seq.frames) {
        w.bytes(f.luma);
    }
    return w.take();
}

FrameSequence decode_frame_bank(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes, kModule);
    r.expect_magic(kFrameMagic);
    if (auto v = r.u16(); v != kVersion) {
        fail(ErrorCode::BadVersion, "unsupported frame bank version " + std::to_string(v));
    }
    const std::uint32_t width = r.u16();
    const std::uint32_t height = r.u16();
    const std::uint32_t count = r.u32();
    FrameSequence seq;
    seq.fps.num = r.u32();
    seq.fps.den = r.u32();
    if (count == 0) {
        fail(ErrorCode::EmptyInput, "frame bank declares zero frames");
    }
    const std::size_t plane = std::size_t{width} * height;
    if (plane == 0) {
        fail(ErrorCode::InvalidArgument, "frame bank declares a zero-area frame");
    }
    if (r.remaining() / plane < count) {
        fail(ErrorCode::Truncated, "truncated payload: " + std::to_string(count) + " frames declared, " +
                                       std::to_string(r.remaining() / plane) + " present");
    }
    seq.frames.reserve(count);
    for (std::uint32_t t = 0; t < count; ++t) {
        auto src = r.bytes(plane);
        seq.frames.push_back(Frame{width, height, t, std::vector<std::uint8_t>(src.begin(), src.end())});
    }
    r.expect_end();
    validate(seq);
    return seq;
}

FrameSequence read_frame_bank(const std::filesystem::path& path) {
    return decode_frame_bank(binary::read_file(path, kModule));
}

void write_frame_bank(const FrameSequence& seq, const std::filesystem::path& path) {
    binary::write_file(path, encode_frame_bank(seq), kModule);
}

std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& set) {
    validate(set);
    binary::Writer w;
    w.magic(kEmbeddingMagic);
    w.u16(kVersion);
    w.u8(static_cast<std::uint8_t>(set.kind));
    w.u32(set.count);
    w.u16(set.rows);
    w.u16(set.cols);
    w.u32(set.dim);
    w.f32s(set.data);
    return w.take();
}

EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes, kModule);
    r.expect_magic(kEmbeddingMagic);
    if (auto v = r.u16(); v != kVersion) {
        fail(ErrorCode::BadVersion, "unsupported embedding version " + std::to_string(v));
    }
    EmbeddingSet set;
    const auto kind = r.u8();
    if (kind > 1) {
        fail(ErrorCode::InvalidArgument, "unknown embedding kind " + std::to_string(kind));
    }
    set.kind = static_cast<EmbeddingKind>(kind);
    set.count = r.u32();
    set.rows = r.u16();
    set.cols = r.u16();
    set.dim = r.u32();
    // 64-bit product cannot overflow: 2^32 * 2^16 * 2^16 * 2^32 would, so check in steps.
    const std::uint64_t per_item = std::uint64_t{set.rows} * set.cols * set.dim;
    if (set.count != 0 && per_item > (std::numeric_limits<std::uint64_t>::max() / 4) / set.count) {
        fail(ErrorCode::Truncated, "embedding header declares an impossible payload size");
    }
    const std::uint64_t floats = per_item * set.count;
    r.require(floats * 4, "embedding payload");
    set.data.resize(floats);
    r.f32s(set.data);
    r.expect_end();
    validate(set);
    return set;
}

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
    return decode_embeddings(binary::read_file(path, kModule));
}

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
    binary::write_file(path, encode_embeddings(set), kModule);
}

std::vector<float> read_query(const std::filesystem::path& path) {
    auto set = read_embeddings(path);
    if (set.kind != EmbeddingKind::FrameLevel || set.count != 1) {
        fail(ErrorCode::ShapeMismatch, "query file must be a frame-level set with count=1");
    }
    return set.data;
}

EmbeddingSet make_query(std::span<const float> vector) {
    EmbeddingSet set;
    set.kind = EmbeddingKind::FrameLevel;
    set.count = 1;
    set.dim = static_cast<std::uint32_t>(vector.size());
    set.data.assign(vector.begin(), vector.end());
    validate(set);
    return set;
}

namespace {

constexpr std::uint32_t kMaxSynthLevel = 255 - (kSynthTextureLevels - 1);

std::uint8_t texture(std::uint32_t u, std::uint32_t y) {
    return static_cast<std::uint8_t>((u + y) % kSynthTextureLevels);
}

std::vector<std::uint32_t> segment_levels(const SynthSpec& spec) {
    std::vector<std::uint32_t> levels;
    levels.reserve(spec.segments.size());
    for (std::size_t s = 0; s < spec.segments.size(); ++s) {
        const auto& seg = spec.segments[s];
        if (seg.cut_magnitude > 255 || seg.base_intensity > 255) {
            fail(ErrorCode::InvalidArgument, "segment " + std::to_string(s) + ": intensities must be in [0,255]");
        }
        if (s == 0) {
            if (seg.base_intensity > kMaxSynthLevel) {
                fail(ErrorCode::InvalidArgument, "first segment base intensity must be <= " +
                                                     std::to_string(kMaxSynthLevel) + " to leave texture headroom");
            }
            levels.push_back(seg.base_intensity);
            continue;
        }
        const auto prev = static_cast<std::int64_t>(levels.back());
        const std::int64_t up = prev + seg.cut_magnitude;
        const std::int64_t down = prev - seg.cut_magnitude;
        const bool up_ok = up <= kMaxSynthLevel;
        const bool down_ok = down >= 0;
        const bool prefer_up = static_cast<std::int64_t>(seg.base_intensity) >= prev;
        std::int64_t level = 0;
        if (prefer_up ? up_ok : !down_ok) {
            level = up;
        } else {
            level = down;
        }
        if (level < 0 || level > kMaxSynthLevel) {
            fail(ErrorCode::InvalidArgument, "segment " + std::to_string(s) + ": cut magnitude " +
                                                 std::to_string(seg.cut_magnitude) +
                                                 " cannot be realized without clipping");
        }
        levels.push_back(static_cast<std::uint32_t>(level));
    }
    return levels;
}

}  // namespace

FrameSequence synth_video(const SynthSpec& spec) {
    if (spec.frame_count == 0) {
        fail(ErrorCode::EmptyInput, "synth spec has zero frames");
    }
    if (spec.width < kMinFrameSide || spec.height < kMinFrameSide || spec.width > 0xFFFF || spec.height > 0xFFFF) {
        fail(ErrorCode::InvalidArgument, "synth frame sides must be in [8, 65535]");
    }
    std::uint64_t total = 0;
    for (const auto& seg : spec.segments) {
        total += seg.length;
    }
    if (total != spec.frame_count) {
        fail(ErrorCode::InvalidArgument, "segment lengths sum to " + std::to_string(total) + " but T is " +
                                             std::to_string(spec.frame_count));
    }
    const auto levels = segment_levels(spec);

    FrameSequence seq;
    seq.fps = spec.fps;
    seq.frames.reserve(spec.frame_count);
    SplitMix64 rng(spec.seed);
    const std::uint32_t w = spec.width;
    const std::uint32_t h = spec.height;

    for (std::size_t s = 0; s < spec.segments.size(); ++s) {
        const auto& seg = spec.segments[s];
        const auto level = static_cast<std::uint8_t>(levels[s]);
        for (std::uint32_t local = 0; local < seg.length; ++local) {
            Frame f{w, h, static_cast<std::uint32_t>(seq.frames.size()), std::vector<std::uint8_t>(std::size_t{w} * h)};
            const std::uint32_t shift = seg.kind == SegmentKind::LinearMotion ? local % w : 0;
            for (std::uint32_t y = 0; y < h; ++y) {
                for (std::uint32_t x = 0; x < w; ++x) {
                    std::uint8_t tex = 0;
                    if (seg.kind == SegmentKind::Noise) {
                        tex = static_cast<std::uint8_t>(rng.below(kSynthTextureLevels));
                    } else {
                        tex = texture((x + w - shift) % w, y);
                    }
                    f.luma[std::size_t{y} * w + x] = static_cast<std::uint8_t>(level + tex);
                }
            }
            seq.frames.push_back(std::move(f));
        }
    }
    validate(seq);
    return seq;
}

SynthEmbeddings synth_embeddings(const FrameSequence& seq, const EmbeddingSynthSpec& spec) {
    validate(seq);
    if (spec.rows == 0 || spec.cols == 0 || spec.dim == 0) {
        fail(ErrorCode::InvalidArgument, "embedding grid and dim must be nonzero");
    }
    if (spec.rows > seq.height() || spec.cols > seq.width()) {
        fail(ErrorCode::InvalidArgument, "patch grid finer than the frame");
    }

    constexpr std::size_t kFeatures = 5;
    SplitMix64 rng(spec.seed);
    std::vector<std::array<double, kFeatures>> projection(spec.dim);
    for (auto& column : projection) {
        for (double& v : column) {
            v = static_cast<double>(rng.next() >> 11) / 9007199254740992.0 * 2.0 - 1.0;
        }
    }

    SynthEmbeddings out;
    out.patches.kind = EmbeddingKind::PatchGrid;
    out.patches.count = static_cast<std::uint32_t>(seq.size());
    out.patches.rows = spec.rows;
    out.patches.cols = spec.cols;
    out.patches.dim = spec.dim;
    out.patches.data.resize(std::size_t{out.patches.count} * out.patches.floats_per_item());

    out.frame_level.kind = EmbeddingKind::FrameLevel;
    out.frame_level.count = out.patches.count;
    out.frame_level.dim = spec.dim;
    out.frame_level.data.resize(std::size_t{out.frame_level.count} * spec.dim);

    const std::uint32_t w = seq.width();
    const std::uint32_t h = seq.height();
    for (std::size_t t = 0; t < seq.size(); ++t) {
        const Frame& f = seq.frames[t];
        std::vector<double> frame_sum(spec.dim, 0.0);
        for (std::uint32_t i = 0; i < spec.rows; ++i) {
            const std::uint32_t y0 = i * h / spec.rows;
            const std::uint32_t y1 = (i + 1) * h / spec.rows;
            for (std::uint32_t j = 0; j < spec.cols; ++j) {
                const std::uint32_t x0 = j * w / spec.cols;
                const std::uint32_t x1 = (j + 1) * w / spec.cols;
                double sum = 0.0;
                double sq = 0.0;
                for (std::uint32_t y = y0; y < y1; ++y) {
                    for (std::uint32_t x = x0; x < x1; ++x) {
                        const double v = f.at(x, y) / 255.0;
                        sum += v;
                        sq += v * v;
                    }
                }
                const double n = static_cast<double>((y1 - y0) * (x1 - x0));
                const double mean = sum / n;
                const double stddev = std::sqrt(std::max(0.0, sq / n - mean * mean));
                const std::array<double, kFeatures> features{mean, stddev, static_cast<double>(i) / spec.rows,
                                                             static_cast<double>(j) / spec.cols, 1.0};
                float* token = out.patches.data.data() + (t * spec.rows * spec.cols + std::size_t{i} * spec.cols + j) *
                                                             spec.dim;
                for (std::uint32_t ch = 0; ch < spec.dim; ++ch) {
                    double v = 0.0;
                    for (std::size_t k = 0; k < kFeatures; ++k) {
                        v += features[k] * projection[ch][k];
                    }
                    token[ch] = static_cast<float>(v);
                    frame_sum[ch] += v;
                }
            }
        }
        const double tokens = static_cast<double>(spec.rows) * spec.cols;
        for (std::uint32_t ch = 0; ch < spec.dim; ++ch) {
            out.frame_level.data[t * spec.dim + ch] = static_cast<float>(frame_sum[ch] / tokens);
        }
    }
    return out;
}

}  // namespace keytok
