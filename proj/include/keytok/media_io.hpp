// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace keytok {

inline constexpr std::uint32_t kMinFrameSide = 8;

/// One decoded 8-bit luma plane, row-major.
struct Frame {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t index = 0;
    std::vector<std::uint8_t> luma;

    std::uint8_t at(std::uint32_t x, std::uint32_t y) const { return luma[std::size_t{y} * width + x]; }

    bool operator==(const Frame&) const = default;
};

struct Rational {
    std::uint32_t num = 30;
    std::uint32_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

struct FrameSequence {
    std::vector<Frame> frames;
    Rational fps;

    std::size_t size() const noexcept { return frames.size(); }
    std::uint32_t width() const { return frames.front().width; }
    std::uint32_t height() const { return frames.front().height; }

    bool operator==(const FrameSequence&) const = default;
};

/// Throws ErrorCode::InvalidArgument / ShapeMismatch / EmptyInput when the
/// sequence breaks a frame-bank invariant (contiguous indices, shared size,
/// sides >= 8, luma length, nonzero fps).
void validate(const FrameSequence& seq);

enum class EmbeddingKind : std::uint8_t {
    FrameLevel = 0,
    PatchGrid = 1,
};

/// count x rows x cols x dim f32 tensor. Frame-level sets use a 1x1 grid.
struct EmbeddingSet {
    EmbeddingKind kind = EmbeddingKind::FrameLevel;
    std::uint32_t count = 0;
    std::uint16_t rows = 1;
    std::uint16_t cols = 1;
    std::uint32_t dim = 0;
    std::vector<float> data;

    std::size_t tokens_per_item() const noexcept { return std::size_t{rows} * cols; }
    std::size_t floats_per_item() const noexcept { return tokens_per_item() * dim; }

    /// All rows*cols*dim values of item i (frame i, or query 0).
    std::span<const float> item(std::size_t i) const;

    bool operator==(const EmbeddingSet&) const = default;
};

void validate(const EmbeddingSet& set);

// .kfv frame bank
std::vector<std::uint8_t> encode_frame_bank(const FrameSequence& seq);
FrameSequence decode_frame_bank(std::span<const std::uint8_t> bytes);
FrameSequence read_frame_bank(const std::filesystem::path& path);
void write_frame_bank(const FrameSequence& seq, const std::filesystem::path& path);

// .kfe embedding set
std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& set);
EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes);
EmbeddingSet read_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);

/// Reads a single-row frame-level .kfe and returns its vector.
std::vector<float> read_query(const std::filesystem::path& path);

enum class SegmentKind {
    Static,
    LinearMotion,
    Noise,
};

/// Segment s > 0 starts cut_magnitude levels away from where segment s-1
/// ended, stepping toward base_intensity (upward on ties). The first
/// segment sits at base_intensity.
struct SynthSegment {
    SegmentKind kind = SegmentKind::Static;
    std::uint32_t length = 0;
    std::uint32_t base_intensity = 0;
    std::uint32_t cut_magnitude = 0;
};

struct SynthSpec {
    std::uint32_t frame_count = 0;
    std::uint32_t width = 64;
    std::uint32_t height = 64;
    Rational fps;
    std::vector<SynthSegment> segments;
    std::uint64_t seed = 0;
};

/// Texture amplitude added on top of the segment level; levels must stay in
/// [0, 255 - kSynthTextureLevels + 1] so no sample ever clips.
inline constexpr std::uint32_t kSynthTextureLevels = 32;

/// Deterministic synthetic video. Static segments repeat one frame; linear
/// motion shifts the texture 1 px/frame to the right (wrapping); noise draws
/// fresh texture per frame from the seeded generator.
FrameSequence synth_video(const SynthSpec& spec);

struct EmbeddingSynthSpec {
    std::uint16_t rows = 16;
    std::uint16_t cols = 16;
    std::uint32_t dim = 32;
    std::uint64_t seed = 0;
};

struct SynthEmbeddings {
    EmbeddingSet patches;
    EmbeddingSet frame_level;
};

/// Stand-in for an external visual encoder: every patch token is a seeded
/// random linear map of its luma block statistics; the frame-level vector is
/// the mean patch token. Content-identical frames get identical embeddings.
SynthEmbeddings synth_embeddings(const FrameSequence& seq, const EmbeddingSynthSpec& spec);

/// Wraps one frame-level vector as a count=1 query set.
EmbeddingSet make_query(std::span<const float> vector);

}  // namespace keytok
