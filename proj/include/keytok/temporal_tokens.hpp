// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace keytok {

inline constexpr std::uint32_t kDefaultTemporalBins = 1000;

/// bins x dim lookup table of temporal embeddings.
struct TemporalTable {
    std::uint32_t bins = 0;
    std::uint32_t dim = 0;
    std::vector<float> values;

    std::span<const float> row(std::uint32_t bin) const;

    bool operator==(const TemporalTable&) const = default;
};

enum class ProjectorRole : std::uint8_t {
    Intra = 0,
    Inter = 1,
};

/// Single affine layer W*v + b.
struct Projector {
    ProjectorRole role = ProjectorRole::Intra;
    std::uint32_t dim = 0;
    std::vector<float> weights;  // dim x dim, row-major
    std::vector<float> bias;

    static Projector identity(ProjectorRole role, std::uint32_t dim);

    bool operator==(const Projector&) const = default;
};

/// floor(bins * k / T) in integer arithmetic.
std::uint32_t temporal_bin(std::uint32_t frame, std::uint32_t total_frames, std::uint32_t bins);

/// SplitMix64 stream, row-major: value = (top24(x) / 2^24) * 0.04 - 0.02.
TemporalTable init_table(std::uint64_t seed, std::uint32_t bins, std::uint32_t dim);

std::vector<float> project(const Projector& p, std::span<const float> v);

struct TemporalWeights {
    TemporalTable table;
    Projector intra;
    Projector inter;

    bool operator==(const TemporalWeights&) const = default;
};

/// Seeded table with identity projectors.
TemporalWeights default_weights(std::uint64_t seed, std::uint32_t bins, std::uint32_t dim);

// .kfw weight container
std::vector<std::uint8_t> encode_weights(const TemporalWeights& weights);
TemporalWeights decode_weights(std::span<const std::uint8_t> bytes);
void write_weights(const TemporalWeights& weights, const std::filesystem::path& path);

/// Reads a .kfw file and checks it against the configured bins and dim.
/// A path that does not exist falls back to default_weights(seed, bins, dim).
TemporalWeights load_weights(const std::filesystem::path& path, std::uint32_t bins, std::uint32_t dim,
                             std::uint64_t seed);

}  // namespace keytok
