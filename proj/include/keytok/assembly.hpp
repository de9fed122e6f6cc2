// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "keytok/condense.hpp"
#include "keytok/temporal_tokens.hpp"

namespace keytok {

enum class TokenTag : std::uint8_t {
    Patch = 0,
    IntraSeparator = 1,
    InterSeparator = 2,
};

struct Token {
    TokenTag tag = TokenTag::Patch;
    std::uint32_t frame = 0;
    std::uint32_t temporal_bin = 0;
    std::vector<float> values;

    bool operator==(const Token&) const = default;
};

struct SequenceSummary {
    std::uint32_t frames = 0;
    /// Unknown for sequences read back from disk.
    std::optional<std::uint32_t> focus_frames;
    std::uint64_t patch_tokens = 0;
    std::uint64_t intra_separators = 0;
    std::uint64_t inter_separators = 0;

    std::uint64_t total() const { return patch_tokens + intra_separators + inter_separators; }
};

struct TokenSequence {
    std::uint32_t dim = 0;
    std::vector<Token> tokens;
    SequenceSummary summary;
};

/// Per-frame cost including separators: N/d^2 + r/d + 1.
std::uint64_t frame_token_cost(const CondensationEntry& entry);
std::uint64_t sequence_token_cost(const CondensationPlan& plan);

/// Lays out every frame as rows_out x (cols_out patch tokens + 1 intra
/// separator) followed by one inter separator. Separators carry the
/// projected temporal embedding of the frame's bin.
TokenSequence assemble(std::span<const CondensedFrame> condensed, const CondensationPlan& plan,
                       const TemporalWeights& weights, std::uint32_t total_frames);

/// Counts tokens by tag and checks the per-frame layout; throws on any
/// structural violation.
SequenceSummary summarize(const TokenSequence& seq);

// .kft packed token sequence
std::vector<std::uint8_t> encode_tokens(const TokenSequence& seq);
TokenSequence decode_tokens(std::span<const std::uint8_t> bytes);
void pack(const TokenSequence& seq, const std::filesystem::path& path);
TokenSequence unpack(const std::filesystem::path& path);

}  // namespace keytok
