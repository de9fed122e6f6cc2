// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "keytok/keyframing.hpp"
#include "keytok/media_io.hpp"

namespace keytok {

struct RelevanceConfig {
    double alpha = 0.3;
};

void validate(const RelevanceConfig& cfg);

/// max(1, floor(alpha * K)), with alpha quantized to ppm.
std::size_t focus_size(double alpha, std::size_t keyframes);

struct ScoredFrame {
    std::uint32_t frame = 0;
    double score = 0.0;

    bool operator==(const ScoredFrame&) const = default;
};

struct RankedFrames {
    /// Descending score; ties broken by ascending frame index.
    std::vector<ScoredFrame> order;
    /// Frame indices of the focus set, ascending.
    std::vector<std::uint32_t> focus;

    bool is_focused(std::uint32_t frame) const;
    /// Score of a ranked frame; throws if the frame was not ranked.
    double score_of(std::uint32_t frame) const;

    bool operator==(const RankedFrames&) const = default;
};

/// u.v / (|u||v|), clamped to [-1, 1]. Accumulates in double.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

/// Scores every plan entry (I-frames and compensation frames alike) against
/// the query and marks the top max(1, floor(alpha*K)) as focus frames.
RankedFrames rank_frames(const KeyframePlan& plan, const EmbeddingSet& frame_embeddings, std::span<const float> query,
                         const RelevanceConfig& cfg = {});

}  // namespace keytok
