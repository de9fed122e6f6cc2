// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "keytok/keyframing.hpp"
#include "keytok/media_io.hpp"
#include "keytok/relevance.hpp"

namespace keytok {

/// rows x cols x dim f32 tokens, row-major with channels innermost.
struct TokenGrid {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::uint32_t dim = 0;
    std::vector<float> data;

    std::span<const float> token(std::uint32_t r, std::uint32_t c) const {
        return std::span<const float>(data).subspan((std::size_t{r} * cols + c) * dim, dim);
    }

    bool operator==(const TokenGrid&) const = default;
};

struct CondensationConfig {
    std::uint32_t d1 = 2;
    std::uint32_t d2 = 4;
    std::uint32_t grid_rows = 16;
    std::uint32_t grid_cols = 16;

    std::uint32_t patch_tokens() const { return grid_rows * grid_cols; }
    /// d1 == d2: every frame gets the same ratio and ranking has no effect.
    bool ranking_inert() const { return d1 == d2; }
};

void validate(const CondensationConfig& cfg);

struct CondensationEntry {
    std::uint32_t frame = 0;
    std::uint32_t ratio = 1;
    std::uint32_t tokens = 0;
    std::uint32_t rows_out = 0;
    std::uint32_t cols_out = 0;
    bool focused = false;

    bool operator==(const CondensationEntry&) const = default;
};

struct CondensationPlan {
    CondensationConfig config;
    std::vector<CondensationEntry> entries;

    std::size_t focus_count() const;
    /// Sum of pooled patch tokens N/d^2.
    std::uint64_t patch_tokens() const;
};

struct CondensedFrame {
    std::uint32_t frame = 0;
    TokenGrid grid;
};

/// Mean of each d x d block, channel-wise; sums run row-major inside the
/// block in double and round once to f32.
TokenGrid pool_grid(const TokenGrid& grid, std::uint32_t ratio);

/// Frames in the focus set get d1, the rest d2. `ranked` may be omitted only
/// when the config makes ranking inert.
CondensationPlan build_condensation_plan(const KeyframePlan& plan, const RankedFrames* ranked,
                                         const CondensationConfig& cfg = {});

/// Every plan entry at the same ratio (uniform baselines, inert ranking).
CondensationPlan build_uniform_condensation(const KeyframePlan& plan, std::uint32_t ratio,
                                            const CondensationConfig& cfg = {});

/// Grid view of one patch-grid embedding row.
TokenGrid grid_of(const EmbeddingSet& patches, std::uint32_t frame);

std::vector<CondensedFrame> apply_condensation(const EmbeddingSet& patches, const CondensationPlan& plan);

}  // namespace keytok
