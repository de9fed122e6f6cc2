// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/condense.hpp"

#include <algorithm>

#include "keytok/error.hpp"
#include "keytok/parallel.hpp"

namespace keytok {

namespace {

const std::string kModule = "condense";

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
    throw Error(code, kModule, message);
}

CondensationEntry make_entry(std::uint32_t frame, std::uint32_t ratio, const CondensationConfig& cfg) {
    CondensationEntry e;
    e.frame = frame;
    e.ratio = ratio;
    e.rows_out = cfg.grid_rows / ratio;
    e.cols_out = cfg.grid_cols / ratio;
    e.tokens = e.rows_out * e.cols_out;
    e.focused = ratio == cfg.d1;
    return e;
}

}  // namespace

void validate(const CondensationConfig& cfg) {
    if (cfg.d1 < 1 || cfg.d2 < 1) {
        fail(ErrorCode::InvalidArgument, "condensation ratios must be >= 1");
    }
    if (cfg.d1 > cfg.d2) {
        fail(ErrorCode::InvalidArgument, "d1 must not exceed d2");
    }
    if (cfg.grid_rows == 0 || cfg.grid_cols == 0) {
        fail(ErrorCode::InvalidArgument, "patch grid must be nonempty");
    }
    for (std::uint32_t d : {cfg.d1, cfg.d2}) {
        if (cfg.grid_rows % d != 0 || cfg.grid_cols % d != 0) {
            fail(ErrorCode::InvalidArgument, "ratio " + std::to_string(d) + " does not divide the " +
                                                 std::to_string(cfg.grid_rows) + "x" +
                                                 std::to_string(cfg.grid_cols) + " grid");
        }
    }
}

std::size_t CondensationPlan::focus_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const CondensationEntry& e) { return e.focused; }));
}

std::uint64_t CondensationPlan::patch_tokens() const {
    std::uint64_t total = 0;
    for (const auto& e : entries) {
        total += e.tokens;
    }
    return total;
}

TokenGrid pool_grid(const TokenGrid& grid, std::uint32_t ratio) {
    if (ratio == 0 || grid.rows % ratio != 0 || grid.cols % ratio != 0) {
        fail(ErrorCode::InvalidArgument, "ratio " + std::to_string(ratio) + " does not divide " +
                                             std::to_string(grid.rows) + "x" + std::to_string(grid.cols));
    }
    if (grid.data.size() != std::size_t{grid.rows} * grid.cols * grid.dim) {
        fail(ErrorCode::ShapeMismatch, "grid payload does not match its shape");
    }
    if (ratio == 1) {
        return grid;
    }

    TokenGrid out{grid.rows / ratio, grid.cols / ratio, grid.dim, {}};
    out.data.resize(std::size_t{out.rows} * out.cols * out.dim);
    const double count = static_cast<double>(ratio) * ratio;
    std::vector<double> acc(grid.dim);
    for (std::uint32_t r = 0; r < out.rows; ++r) {
        for (std::uint32_t c = 0; c < out.cols; ++c) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::uint32_t br = 0; br < ratio; ++br) {
                for (std::uint32_t bc = 0; bc < ratio; ++bc) {
                    const auto src = grid.token(r * ratio + br, c * ratio + bc);
                    for (std::uint32_t ch = 0; ch < grid.dim; ++ch) {
                        acc[ch] += src[ch];
                    }
                }
            }
            float* dst = out.data.data() + (std::size_t{r} * out.cols + c) * out.dim;
            for (std::uint32_t ch = 0; ch < grid.dim; ++ch) {
                dst[ch] = static_cast<float>(acc[ch] / count);
            }
        }
    }
    return out;
}

CondensationPlan build_condensation_plan(const KeyframePlan& plan, const RankedFrames* ranked,
                                         const CondensationConfig& cfg) {
    validate(cfg);
    validate(plan);
    if (cfg.ranking_inert()) {
        return build_uniform_condensation(plan, cfg.d1, cfg);
    }
    if (ranked == nullptr) {
        fail(ErrorCode::MissingInput, "condensation with d1 != d2 requires a ranking");
    }
    if (ranked->order.size() != plan.entries.size()) {
        fail(ErrorCode::ShapeMismatch, "ranking covers " + std::to_string(ranked->order.size()) +
                                           " frames, plan has " + std::to_string(plan.entries.size()));
    }
    std::vector<std::uint32_t> ranked_frames;
    ranked_frames.reserve(ranked->order.size());
    for (const auto& s : ranked->order) {
        ranked_frames.push_back(s.frame);
    }
    std::sort(ranked_frames.begin(), ranked_frames.end());
    if (ranked_frames != plan.frames()) {
        fail(ErrorCode::ShapeMismatch, "ranking and keyframe plan cover different frames");
    }

    CondensationPlan out;
    out.config = cfg;
    for (const auto& e : plan.entries) {
        out.entries.push_back(make_entry(e.frame, ranked->is_focused(e.frame) ? cfg.d1 : cfg.d2, cfg));
    }
    return out;
}

CondensationPlan build_uniform_condensation(const KeyframePlan& plan, std::uint32_t ratio,
                                            const CondensationConfig& cfg) {
    validate(cfg);
    validate(plan);
    if (ratio != cfg.d1 && ratio != cfg.d2) {
        fail(ErrorCode::InvalidArgument, "ratio must be d1 or d2");
    }
    CondensationPlan out;
    out.config = cfg;
    for (const auto& e : plan.entries) {
        out.entries.push_back(make_entry(e.frame, ratio, cfg));
    }
    return out;
}

TokenGrid grid_of(const EmbeddingSet& patches, std::uint32_t frame) {
    const auto values = patches.item(frame);
    return TokenGrid{patches.rows, patches.cols, patches.dim, std::vector<float>(values.begin(), values.end())};
}

std::vector<CondensedFrame> apply_condensation(const EmbeddingSet& patches, const CondensationPlan& plan) {
    validate(plan.config);
    validate(patches);
    if (patches.kind != EmbeddingKind::PatchGrid) {
        fail(ErrorCode::ShapeMismatch, "condensation needs patch-grid embeddings");
    }
    if (patches.rows != plan.config.grid_rows || patches.cols != plan.config.grid_cols) {
        fail(ErrorCode::ShapeMismatch, "patch grid is " + std::to_string(patches.rows) + "x" +
                                           std::to_string(patches.cols) + ", configured " +
                                           std::to_string(plan.config.grid_rows) + "x" +
                                           std::to_string(plan.config.grid_cols));
    }
    for (const auto& e : plan.entries) {
        if (e.frame >= patches.count) {
            fail(ErrorCode::MissingInput, "no patch embeddings for frame " + std::to_string(e.frame));
        }
    }

    std::vector<CondensedFrame> out(plan.entries.size());
    parallel_for(plan.entries.size(), [&](std::size_t i) {
        const auto& e = plan.entries[i];
        out[i] = CondensedFrame{e.frame, pool_grid(grid_of(patches, e.frame), e.ratio)};
    });
    return out;
}

}  // namespace keytok
