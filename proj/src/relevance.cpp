// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/relevance.hpp"

#include <algorithm>
#include <cmath>

#include "keytok/error.hpp"
#include "keytok/parallel.hpp"

namespace keytok {

namespace {

const std::string kModule = "relevance";

}  // namespace

void validate(const RelevanceConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, kModule, "alpha must be in (0, 1]");
    }
}

std::size_t focus_size(double alpha, std::size_t keyframes) {
    validate(RelevanceConfig{alpha});
    if (keyframes == 0) {
        return 0;
    }
    const std::uint64_t scaled = to_ppm(alpha) * keyframes / kPpm;
    return std::min<std::size_t>(keyframes, std::max<std::uint64_t>(1, scaled));
}

bool RankedFrames::is_focused(std::uint32_t frame) const {
    return std::binary_search(focus.begin(), focus.end(), frame);
}

double RankedFrames::score_of(std::uint32_t frame) const {
    for (const auto& s : order) {
        if (s.frame == frame) {
            return s.score;
        }
    }
    throw Error(ErrorCode::MissingInput, kModule, "frame " + std::to_string(frame) + " was not ranked");
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "vector dims differ: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i];
        const double b = v[i];
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    if (uu == 0.0 || vv == 0.0) {
        throw Error(ErrorCode::InvalidArgument, kModule, "cosine similarity of a zero-norm vector");
    }
    return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

RankedFrames rank_frames(const KeyframePlan& plan, const EmbeddingSet& frame_embeddings, std::span<const float> query,
                         const RelevanceConfig& cfg) {
    validate(cfg);
    validate(plan);
    validate(frame_embeddings);
    if (frame_embeddings.kind != EmbeddingKind::FrameLevel) {
        throw Error(ErrorCode::ShapeMismatch, kModule, "ranking needs frame-level embeddings");
    }
    if (query.size() != frame_embeddings.dim) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "query dim " + std::to_string(query.size()) + " != embedding dim " +
                        std::to_string(frame_embeddings.dim));
    }
    for (const auto& e : plan.entries) {
        if (e.frame >= frame_embeddings.count) {
            throw Error(ErrorCode::MissingInput, kModule,
                        "no embedding row for frame " + std::to_string(e.frame) + " (count " +
                            std::to_string(frame_embeddings.count) + ")");
        }
    }

    RankedFrames ranked;
    ranked.order.resize(plan.entries.size());
    parallel_for(plan.entries.size(), [&](std::size_t i) {
        const std::uint32_t frame = plan.entries[i].frame;
        ranked.order[i] = {frame, cosine_similarity(frame_embeddings.item(frame), query)};
    });
    std::sort(ranked.order.begin(), ranked.order.end(), [](const ScoredFrame& a, const ScoredFrame& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.frame < b.frame;
    });

    const std::size_t n_focus = focus_size(cfg.alpha, ranked.order.size());
    for (std::size_t i = 0; i < n_focus; ++i) {
        ranked.focus.push_back(ranked.order[i].frame);
    }
    std::sort(ranked.focus.begin(), ranked.focus.end());
    return ranked;
}

}  // namespace keytok
