// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "keytok/assembly.hpp"
#include "keytok/condense.hpp"
#include "keytok/keyframing.hpp"
#include "keytok/media_io.hpp"
#include "keytok/quality_metrics.hpp"
#include "keytok/relevance.hpp"
#include "keytok/temporal_tokens.hpp"

namespace keytok {

struct PipelineConfig {
    MetricConfig metric;
    KeyframeConfig keyframe;
    RelevanceConfig relevance;
    CondensationConfig condense;
    std::uint32_t temporal_bins = kDefaultTemporalBins;
    /// Embedding width; taken from the patch embeddings when unset.
    std::optional<std::uint32_t> dim;
    std::uint64_t seed = 0;
    /// Uniform baseline interval M; round(fps) when unset.
    std::optional<std::uint32_t> baseline_interval;

    struct Inputs {
        std::filesystem::path frames;
        std::filesystem::path patches;
        std::filesystem::path frame_embeddings;
        std::filesystem::path query;
        std::filesystem::path weights;
    } inputs;

    struct Outputs {
        std::filesystem::path plan;
        std::filesystem::path tokens;
        std::filesystem::path csv;
    } outputs;
};

void validate(const PipelineConfig& cfg);

/// Parses the JSON config; every key is optional and falls back to the
/// defaults above. Unknown keys are rejected.
PipelineConfig config_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

struct PipelineInputs {
    FrameSequence frames;
    std::optional<EmbeddingSet> frame_embeddings;
    std::optional<std::vector<float>> query;
};

/// Reads the frame bank and, when configured, frame-level embeddings and the query.
PipelineInputs load_inputs(const PipelineConfig& cfg);

struct FrameReport {
    std::uint32_t frame = 0;
    FrameKind kind = FrameKind::IFrame;
    std::optional<double> ssim_prev;
    std::optional<Psnr> psnr_prev;
    std::optional<double> relevance;
    std::uint32_t ratio = 1;
    std::uint32_t tokens = 0;
};

struct GapBucket {
    std::uint32_t length = 0;
    std::uint32_t count = 0;
};

struct Report {
    std::uint32_t total_frames = 0;
    std::size_t iframes = 0;
    std::size_t compensation = 0;
    std::size_t uniform = 0;
    std::vector<GapBucket> gap_histogram;

    std::uint64_t ours_tokens = 0;
    std::uint32_t baseline_interval = 1;
    std::uint64_t baseline_frames = 0;
    std::uint64_t baseline_tokens = 0;
    double compression_ratio = 0.0;

    bool ranking_inert = false;
    std::size_t focus_frames = 0;
    std::vector<FrameReport> frames;
};

/// round(fps), at least 1.
std::uint32_t default_baseline_interval(const Rational& fps);

/// Uniform-baseline token total: ceil(T/M) frames at a fixed d2 budget of
/// N/d2^2 + r/d2 + 1 tokens each.
std::uint64_t baseline_token_cost(std::uint32_t total_frames, std::uint32_t interval, const CondensationConfig& cfg);

/// `pairs` (consecutive metrics, may be empty) and `ranked` (may be null)
/// only feed the per-frame score columns.
Report build_report(const KeyframePlan& plan, const CondensationPlan& condensation, const RankedFrames* ranked,
                    std::span<const PairMetrics> pairs, std::uint32_t baseline_interval);

struct PlanResult {
    Rational fps;
    KeyframePlan keyframes;
    std::optional<RankedFrames> ranking;
    CondensationPlan condensation;
    Report report;
};

PlanResult run_plan(const PipelineInputs& inputs, const PipelineConfig& cfg);

/// Pools the planned frames and lays out the final token sequence.
TokenSequence materialize(const PlanResult& result, const EmbeddingSet& patches, const TemporalWeights& weights);

std::string result_to_json(const PlanResult& result);
PlanResult result_from_json(const std::string& text);

/// Parses {"T","width","height","fps","seed","segments":[{"kind","length","base","cut"}]}.
SynthSpec synth_spec_from_json(const std::string& text);

/// Report for either a keyframe plan (from extract-keyframes) or a full
/// pipeline plan. Keyframe-only plans carry no ranking, so every frame is
/// budgeted at d2 (or d1 when ranking is inert or alpha = 1).
Report report_from_plan_json(const std::string& text, const PipelineConfig& cfg, const FrameSequence* frames,
                             std::optional<std::uint32_t> baseline_interval);

/// Versioned CSV: frame,kind,ssim_prev,psnr_db,relevance,d,tokens
std::string report_to_csv(const Report& report);
std::string report_to_json(const Report& report);

}  // namespace keytok
