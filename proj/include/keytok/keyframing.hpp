// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "keytok/media_io.hpp"
#include "keytok/quality_metrics.hpp"

namespace keytok {

/// Ratios are quantized to parts per million so that floor() arithmetic is
/// carried out on integers.
inline constexpr std::uint64_t kPpm = 1'000'000;

/// Converts a ratio in (0, 1] to parts per million (round to nearest).
std::uint64_t to_ppm(double ratio);

struct KeyframeConfig {
    double tau = 0.15;
    std::uint32_t gop_max = 30;
    std::uint32_t min_gap = 1;
    double delta = 0.05;
};

void validate(const KeyframeConfig& cfg);

enum class FrameKind {
    IFrame,
    Compensation,
    Uniform,
};

const char* to_string(FrameKind kind);
FrameKind frame_kind_from_string(const std::string& s);

struct PlanEntry {
    std::uint32_t frame = 0;
    FrameKind kind = FrameKind::IFrame;

    bool operator==(const PlanEntry&) const = default;
};

/// One I-frame gap. `compensation` is the count floor(T_k / (delta*T));
/// `inserted` is what survived de-duplication against existing entries.
struct GapStat {
    std::uint32_t length = 0;
    std::uint32_t compensation = 0;
    std::uint32_t inserted = 0;

    bool operator==(const GapStat&) const = default;
};

struct KeyframePlan {
    std::uint32_t total_frames = 0;
    std::vector<PlanEntry> entries;
    std::vector<GapStat> gaps;

    std::size_t size() const noexcept { return entries.size(); }
    std::vector<std::uint32_t> frames() const;
    std::size_t count(FrameKind kind) const;

    bool operator==(const KeyframePlan&) const = default;
};

/// Throws unless entries are strictly increasing, in range, and start at 0
/// whenever the plan holds I-frames.
void validate(const KeyframePlan& plan);

/// Every M-th frame starting at 0.
KeyframePlan uniform_sample(std::uint32_t total_frames, std::uint32_t interval);
KeyframePlan uniform_sample(const FrameSequence& seq, std::uint32_t interval);

/// Sequential selection over precomputed dissimilarities; scores[i] is the
/// dissimilarity between frames i and i+1. Frame 0 is always selected.
std::vector<std::uint32_t> select_iframes(std::span<const double> scores, const KeyframeConfig& cfg);

std::vector<std::uint32_t> detect_iframes(const FrameSequence& seq, const KeyframeConfig& cfg,
                                          const MetricConfig& metric = {});

/// Inserts floor(T_k / (delta*T)) evenly spaced compensation frames into
/// every gap between adjacent I-frames, including the tail gap up to T.
/// Positions a + floor(j*T_k/(n+1)) that land on an existing entry are
/// dropped.
KeyframePlan insert_compensation(std::span<const std::uint32_t> iframes, std::uint32_t total_frames, double delta);

KeyframePlan select_keyframes(const FrameSequence& seq, const KeyframeConfig& cfg, const MetricConfig& metric = {});

/// Same as select_keyframes but reuses already computed consecutive metrics.
KeyframePlan select_keyframes(std::span<const PairMetrics> pairs, std::uint32_t total_frames,
                              const KeyframeConfig& cfg);

/// {"T":..,"entries":[{"t":..,"kind":..}],"gaps":[{"t_k":..,"n":..,"inserted":..}]}
std::string plan_to_json(const KeyframePlan& plan);
KeyframePlan plan_from_json(const std::string& text);

}  // namespace keytok
