// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/keyframing.hpp"

#include <algorithm>
#include <cmath>

#include "json_codec.hpp"
#include "keytok/error.hpp"

namespace keytok {

namespace {

const std::string kModule = "keyframing";

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
    throw Error(code, kModule, message);
}

}  // namespace

std::uint64_t to_ppm(double ratio) {
    return static_cast<std::uint64_t>(std::llround(ratio * static_cast<double>(kPpm)));
}

void validate(const KeyframeConfig& cfg) {
    if (!(cfg.tau > 0.0 && cfg.tau < 2.0)) {
        fail(ErrorCode::InvalidArgument, "tau must be in (0, 2)");
    }
    if (cfg.gop_max < 1 || cfg.min_gap < 1) {
        fail(ErrorCode::InvalidArgument, "gop_max and min_gap must be >= 1");
    }
    if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "delta must be in (0, 1]");
    }
}

const char* to_string(FrameKind kind) {
    switch (kind) {
    case FrameKind::IFrame:
        return "iframe";
    case FrameKind::Compensation:
        return "compensation";
    case FrameKind::Uniform:
        return "uniform";
    }
    return "?";
}

FrameKind frame_kind_from_string(const std::string& s) {
    if (s == "iframe") {
        return FrameKind::IFrame;
    }
    if (s == "compensation") {
        return FrameKind::Compensation;
    }
    if (s == "uniform") {
        return FrameKind::Uniform;
    }
    fail(ErrorCode::InvalidArgument, "unknown frame kind \"" + s + "\"");
}

std::vector<std::uint32_t> KeyframePlan::frames() const {
    std::vector<std::uint32_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        out.push_back(e.frame);
    }
    return out;
}

std::size_t KeyframePlan::count(FrameKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [kind](const PlanEntry& e) { return e.kind == kind; }));
}

void validate(const KeyframePlan& plan) {
    if (plan.total_frames == 0) {
        fail(ErrorCode::EmptyInput, "plan covers zero frames");
    }
    if (plan.entries.empty()) {
        fail(ErrorCode::EmptyInput, "plan has no entries");
    }
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const auto& e = plan.entries[i];
        if (e.frame >= plan.total_frames) {
            fail(ErrorCode::InvalidArgument,
                 "plan entry " + std::to_string(e.frame) + " out of range T=" + std::to_string(plan.total_frames));
        }
        if (i > 0 && e.frame <= plan.entries[i - 1].frame) {
            fail(ErrorCode::InvalidArgument, "plan entries must be strictly increasing");
        }
    }
    if (plan.count(FrameKind::IFrame) > 0 &&
        (plan.entries.front().frame != 0 || plan.entries.front().kind != FrameKind::IFrame)) {
        fail(ErrorCode::InvalidArgument, "plans with I-frames must start with I-frame 0");
    }
}

KeyframePlan uniform_sample(std::uint32_t total_frames, std::uint32_t interval) {
    if (interval == 0) {
        fail(ErrorCode::InvalidArgument, "sampling interval must be >= 1");
    }
    if (total_frames == 0) {
        fail(ErrorCode::EmptyInput, "cannot sample a zero-frame video");
    }
    KeyframePlan plan;
    plan.total_frames = total_frames;
    for (std::uint64_t t = 0; t < total_frames; t += interval) {
        plan.entries.push_back({static_cast<std::uint32_t>(t), FrameKind::Uniform});
    }
    return plan;
}

KeyframePlan uniform_sample(const FrameSequence& seq, std::uint32_t interval) {
    validate(seq);
    return uniform_sample(static_cast<std::uint32_t>(seq.size()), interval);
}

std::vector<std::uint32_t> select_iframes(std::span<const double> scores, const KeyframeConfig& cfg) {
    validate(cfg);
    std::vector<std::uint32_t> selected{0};
    std::uint32_t last = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto t = static_cast<std::uint32_t>(i + 1);
        const std::uint32_t since = t - last;
        if ((scores[i] > cfg.tau && since >= cfg.min_gap) || since >= cfg.gop_max) {
            selected.push_back(t);
            last = t;
        }
    }
    return selected;
}

std::vector<std::uint32_t> detect_iframes(const FrameSequence& seq, const KeyframeConfig& cfg,
                                          const MetricConfig& metric) {
    validate(seq);
    validate(cfg);
    const auto pairs = consecutive_metrics(seq, metric);
    std::vector<double> scores(pairs.size());
    std::transform(pairs.begin(), pairs.end(), scores.begin(), [](const PairMetrics& p) { return 1.0 - p.ssim; });
    return select_iframes(scores, cfg);
}

KeyframePlan insert_compensation(std::span<const std::uint32_t> iframes, std::uint32_t total_frames, double delta) {
    if (iframes.empty()) {
        fail(ErrorCode::EmptyInput, "compensation needs at least one I-frame");
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        fail(ErrorCode::InvalidArgument, "delta must be in (0, 1]");
    }
    const std::uint64_t divisor = to_ppm(delta) * total_frames;
    if (divisor == 0) {
        fail(ErrorCode::InvalidArgument, "degenerate compensation divisor delta*T = 0");
    }
    for (std::size_t i = 0; i < iframes.size(); ++i) {
        if (iframes[i] >= total_frames || (i > 0 && iframes[i] <= iframes[i - 1])) {
            fail(ErrorCode::InvalidArgument, "I-frames must be strictly increasing and < T");
        }
    }

    KeyframePlan plan;
    plan.total_frames = total_frames;
    for (std::size_t i = 0; i < iframes.size(); ++i) {
        const std::uint32_t a = iframes[i];
        const std::uint32_t b = i + 1 < iframes.size() ? iframes[i + 1] : total_frames;
        const std::uint32_t gap = b - a;
        const std::uint64_t n = std::uint64_t{gap} * kPpm / divisor;

        plan.entries.push_back({a, FrameKind::IFrame});
        GapStat stat{gap, static_cast<std::uint32_t>(std::min<std::uint64_t>(n, UINT32_MAX)), 0};
        std::uint32_t previous = a;
        if (n >= gap) {
            // Spacing below one frame: positions cover every offset in [0, gap).
            for (std::uint32_t t = a + 1; t < b; ++t) {
                plan.entries.push_back({t, FrameKind::Compensation});
                ++stat.inserted;
            }
        } else {
            for (std::uint64_t j = 1; j <= n; ++j) {
                const auto t = static_cast<std::uint32_t>(a + j * gap / (n + 1));
                if (t == previous) {
                    continue;
                }
                plan.entries.push_back({t, FrameKind::Compensation});
                previous = t;
                ++stat.inserted;
            }
        }
        plan.gaps.push_back(stat);
    }
    return plan;
}

KeyframePlan select_keyframes(std::span<const PairMetrics> pairs, std::uint32_t total_frames,
                              const KeyframeConfig& cfg) {
    if (pairs.size() + 1 != total_frames) {
        fail(ErrorCode::ShapeMismatch, "expected T-1 consecutive metrics");
    }
    std::vector<double> scores(pairs.size());
    std::transform(pairs.begin(), pairs.end(), scores.begin(), [](const PairMetrics& p) { return 1.0 - p.ssim; });
    return insert_compensation(select_iframes(scores, cfg), total_frames, cfg.delta);
}

KeyframePlan select_keyframes(const FrameSequence& seq, const KeyframeConfig& cfg, const MetricConfig& metric) {
    const auto iframes = detect_iframes(seq, cfg, metric);
    return insert_compensation(iframes, static_cast<std::uint32_t>(seq.size()), cfg.delta);
}

namespace detail {

Json parse_json(const std::string& text, const std::string& module) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, module, std::string("malformed JSON: ") + e.what());
    }
}

Json plan_to_value(const KeyframePlan& plan) {
    Json entries = Json::array();
    for (const auto& e : plan.entries) {
        entries.push_back(Json{{"t", e.frame}, {"kind", to_string(e.kind)}});
    }
    Json gaps = Json::array();
    for (const auto& g : plan.gaps) {
        gaps.push_back(Json{{"t_k", g.length}, {"n", g.compensation}, {"inserted", g.inserted}});
    }
    return Json{{"T", plan.total_frames}, {"entries", std::move(entries)}, {"gaps", std::move(gaps)}};
}

KeyframePlan plan_from_value(const Json& value) {
    KeyframePlan plan;
    try {
        plan.total_frames = value.at("T").get<std::uint32_t>();
        for (const auto& e : value.at("entries")) {
            plan.entries.push_back({e.at("t").get<std::uint32_t>(), frame_kind_from_string(e.at("kind"))});
        }
        if (value.contains("gaps")) {
            for (const auto& g : value.at("gaps")) {
                GapStat stat{g.at("t_k").get<std::uint32_t>(), g.at("n").get<std::uint32_t>(), 0};
                stat.inserted = g.value("inserted", stat.compensation);
                plan.gaps.push_back(stat);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed keyframe plan: ") + e.what());
    }
    validate(plan);
    return plan;
}

}  // namespace detail

std::string plan_to_json(const KeyframePlan& plan) {
    return detail::plan_to_value(plan).dump(2) + "\n";
}

KeyframePlan plan_from_json(const std::string& text) {
    return detail::plan_from_value(detail::parse_json(text, kModule));
}

}  // namespace keytok
