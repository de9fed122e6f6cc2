// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "keytok/error.hpp"
#include "keytok/pipeline.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace keytok;
using namespace keytok::testing;

namespace {

struct Fixture {
    FrameSequence frames;
    SynthEmbeddings embeddings;
};

Fixture make(const SynthSpec& spec, std::uint32_t dim = 16) {
    Fixture f;
    f.frames = synth_video(spec);
    EmbeddingSynthSpec es;
    es.dim = dim;
    es.seed = 3;
    f.embeddings = synth_embeddings(f.frames, es);
    return f;
}

PipelineInputs inputs_for(const Fixture& f, std::uint32_t query_frame) {
    PipelineInputs in;
    in.frames = f.frames;
    in.frame_embeddings = f.embeddings.frame_level;
    const auto q = f.embeddings.frame_level.item(query_frame);
    in.query = std::vector<float>(q.begin(), q.end());
    return in;
}

SynthSpec static_video(std::uint32_t total, Rational fps) {
    SynthSpec spec;
    spec.frame_count = total;
    spec.fps = fps;
    spec.segments = {{SegmentKind::Static, total, 50, 0}};
    return spec;
}

}  // namespace

TEST(Pipeline, StaticVideoClosedForm) {
    const auto f = make(static_video(300, {1, 1}));
    const auto result = run_plan(inputs_for(f, 0), PipelineConfig{});
    // I-frames every 30 frames; each 30-frame gap gets floor(30 / 15) = 2 compensation frames.
    EXPECT_EQ(result.keyframes.count(FrameKind::IFrame), 10u);
    EXPECT_EQ(result.keyframes.count(FrameKind::Compensation), 20u);
    EXPECT_EQ(result.condensation.focus_count(), 9u);
    EXPECT_EQ(result.report.ours_tokens, 9u * 73u + 21u * 21u);
    EXPECT_EQ(result.report.baseline_interval, 1u);
    EXPECT_EQ(result.report.baseline_tokens, 300u * 21u);
    EXPECT_GT(result.report.compression_ratio, 5.0);
    // Identical frames tie on relevance, so the earliest keyframes win.
    EXPECT_EQ(result.ranking->focus, (std::vector<std::uint32_t>{0, 10, 20, 30, 40, 50, 60, 70, 80}));
}

TEST(Pipeline, MostlyStaticVideoBeatsUniformBaseline) {
    const auto f = make(mostly_static_video());
    std::uint32_t repeats = 0;
    for (std::size_t t = 1; t < f.frames.size(); ++t) {
        repeats += f.frames.frames[t].luma == f.frames.frames[t - 1].luma;
    }
    EXPECT_GE(repeats * 10, f.frames.size() * 9);
    const auto result = run_plan(inputs_for(f, 700), PipelineConfig{});
    EXPECT_EQ(result.report.baseline_interval, 2u);
    EXPECT_EQ(result.report.baseline_tokens, 600u * 21u);
    EXPECT_LE(result.report.ours_tokens * 5, result.report.baseline_tokens);
}

TEST(Pipeline, EqualRatiosNeedNoQuery) {
    const auto f = make(static_video(60, {1, 1}));
    PipelineConfig cfg;
    cfg.condense.d1 = 4;
    PipelineInputs in;
    in.frames = f.frames;
    const auto result = run_plan(in, cfg);
    EXPECT_FALSE(result.ranking.has_value());
    EXPECT_TRUE(result.report.ranking_inert);
    for (const auto& e : result.condensation.entries) {
        EXPECT_EQ(e.tokens, 16u);
    }
    EXPECT_EQ(result.report.ours_tokens, 21u * result.keyframes.size());
}

TEST(Pipeline, MissingQueryIsDiagnosed) {
    const auto f = make(static_video(20, {1, 1}));
    PipelineInputs in;
    in.frames = f.frames;
    try {
        run_plan(in, PipelineConfig{});
        FAIL() << "expected MissingInput";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingInput);
        EXPECT_NE(std::string(e.what()).find("relevance requires query"), std::string::npos);
    }
    PipelineConfig all;
    all.relevance.alpha = 1.0;
    EXPECT_NO_THROW(run_plan(in, all));
}

TEST(Pipeline, TokenSequenceMatchesPlan) {
    const auto f = make(cut_video(90, {30, 60}, 128));
    const auto result = run_plan(inputs_for(f, 45), PipelineConfig{});
    const auto seq = materialize(result, f.embeddings.patches, default_weights(0, 1000, 16));
    EXPECT_EQ(seq.summary.total(), result.report.ours_tokens);
    EXPECT_EQ(seq.summary.frames, result.keyframes.size());
    EXPECT_EQ(seq.summary.focus_frames, result.condensation.focus_count());
    std::vector<std::uint32_t> ds;
    for (const auto& e : result.condensation.entries) ds.push_back(e.ratio);
    EXPECT_EQ(seq.tokens.size(), oracle::layout_tokens(ds, 16, 16));
    EXPECT_THROW(materialize(result, f.embeddings.patches, default_weights(0, 1000, 8)), Error);
}

TEST(Pipeline, ResultJsonRoundTrips) {
    const auto f = make(cut_video(120, {50}, 100));
    const auto result = run_plan(inputs_for(f, 60), PipelineConfig{});
    const auto text = result_to_json(result);
    const auto back = result_from_json(text);
    EXPECT_EQ(back.keyframes, result.keyframes);
    EXPECT_EQ(back.ranking, result.ranking);
    EXPECT_EQ(back.condensation.entries, result.condensation.entries);
    EXPECT_EQ(result_to_json(back), text);
}

TEST(Pipeline, DeterministicAcrossThreadCounts) {
    SynthSpec spec = cut_video(150, {40, 100}, 90);
    spec.segments[1].kind = SegmentKind::Noise;
    const auto f = make(spec);
    const auto run = [&](const char* threads) {
        setenv("KFF_THREADS", threads, 1);
        const auto result = run_plan(inputs_for(f, 70), PipelineConfig{});
        const auto seq = materialize(result, f.embeddings.patches, default_weights(0, 1000, 16));
        return std::make_pair(result_to_json(result), encode_tokens(seq));
    };
    const auto one = run("1");
    const auto eight = run("8");
    unsetenv("KFF_THREADS");
    EXPECT_EQ(one.first, eight.first);
    EXPECT_EQ(one.second, eight.second);
}

TEST(Config, JsonRoundTripAndValidation) {
    PipelineConfig cfg;
    cfg.keyframe.tau = 0.2;
    cfg.keyframe.gop_max = 60;
    cfg.relevance.alpha = 0.5;
    cfg.condense.d1 = 1;
    cfg.dim = 32;
    cfg.baseline_interval = 5;
    cfg.inputs.frames = "a.kfv";
    cfg.outputs.tokens = "b.kft";
    const auto text = config_to_json(cfg);
    const auto back = config_from_json(text);
    EXPECT_EQ(config_to_json(back), text);
    EXPECT_EQ(back.keyframe.gop_max, 60u);
    EXPECT_EQ(back.dim, 32u);
    EXPECT_EQ(back.inputs.frames, "a.kfv");

    EXPECT_EQ(config_from_json("{}").keyframe.gop_max, 30u);
    EXPECT_THROW(config_from_json(R"({"keyframe":{"tua":0.1}})"), Error);
    EXPECT_THROW(config_from_json(R"({"condense":{"d1":3}})"), Error);
    EXPECT_THROW(config_from_json(R"({"relevance":{"alpha":0}})"), Error);
    EXPECT_THROW(config_from_json("[1,2"), Error);
}

TEST(Report, BaselineAndCsvColumns) {
    EXPECT_EQ(default_baseline_interval({30000, 1001}), 30u);
    EXPECT_EQ(default_baseline_interval({1, 2}), 1u);
    EXPECT_EQ(baseline_token_cost(100, 30, CondensationConfig{}), 4u * 21u);

    const auto f = make(cut_video(60, {20}, 128));
    const auto result = run_plan(inputs_for(f, 30), PipelineConfig{});
    const auto csv = report_to_csv(result.report);
    std::istringstream lines(csv);
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    EXPECT_EQ(header, "frame,kind,ssim_prev,psnr_db,relevance,d,tokens");
    EXPECT_EQ(first.rfind("0,iframe,,,", 0), 0u);
    EXPECT_NE(second.find(",inf,"), std::string::npos);  // static successor of frame 0
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    EXPECT_EQ(rows + 2, result.keyframes.size());
}
