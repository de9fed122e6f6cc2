// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "keytok/binary.hpp"
#include "keytok/error.hpp"
#include "keytok/pipeline.hpp"

namespace {

using namespace keytok;

std::string read_text(const std::string& path) {
    const auto bytes = binary::read_file(path, "cli");
    return std::string(bytes.begin(), bytes.end());
}

void write_text(const std::string& path, const std::string& text) {
    binary::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), "cli");
}

/// Flags that override the JSON config. Unset flags leave the file values alone.
struct Overrides {
    std::string config;
    std::optional<double> tau, delta, alpha;
    std::optional<std::uint32_t> gop_max, min_gap, window, stride, d1, d2, bins, baseline_interval;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* cmd, bool keyframe_only = false) {
        cmd->add_option("--config", config, "JSON pipeline config");
        cmd->add_option("--tau", tau, "dissimilarity threshold");
        cmd->add_option("--gop-max", gop_max, "max frames between forced I-frames");
        cmd->add_option("--min-gap", min_gap, "min frames between detected I-frames");
        cmd->add_option("--delta", delta, "compensation coverage ratio");
        cmd->add_option("--window", window, "SSIM window");
        cmd->add_option("--stride", stride, "SSIM stride");
        if (keyframe_only) {
            return;
        }
        cmd->add_option("--alpha", alpha, "focusing ratio");
        cmd->add_option("--d1", d1, "condensation ratio for focus frames");
        cmd->add_option("--d2", d2, "condensation ratio for other frames");
        cmd->add_option("--bins", bins, "temporal bins");
        cmd->add_option("--seed", seed, "temporal table seed");
        cmd->add_option("--baseline-interval", baseline_interval, "uniform baseline interval M");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg = config.empty() ? PipelineConfig{} : load_config(config);
        if (tau) cfg.keyframe.tau = *tau;
        if (delta) cfg.keyframe.delta = *delta;
        if (gop_max) cfg.keyframe.gop_max = *gop_max;
        if (min_gap) cfg.keyframe.min_gap = *min_gap;
        if (window) cfg.metric.window = *window;
        if (stride) cfg.metric.stride = *stride;
        if (alpha) cfg.relevance.alpha = *alpha;
        if (d1) cfg.condense.d1 = *d1;
        if (d2) cfg.condense.d2 = *d2;
        if (bins) cfg.temporal_bins = *bins;
        if (seed) cfg.seed = *seed;
        if (baseline_interval) cfg.baseline_interval = *baseline_interval;
        validate(cfg);
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"keytok: keyframe selection and visual token condensation for video LLM inputs"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic frame bank from a JSON spec");
    std::string synth_spec, synth_out, patches_out, frame_emb_out, query_out;
    std::uint32_t emb_dim = 32, emb_grid = 16, query_frame = 0;
    std::uint64_t emb_seed = 0;
    synth->add_option("--spec", synth_spec, "synth spec JSON")->required();
    synth->add_option("--out", synth_out, "output .kfv")->required();
    synth->add_option("--patches-out", patches_out, "also write patch-grid embeddings (.kfe)");
    synth->add_option("--frame-embeddings-out", frame_emb_out, "also write frame-level embeddings (.kfe)");
    synth->add_option("--query-out", query_out, "also write a query (.kfe) copied from --query-frame");
    synth->add_option("--query-frame", query_frame, "frame whose embedding becomes the query");
    synth->add_option("--embedding-dim", emb_dim, "embedding width");
    synth->add_option("--embedding-grid", emb_grid, "square patch grid side");
    synth->add_option("--embedding-seed", emb_seed, "embedding projection seed");

    // extract-keyframes
    auto* extract = app.add_subcommand("extract-keyframes", "select I-frames and compensation frames");
    std::string extract_in, extract_out;
    Overrides extract_ov;
    extract->add_option("--in", extract_in, "input .kfv")->required();
    extract->add_option("--out", extract_out, "output plan JSON")->required();
    extract_ov.attach(extract, true);

    // plan
    auto* plan = app.add_subcommand("plan", "run keyframing, ranking and condensation planning");
    Overrides plan_ov;
    std::string plan_frames, plan_frame_emb, plan_query, plan_out, plan_csv;
    plan->add_option("--frames", plan_frames, "input .kfv");
    plan->add_option("--frame-embeddings", plan_frame_emb, "frame-level .kfe");
    plan->add_option("--query", plan_query, "query .kfe");
    plan->add_option("--out", plan_out, "output pipeline plan JSON");
    plan->add_option("--csv", plan_csv, "output per-frame CSV");
    plan_ov.attach(plan);

    // pack
    auto* pack_cmd = app.add_subcommand("pack", "pool planned frames and write the packed token sequence");
    Overrides pack_ov;
    std::string pack_plan, pack_patches, pack_weights, pack_out;
    pack_cmd->add_option("--plan", pack_plan, "pipeline plan JSON from `plan`")->required();
    pack_cmd->add_option("--patches", pack_patches, "patch-grid .kfe");
    pack_cmd->add_option("--weights", pack_weights, "temporal weights .kfw (seeded defaults when absent)");
    pack_cmd->add_option("--out", pack_out, "output .kft");
    pack_ov.attach(pack_cmd);

    // report
    auto* report = app.add_subcommand("report", "token budget report for a keyframe or pipeline plan");
    Overrides report_ov;
    std::string report_plan, report_frames, report_csv, report_json;
    report->add_option("--plan", report_plan, "plan JSON")->required();
    report->add_option("--frames", report_frames, "frame bank for ssim/psnr columns");
    report->add_option("--csv", report_csv, "output CSV");
    report->add_option("--json", report_json, "output report JSON");
    report_ov.attach(report);

    // init-weights
    auto* weights_cmd = app.add_subcommand("init-weights", "write seeded default temporal weights (.kfw)");
    std::string weights_out;
    std::uint32_t weights_bins = kDefaultTemporalBins, weights_dim = 0;
    std::uint64_t weights_seed = 0;
    weights_cmd->add_option("--out", weights_out, "output .kfw")->required();
    weights_cmd->add_option("--dim", weights_dim, "embedding width")->required();
    weights_cmd->add_option("--bins", weights_bins, "temporal bins");
    weights_cmd->add_option("--seed", weights_seed, "table seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (synth->parsed()) {
            const auto spec = synth_spec_from_json(read_text(synth_spec));
            const auto seq = synth_video(spec);
            write_frame_bank(seq, synth_out);
            if (!patches_out.empty() || !frame_emb_out.empty() || !query_out.empty()) {
                const auto grid = static_cast<std::uint16_t>(emb_grid);
                const auto emb = synth_embeddings(seq, EmbeddingSynthSpec{grid, grid, emb_dim, emb_seed});
                if (!patches_out.empty()) {
                    write_embeddings(emb.patches, patches_out);
                }
                if (!frame_emb_out.empty()) {
                    write_embeddings(emb.frame_level, frame_emb_out);
                }
                if (!query_out.empty()) {
                    write_embeddings(make_query(emb.frame_level.item(query_frame)), query_out);
                }
            }
            std::printf("synth: %zu frames %ux%u -> %s\n", seq.size(), seq.width(), seq.height(), synth_out.c_str());
        } else if (extract->parsed()) {
            const auto cfg = extract_ov.resolve();
            const auto seq = read_frame_bank(extract_in);
            const auto kf = select_keyframes(seq, cfg.keyframe, cfg.metric);
            write_text(extract_out, plan_to_json(kf));
            std::printf("extract-keyframes: %zu keyframes (%zu iframe, %zu compensation) of %u frames -> %s\n",
                        kf.size(), kf.count(FrameKind::IFrame), kf.count(FrameKind::Compensation), kf.total_frames,
                        extract_out.c_str());
        } else if (plan->parsed()) {
            auto cfg = plan_ov.resolve();
            if (!plan_frames.empty()) cfg.inputs.frames = plan_frames;
            if (!plan_frame_emb.empty()) cfg.inputs.frame_embeddings = plan_frame_emb;
            if (!plan_query.empty()) cfg.inputs.query = plan_query;
            if (!plan_out.empty()) cfg.outputs.plan = plan_out;
            if (!plan_csv.empty()) cfg.outputs.csv = plan_csv;
            if (cfg.outputs.plan.empty()) {
                throw Error(ErrorCode::MissingInput, "cli", "plan needs --out or outputs.plan");
            }
            const auto result = run_plan(load_inputs(cfg), cfg);
            write_text(cfg.outputs.plan.string(), result_to_json(result));
            if (!cfg.outputs.csv.empty()) {
                write_text(cfg.outputs.csv.string(), report_to_csv(result.report));
            }
            std::printf("plan: %zu keyframes, %zu focus, %llu tokens vs %llu uniform (ratio %.3f) -> %s\n",
                        result.keyframes.size(), result.report.focus_frames,
                        static_cast<unsigned long long>(result.report.ours_tokens),
                        static_cast<unsigned long long>(result.report.baseline_tokens),
                        result.report.compression_ratio, cfg.outputs.plan.string().c_str());
        } else if (pack_cmd->parsed()) {
            auto cfg = pack_ov.resolve();
            if (!pack_patches.empty()) cfg.inputs.patches = pack_patches;
            if (!pack_weights.empty()) cfg.inputs.weights = pack_weights;
            if (!pack_out.empty()) cfg.outputs.tokens = pack_out;
            if (cfg.inputs.patches.empty() || cfg.outputs.tokens.empty()) {
                throw Error(ErrorCode::MissingInput, "cli", "pack needs --patches and --out");
            }
            const auto result = result_from_json(read_text(pack_plan));
            const auto patches = read_embeddings(cfg.inputs.patches);
            if (cfg.dim && *cfg.dim != patches.dim) {
                throw Error(ErrorCode::DimensionMismatch, "cli", "patch dim differs from configured dim");
            }
            const auto weights = load_weights(cfg.inputs.weights, cfg.temporal_bins, patches.dim, cfg.seed);
            const auto seq = materialize(result, patches, weights);
            keytok::pack(seq, cfg.outputs.tokens);
            std::printf("pack: %llu tokens (%llu patch, %llu intra, %llu inter) dim %u -> %s\n",
                        static_cast<unsigned long long>(seq.summary.total()),
                        static_cast<unsigned long long>(seq.summary.patch_tokens),
                        static_cast<unsigned long long>(seq.summary.intra_separators),
                        static_cast<unsigned long long>(seq.summary.inter_separators), seq.dim,
                        cfg.outputs.tokens.string().c_str());
        } else if (report->parsed()) {
            const auto cfg = report_ov.resolve();
            std::optional<FrameSequence> frames;
            if (!report_frames.empty()) {
                frames = read_frame_bank(report_frames);
            }
            const auto r = report_from_plan_json(read_text(report_plan), cfg, frames ? &*frames : nullptr,
                                                 report_ov.baseline_interval);
            if (!report_csv.empty()) {
                write_text(report_csv, report_to_csv(r));
            }
            if (!report_json.empty()) {
                write_text(report_json, report_to_json(r));
            }
            std::printf("report: %zu keyframes, %llu tokens vs %llu uniform at M=%u (ratio %.3f)\n", r.frames.size(),
                        static_cast<unsigned long long>(r.ours_tokens),
                        static_cast<unsigned long long>(r.baseline_tokens), r.baseline_interval, r.compression_ratio);
        } else if (weights_cmd->parsed()) {
            write_weights(default_weights(weights_seed, weights_bins, weights_dim), weights_out);
            std::printf("init-weights: %u x %u -> %s\n", weights_bins, weights_dim, weights_out.c_str());
        }
    } catch (const std::exception& e) {
        std::cerr << "keytok: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
