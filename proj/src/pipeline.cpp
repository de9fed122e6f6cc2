// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json_codec.hpp"
#include "keytok/binary.hpp"
#include "keytok/error.hpp"

namespace keytok {

namespace {

const std::string kModule = "pipeline";

using detail::Json;

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
    throw Error(code, kModule, message);
}

void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        fail(ErrorCode::InvalidArgument, "config section \"" + where + "\" must be an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!keys.count(key)) {
            fail(ErrorCode::InvalidArgument, "unknown config key \"" + where + "." + key + "\"");
        }
    }
}

template <typename T>
void read_opt(const Json& obj, const char* key, T& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) {
        out = obj.at(key).get<T>();
    }
}

template <typename T>
void read_opt(const Json& obj, const char* key, std::optional<T>& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) {
        out = obj.at(key).get<T>();
    }
}

void read_path(const Json& obj, const char* key, std::filesystem::path& out) {
    if (obj.contains(key) && !obj.at(key).is_null()) {
        out = obj.at(key).get<std::string>();
    }
}

std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

}  // namespace

void validate(const PipelineConfig& cfg) {
    validate(cfg.metric);
    validate(cfg.keyframe);
    validate(cfg.relevance);
    validate(cfg.condense);
    if (cfg.temporal_bins == 0) {
        fail(ErrorCode::InvalidArgument, "temporal bins must be >= 1");
    }
    if (cfg.dim && *cfg.dim == 0) {
        fail(ErrorCode::InvalidArgument, "embedding dim must be >= 1");
    }
    if (cfg.baseline_interval && *cfg.baseline_interval == 0) {
        fail(ErrorCode::InvalidArgument, "baseline interval must be >= 1");
    }
}

PipelineConfig config_from_json(const std::string& text) {
    const Json root = detail::parse_json(text, kModule);
    PipelineConfig cfg;
    try {
        reject_unknown(root, "config",
                       {"metric", "keyframe", "relevance", "condense", "temporal", "report", "inputs", "outputs"});
        if (root.contains("metric")) {
            const auto& m = root.at("metric");
            reject_unknown(m, "metric", {"window", "stride", "dynamic_range"});
            read_opt(m, "window", cfg.metric.window);
            read_opt(m, "stride", cfg.metric.stride);
            read_opt(m, "dynamic_range", cfg.metric.dynamic_range);
        }
        if (root.contains("keyframe")) {
            const auto& k = root.at("keyframe");
            reject_unknown(k, "keyframe", {"tau", "gop_max", "min_gap", "delta"});
            read_opt(k, "tau", cfg.keyframe.tau);
            read_opt(k, "gop_max", cfg.keyframe.gop_max);
            read_opt(k, "min_gap", cfg.keyframe.min_gap);
            read_opt(k, "delta", cfg.keyframe.delta);
        }
        if (root.contains("relevance")) {
            const auto& r = root.at("relevance");
            reject_unknown(r, "relevance", {"alpha"});
            read_opt(r, "alpha", cfg.relevance.alpha);
        }
        if (root.contains("condense")) {
            const auto& c = root.at("condense");
            reject_unknown(c, "condense", {"d1", "d2", "grid_rows", "grid_cols"});
            read_opt(c, "d1", cfg.condense.d1);
            read_opt(c, "d2", cfg.condense.d2);
            read_opt(c, "grid_rows", cfg.condense.grid_rows);
            read_opt(c, "grid_cols", cfg.condense.grid_cols);
        }
        if (root.contains("temporal")) {
            const auto& t = root.at("temporal");
            reject_unknown(t, "temporal", {"bins", "dim", "seed"});
            read_opt(t, "bins", cfg.temporal_bins);
            read_opt(t, "dim", cfg.dim);
            read_opt(t, "seed", cfg.seed);
        }
        if (root.contains("report")) {
            const auto& r = root.at("report");
            reject_unknown(r, "report", {"baseline_interval"});
            read_opt(r, "baseline_interval", cfg.baseline_interval);
        }
        if (root.contains("inputs")) {
            const auto& in = root.at("inputs");
            reject_unknown(in, "inputs", {"frames", "patches", "frame_embeddings", "query", "weights"});
            read_path(in, "frames", cfg.inputs.frames);
            read_path(in, "patches", cfg.inputs.patches);
            read_path(in, "frame_embeddings", cfg.inputs.frame_embeddings);
            read_path(in, "query", cfg.inputs.query);
            read_path(in, "weights", cfg.inputs.weights);
        }
        if (root.contains("outputs")) {
            const auto& out = root.at("outputs");
            reject_unknown(out, "outputs", {"plan", "tokens", "csv"});
            read_path(out, "plan", cfg.outputs.plan);
            read_path(out, "tokens", cfg.outputs.tokens);
            read_path(out, "csv", cfg.outputs.csv);
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("bad config value: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

std::string config_to_json(const PipelineConfig& cfg) {
    auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
    auto path = [](const std::filesystem::path& p) { return p.empty() ? Json(nullptr) : Json(p.string()); };
    Json root{
        {"metric",
         {{"window", cfg.metric.window}, {"stride", cfg.metric.stride}, {"dynamic_range", cfg.metric.dynamic_range}}},
        {"keyframe",
         {{"tau", cfg.keyframe.tau},
          {"gop_max", cfg.keyframe.gop_max},
          {"min_gap", cfg.keyframe.min_gap},
          {"delta", cfg.keyframe.delta}}},
        {"relevance", {{"alpha", cfg.relevance.alpha}}},
        {"condense",
         {{"d1", cfg.condense.d1},
          {"d2", cfg.condense.d2},
          {"grid_rows", cfg.condense.grid_rows},
          {"grid_cols", cfg.condense.grid_cols}}},
        {"temporal", {{"bins", cfg.temporal_bins}, {"dim", opt(cfg.dim)}, {"seed", cfg.seed}}},
        {"report", {{"baseline_interval", opt(cfg.baseline_interval)}}},
        {"inputs",
         {{"frames", path(cfg.inputs.frames)},
          {"patches", path(cfg.inputs.patches)},
          {"frame_embeddings", path(cfg.inputs.frame_embeddings)},
          {"query", path(cfg.inputs.query)},
          {"weights", path(cfg.inputs.weights)}}},
        {"outputs",
         {{"plan", path(cfg.outputs.plan)}, {"tokens", path(cfg.outputs.tokens)}, {"csv", path(cfg.outputs.csv)}}},
    };
    return root.dump(2) + "\n";
}

PipelineConfig load_config(const std::filesystem::path& path) {
    const auto bytes = binary::read_file(path, kModule);
    return config_from_json(std::string(bytes.begin(), bytes.end()));
}

PipelineInputs load_inputs(const PipelineConfig& cfg) {
    if (cfg.inputs.frames.empty()) {
        fail(ErrorCode::MissingInput, "no frame bank configured");
    }
    PipelineInputs in;
    in.frames = read_frame_bank(cfg.inputs.frames);
    if (!cfg.inputs.frame_embeddings.empty()) {
        in.frame_embeddings = read_embeddings(cfg.inputs.frame_embeddings);
    }
    if (!cfg.inputs.query.empty()) {
        in.query = read_query(cfg.inputs.query);
    }
    return in;
}

std::uint32_t default_baseline_interval(const Rational& fps) {
    const auto m = std::llround(fps.value());
    return static_cast<std::uint32_t>(std::max<long long>(1, m));
}

std::uint64_t baseline_token_cost(std::uint32_t total_frames, std::uint32_t interval, const CondensationConfig& cfg) {
    validate(cfg);
    if (interval == 0) {
        fail(ErrorCode::InvalidArgument, "baseline interval must be >= 1");
    }
    const std::uint64_t frames = (std::uint64_t{total_frames} + interval - 1) / interval;
    const std::uint64_t per_frame =
        std::uint64_t{cfg.grid_rows / cfg.d2} * (cfg.grid_cols / cfg.d2) + cfg.grid_rows / cfg.d2 + 1;
    return frames * per_frame;
}

Report build_report(const KeyframePlan& plan, const CondensationPlan& condensation, const RankedFrames* ranked,
                    std::span<const PairMetrics> pairs, std::uint32_t baseline_interval) {
    validate(plan);
    if (condensation.entries.size() != plan.entries.size()) {
        fail(ErrorCode::ShapeMismatch, "condensation plan does not cover the keyframe plan");
    }
    if (!pairs.empty() && pairs.size() + 1 != plan.total_frames) {
        fail(ErrorCode::ShapeMismatch, "consecutive metrics do not match T");
    }

    Report r;
    r.total_frames = plan.total_frames;
    r.iframes = plan.count(FrameKind::IFrame);
    r.compensation = plan.count(FrameKind::Compensation);
    r.uniform = plan.count(FrameKind::Uniform);
    std::map<std::uint32_t, std::uint32_t> histogram;
    for (const auto& g : plan.gaps) {
        ++histogram[g.length];
    }
    for (const auto& [length, count] : histogram) {
        r.gap_histogram.push_back({length, count});
    }

    r.ours_tokens = sequence_token_cost(condensation);
    r.baseline_interval = baseline_interval;
    r.baseline_frames = (std::uint64_t{plan.total_frames} + baseline_interval - 1) / baseline_interval;
    r.baseline_tokens = baseline_token_cost(plan.total_frames, baseline_interval, condensation.config);
    r.compression_ratio = static_cast<double>(r.baseline_tokens) / static_cast<double>(r.ours_tokens);
    r.ranking_inert = condensation.config.ranking_inert();
    r.focus_frames = condensation.focus_count();

    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const auto& e = plan.entries[i];
        const auto& c = condensation.entries[i];
        if (c.frame != e.frame) {
            fail(ErrorCode::ShapeMismatch, "condensation plan frames differ from keyframe plan");
        }
        FrameReport fr;
        fr.frame = e.frame;
        fr.kind = e.kind;
        if (!pairs.empty() && e.frame > 0) {
            fr.ssim_prev = pairs[e.frame - 1].ssim;
            fr.psnr_prev = pairs[e.frame - 1].psnr;
        }
        if (ranked != nullptr) {
            fr.relevance = ranked->score_of(e.frame);
        }
        fr.ratio = c.ratio;
        fr.tokens = c.tokens;
        r.frames.push_back(fr);
    }
    return r;
}

PlanResult run_plan(const PipelineInputs& inputs, const PipelineConfig& cfg) {
    validate(cfg);
    validate(inputs.frames);
    const auto total = static_cast<std::uint32_t>(inputs.frames.size());

    PlanResult result;
    result.fps = inputs.frames.fps;
    const auto pairs = consecutive_metrics(inputs.frames, cfg.metric);
    result.keyframes = select_keyframes(pairs, total, cfg.keyframe);

    const bool all_focus = to_ppm(cfg.relevance.alpha) >= kPpm;
    const bool needs_ranking = !cfg.condense.ranking_inert() && !all_focus;
    const bool has_query = inputs.query.has_value() && inputs.frame_embeddings.has_value();
    if (needs_ranking && !has_query) {
        throw Error(ErrorCode::MissingInput, "relevance",
                    "relevance requires query: alpha < 1 with d1 != d2 needs frame-level embeddings and a query");
    }
    if (has_query) {
        if (cfg.dim && *cfg.dim != inputs.frame_embeddings->dim) {
            fail(ErrorCode::DimensionMismatch, "frame embeddings dim " +
                                                   std::to_string(inputs.frame_embeddings->dim) +
                                                   " != configured dim " + std::to_string(*cfg.dim));
        }
        result.ranking = rank_frames(result.keyframes, *inputs.frame_embeddings, *inputs.query, cfg.relevance);
        result.condensation = build_condensation_plan(result.keyframes, &*result.ranking, cfg.condense);
    } else {
        result.condensation = build_uniform_condensation(result.keyframes, cfg.condense.d1, cfg.condense);
    }

    const std::uint32_t interval = cfg.baseline_interval.value_or(default_baseline_interval(inputs.frames.fps));
    result.report = build_report(result.keyframes, result.condensation,
                                 result.ranking ? &*result.ranking : nullptr, pairs, interval);
    return result;
}

TokenSequence materialize(const PlanResult& result, const EmbeddingSet& patches, const TemporalWeights& weights) {
    if (patches.dim != weights.table.dim) {
        fail(ErrorCode::DimensionMismatch, "patch embedding dim " + std::to_string(patches.dim) +
                                               " != temporal weight dim " + std::to_string(weights.table.dim));
    }
    const auto condensed = apply_condensation(patches, result.condensation);
    return assemble(condensed, result.condensation, weights, result.keyframes.total_frames);
}

namespace {

Json report_value(const Report& r) {
    Json histogram = Json::array();
    for (const auto& b : r.gap_histogram) {
        histogram.push_back(Json{{"t_k", b.length}, {"count", b.count}});
    }
    Json frames = Json::array();
    for (const auto& f : r.frames) {
        Json psnr = nullptr;
        if (f.psnr_prev) {
            psnr = f.psnr_prev->is_infinite() ? Json("inf") : Json(f.psnr_prev->db());
        }
        frames.push_back(Json{{"t", f.frame},
                              {"kind", to_string(f.kind)},
                              {"ssim_prev", f.ssim_prev ? Json(*f.ssim_prev) : Json(nullptr)},
                              {"psnr_db", std::move(psnr)},
                              {"relevance", f.relevance ? Json(*f.relevance) : Json(nullptr)},
                              {"d", f.ratio},
                              {"tokens", f.tokens}});
    }
    return Json{{"T", r.total_frames},
                {"keyframes",
                 {{"total", r.frames.size()},
                  {"iframe", r.iframes},
                  {"compensation", r.compensation},
                  {"uniform", r.uniform},
                  {"gap_histogram", std::move(histogram)}}},
                {"tokens",
                 {{"ours", r.ours_tokens},
                  {"baseline", r.baseline_tokens},
                  {"baseline_interval", r.baseline_interval},
                  {"baseline_frames", r.baseline_frames}}},
                {"compression_ratio", r.compression_ratio},
                {"ranking_inert", r.ranking_inert},
                {"focus_frames", r.focus_frames},
                {"frames", std::move(frames)}};
}

Report report_from_value(const Json& v) {
    Report r;
    r.total_frames = v.at("T").get<std::uint32_t>();
    const auto& k = v.at("keyframes");
    r.iframes = k.at("iframe").get<std::size_t>();
    r.compensation = k.at("compensation").get<std::size_t>();
    r.uniform = k.at("uniform").get<std::size_t>();
    for (const auto& b : k.at("gap_histogram")) {
        r.gap_histogram.push_back({b.at("t_k").get<std::uint32_t>(), b.at("count").get<std::uint32_t>()});
    }
    const auto& t = v.at("tokens");
    r.ours_tokens = t.at("ours").get<std::uint64_t>();
    r.baseline_tokens = t.at("baseline").get<std::uint64_t>();
    r.baseline_interval = t.at("baseline_interval").get<std::uint32_t>();
    r.baseline_frames = t.at("baseline_frames").get<std::uint64_t>();
    r.compression_ratio = v.at("compression_ratio").get<double>();
    r.ranking_inert = v.at("ranking_inert").get<bool>();
    r.focus_frames = v.at("focus_frames").get<std::size_t>();
    for (const auto& f : v.at("frames")) {
        FrameReport fr;
        fr.frame = f.at("t").get<std::uint32_t>();
        fr.kind = frame_kind_from_string(f.at("kind").get<std::string>());
        if (!f.at("ssim_prev").is_null()) {
            fr.ssim_prev = f.at("ssim_prev").get<double>();
        }
        const auto& p = f.at("psnr_db");
        if (p.is_string()) {
            if (p.get<std::string>() != "inf") {
                fail(ErrorCode::InvalidArgument, "psnr_db string must be \"inf\"");
            }
            fr.psnr_prev = Psnr::infinite();
        } else if (!p.is_null()) {
            fr.psnr_prev = Psnr::decibels(p.get<double>());
        }
        if (!f.at("relevance").is_null()) {
            fr.relevance = f.at("relevance").get<double>();
        }
        fr.ratio = f.at("d").get<std::uint32_t>();
        fr.tokens = f.at("tokens").get<std::uint32_t>();
        r.frames.push_back(fr);
    }
    return r;
}

}  // namespace

std::string report_to_json(const Report& report) {
    return report_value(report).dump(2) + "\n";
}

std::string result_to_json(const PlanResult& result) {
    const auto& cfg = result.condensation.config;
    Json condensation = Json::array();
    for (const auto& e : result.condensation.entries) {
        condensation.push_back(Json{{"t", e.frame},
                                    {"d", e.ratio},
                                    {"tokens", e.tokens},
                                    {"rows", e.rows_out},
                                    {"cols", e.cols_out},
                                    {"focused", e.focused}});
    }
    Json ranking = nullptr;
    if (result.ranking) {
        Json order = Json::array();
        for (const auto& s : result.ranking->order) {
            order.push_back(Json{{"t", s.frame}, {"score", s.score}});
        }
        ranking = Json{{"order", std::move(order)}, {"focus", result.ranking->focus}};
    }
    const auto& r = result.report;
    std::uint64_t intra_separators = 0;
    for (const auto& e : result.condensation.entries) {
        intra_separators += e.rows_out;
    }
    Json root{
        {"T", result.keyframes.total_frames},
        {"fps", {{"num", result.fps.num}, {"den", result.fps.den}}},
        {"condense",
         {{"d1", cfg.d1}, {"d2", cfg.d2}, {"grid_rows", cfg.grid_rows}, {"grid_cols", cfg.grid_cols}}},
        {"keyframes", detail::plan_to_value(result.keyframes)},
        {"ranking", std::move(ranking)},
        {"condensation", std::move(condensation)},
        {"summary",
         {{"frames", result.condensation.entries.size()},
          {"focus_frames", result.condensation.focus_count()},
          {"patch_tokens", result.condensation.patch_tokens()},
          {"intra_separators", intra_separators},
          {"inter_separators", result.condensation.entries.size()},
          {"total", r.ours_tokens}}},
        {"report", report_value(r)},
    };
    return root.dump(2) + "\n";
}

PlanResult result_from_json(const std::string& text) {
    const Json root = detail::parse_json(text, kModule);
    PlanResult result;
    try {
        result.fps = Rational{root.at("fps").at("num").get<std::uint32_t>(), root.at("fps").at("den").get<std::uint32_t>()};
        auto& cfg = result.condensation.config;
        const auto& c = root.at("condense");
        cfg.d1 = c.at("d1").get<std::uint32_t>();
        cfg.d2 = c.at("d2").get<std::uint32_t>();
        cfg.grid_rows = c.at("grid_rows").get<std::uint32_t>();
        cfg.grid_cols = c.at("grid_cols").get<std::uint32_t>();
        validate(cfg);
        result.keyframes = detail::plan_from_value(root.at("keyframes"));
        if (root.at("T").get<std::uint32_t>() != result.keyframes.total_frames) {
            fail(ErrorCode::ShapeMismatch, "plan T disagrees with keyframe plan T");
        }
        if (!root.at("ranking").is_null()) {
            RankedFrames ranked;
            for (const auto& s : root.at("ranking").at("order")) {
                ranked.order.push_back({s.at("t").get<std::uint32_t>(), s.at("score").get<double>()});
            }
            ranked.focus = root.at("ranking").at("focus").get<std::vector<std::uint32_t>>();
            result.ranking = std::move(ranked);
        }
        for (const auto& e : root.at("condensation")) {
            CondensationEntry entry;
            entry.frame = e.at("t").get<std::uint32_t>();
            entry.ratio = e.at("d").get<std::uint32_t>();
            entry.tokens = e.at("tokens").get<std::uint32_t>();
            entry.rows_out = e.at("rows").get<std::uint32_t>();
            entry.cols_out = e.at("cols").get<std::uint32_t>();
            entry.focused = e.at("focused").get<bool>();
            if ((entry.ratio != cfg.d1 && entry.ratio != cfg.d2) || entry.rows_out * entry.ratio != cfg.grid_rows ||
                entry.cols_out * entry.ratio != cfg.grid_cols || entry.tokens != entry.rows_out * entry.cols_out) {
                fail(ErrorCode::ShapeMismatch, "condensation entry for frame " + std::to_string(entry.frame) +
                                                   " is inconsistent with the grid");
            }
            result.condensation.entries.push_back(entry);
        }
        if (result.condensation.entries.size() != result.keyframes.entries.size()) {
            fail(ErrorCode::ShapeMismatch, "condensation plan does not cover the keyframe plan");
        }
        result.report = report_from_value(root.at("report"));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed pipeline plan: ") + e.what());
    }
    return result;
}

SynthSpec synth_spec_from_json(const std::string& text) {
    const Json root = detail::parse_json(text, kModule);
    SynthSpec spec;
    try {
        reject_unknown(root, "synth", {"T", "width", "height", "fps", "seed", "segments"});
        spec.frame_count = root.at("T").get<std::uint32_t>();
        read_opt(root, "width", spec.width);
        read_opt(root, "height", spec.height);
        read_opt(root, "seed", spec.seed);
        if (root.contains("fps")) {
            const auto& fps = root.at("fps");
            if (fps.is_object()) {
                spec.fps = Rational{fps.at("num").get<std::uint32_t>(), fps.value("den", 1u)};
            } else {
                spec.fps = Rational{fps.get<std::uint32_t>(), 1};
            }
        }
        for (const auto& s : root.at("segments")) {
            reject_unknown(s, "segments[]", {"kind", "length", "base", "cut"});
            SynthSegment seg;
            const auto kind = s.at("kind").get<std::string>();
            if (kind == "static") {
                seg.kind = SegmentKind::Static;
            } else if (kind == "linear-motion") {
                seg.kind = SegmentKind::LinearMotion;
            } else if (kind == "noise") {
                seg.kind = SegmentKind::Noise;
            } else {
                fail(ErrorCode::InvalidArgument, "unknown segment kind \"" + kind + "\"");
            }
            seg.length = s.at("length").get<std::uint32_t>();
            read_opt(s, "base", seg.base_intensity);
            read_opt(s, "cut", seg.cut_magnitude);
            spec.segments.push_back(seg);
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed synth spec: ") + e.what());
    }
    return spec;
}

Report report_from_plan_json(const std::string& text, const PipelineConfig& cfg, const FrameSequence* frames,
                             std::optional<std::uint32_t> baseline_interval) {
    const Json root = detail::parse_json(text, kModule);
    std::vector<PairMetrics> pairs;
    if (frames != nullptr) {
        pairs = consecutive_metrics(*frames, cfg.metric);
    }

    if (root.contains("condensation")) {
        auto result = result_from_json(text);
        const std::uint32_t interval = baseline_interval.value_or(result.report.baseline_interval);
        if (frames != nullptr && frames->size() != result.keyframes.total_frames) {
            fail(ErrorCode::ShapeMismatch, "frame bank T differs from plan T");
        }
        auto report = build_report(result.keyframes, result.condensation,
                                   result.ranking ? &*result.ranking : nullptr, pairs, interval);
        if (pairs.empty()) {
            // keep the scores recorded when the plan was made
            for (std::size_t i = 0; i < report.frames.size(); ++i) {
                report.frames[i].ssim_prev = result.report.frames.at(i).ssim_prev;
                report.frames[i].psnr_prev = result.report.frames.at(i).psnr_prev;
            }
        }
        return report;
    }

    const auto plan = detail::plan_from_value(root);
    if (frames != nullptr && frames->size() != plan.total_frames) {
        fail(ErrorCode::ShapeMismatch, "frame bank T differs from plan T");
    }
    std::optional<std::uint32_t> interval = baseline_interval ? baseline_interval : cfg.baseline_interval;
    if (!interval) {
        if (frames == nullptr) {
            fail(ErrorCode::MissingInput, "baseline interval needs --baseline-interval or a frame bank for fps");
        }
        interval = default_baseline_interval(frames->fps);
    }
    const bool all_focus = cfg.condense.ranking_inert() || to_ppm(cfg.relevance.alpha) >= kPpm;
    const auto condensation =
        build_uniform_condensation(plan, all_focus ? cfg.condense.d1 : cfg.condense.d2, cfg.condense);
    return build_report(plan, condensation, nullptr, pairs, *interval);
}

std::string report_to_csv(const Report& report) {
    std::ostringstream out;
    out << "frame,kind,ssim_prev,psnr_db,relevance,d,tokens\n";
    for (const auto& f : report.frames) {
        out << f.frame << ',' << to_string(f.kind) << ',';
        if (f.ssim_prev) {
            out << format_fixed(*f.ssim_prev, 6);
        }
        out << ',';
        if (f.psnr_prev) {
            out << (f.psnr_prev->is_infinite() ? std::string("inf") : format_fixed(f.psnr_prev->db(), 4));
        }
        out << ',';
        if (f.relevance) {
            out << format_fixed(*f.relevance, 6);
        }
        out << ',' << f.ratio << ',' << f.tokens << '\n';
    }
    return out.str();
}

}  // namespace keytok
