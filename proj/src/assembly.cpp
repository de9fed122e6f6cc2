// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/assembly.hpp"

#include "keytok/binary.hpp"
#include "keytok/error.hpp"
#include "keytok/parallel.hpp"

namespace keytok {

namespace {

const std::string kModule = "assembly";
constexpr std::string_view kMagic = "KFVT";
constexpr std::uint16_t kVersion = 1;

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
    throw Error(code, kModule, message);
}

}  // namespace

std::uint64_t frame_token_cost(const CondensationEntry& entry) {
    return std::uint64_t{entry.tokens} + entry.rows_out + 1;
}

std::uint64_t sequence_token_cost(const CondensationPlan& plan) {
    std::uint64_t total = 0;
    for (const auto& e : plan.entries) {
        total += frame_token_cost(e);
    }
    return total;
}

TokenSequence assemble(std::span<const CondensedFrame> condensed, const CondensationPlan& plan,
                       const TemporalWeights& weights, std::uint32_t total_frames) {
    if (condensed.size() != plan.entries.size()) {
        fail(ErrorCode::ShapeMismatch, "condensed frame count " + std::to_string(condensed.size()) +
                                           " != plan size " + std::to_string(plan.entries.size()));
    }
    if (condensed.empty()) {
        fail(ErrorCode::EmptyInput, "nothing to assemble");
    }
    const std::uint32_t dim = weights.table.dim;
    for (std::size_t i = 0; i < condensed.size(); ++i) {
        const auto& cf = condensed[i];
        const auto& e = plan.entries[i];
        if (cf.frame != e.frame || cf.grid.rows != e.rows_out || cf.grid.cols != e.cols_out) {
            fail(ErrorCode::ShapeMismatch, "condensed frame " + std::to_string(cf.frame) + " does not match plan");
        }
        if (cf.grid.dim != dim) {
            fail(ErrorCode::DimensionMismatch, "token dim " + std::to_string(cf.grid.dim) +
                                                   " != temporal dim " + std::to_string(dim));
        }
        if (e.frame >= total_frames) {
            fail(ErrorCode::InvalidArgument, "frame " + std::to_string(e.frame) + " beyond T=" +
                                                 std::to_string(total_frames));
        }
        if (i > 0 && e.frame <= plan.entries[i - 1].frame) {
            fail(ErrorCode::InvalidArgument, "frames must be sorted by index");
        }
    }

    std::vector<std::vector<Token>> segments(condensed.size());
    parallel_for(condensed.size(), [&](std::size_t i) {
        const auto& cf = condensed[i];
        const std::uint32_t bin = temporal_bin(cf.frame, total_frames, weights.table.bins);
        const auto epsilon = weights.table.row(bin);
        const auto intra = project(weights.intra, epsilon);
        const auto inter = project(weights.inter, epsilon);

        auto& out = segments[i];
        out.reserve(std::size_t{cf.grid.rows} * (cf.grid.cols + 1) + 1);
        for (std::uint32_t r = 0; r < cf.grid.rows; ++r) {
            for (std::uint32_t c = 0; c < cf.grid.cols; ++c) {
                const auto v = cf.grid.token(r, c);
                out.push_back(Token{TokenTag::Patch, cf.frame, bin, std::vector<float>(v.begin(), v.end())});
            }
            out.push_back(Token{TokenTag::IntraSeparator, cf.frame, bin, intra});
        }
        out.push_back(Token{TokenTag::InterSeparator, cf.frame, bin, inter});
    });

    TokenSequence seq;
    seq.dim = dim;
    for (auto& segment : segments) {
        std::move(segment.begin(), segment.end(), std::back_inserter(seq.tokens));
    }
    seq.summary = summarize(seq);
    seq.summary.focus_frames = static_cast<std::uint32_t>(plan.focus_count());
    return seq;
}

SequenceSummary summarize(const TokenSequence& seq) {
    SequenceSummary s;
    std::size_t i = 0;
    const auto& toks = seq.tokens;
    std::optional<std::uint32_t> previous_frame;
    std::optional<std::uint32_t> previous_bin;
    while (i < toks.size()) {
        const std::uint32_t frame = toks[i].frame;
        const std::uint32_t bin = toks[i].temporal_bin;
        if (previous_frame && frame <= *previous_frame) {
            fail(ErrorCode::ShapeMismatch, "frame indices must increase between frames");
        }
        if (previous_bin && bin < *previous_bin) {
            fail(ErrorCode::ShapeMismatch, "temporal bins must be non-decreasing");
        }
        // rows: runs of >=1 patch tokens closed by an intra separator, then one inter separator.
        std::size_t row_width = 0;
        std::size_t rows = 0;
        while (true) {
            std::size_t width = 0;
            while (i < toks.size() && toks[i].tag == TokenTag::Patch) {
                if (toks[i].frame != frame || toks[i].temporal_bin != bin) {
                    fail(ErrorCode::ShapeMismatch, "token frame/bin changes inside a frame");
                }
                ++width;
                ++i;
            }
            if (i >= toks.size()) {
                fail(ErrorCode::ShapeMismatch, "sequence ends inside frame " + std::to_string(frame));
            }
            if (toks[i].frame != frame || toks[i].temporal_bin != bin) {
                fail(ErrorCode::ShapeMismatch, "separator frame/bin differs from its frame");
            }
            if (toks[i].tag == TokenTag::InterSeparator) {
                if (width != 0 || rows == 0) {
                    fail(ErrorCode::ShapeMismatch, "inter separator must follow an intra separator");
                }
                ++i;
                break;
            }
            if (width == 0 || (rows > 0 && width != row_width)) {
                fail(ErrorCode::ShapeMismatch, "ragged or empty row in frame " + std::to_string(frame));
            }
            row_width = width;
            ++rows;
            ++i;
        }
        s.frames += 1;
        s.patch_tokens += rows * row_width;
        s.intra_separators += rows;
        s.inter_separators += 1;
        previous_frame = frame;
        previous_bin = bin;
    }
    return s;
}

std::vector<std::uint8_t> encode_tokens(const TokenSequence& seq) {
    if (seq.tokens.empty()) {
        fail(ErrorCode::EmptyInput, "refusing to pack an empty token sequence");
    }
    if (seq.dim == 0) {
        fail(ErrorCode::InvalidArgument, "token dim must be >= 1");
    }
    summarize(seq);
    binary::Writer w;
    w.magic(kMagic);
    w.u16(kVersion);
    w.u32(static_cast<std::uint32_t>(seq.tokens.size()));
    w.u32(seq.dim);
    for (const auto& t : seq.tokens) {
        if (t.values.size() != seq.dim) {
            fail(ErrorCode::ShapeMismatch, "token value count differs from sequence dim");
        }
        w.u8(static_cast<std::uint8_t>(t.tag));
        w.u32(t.frame);
        w.u32(t.temporal_bin);
        w.f32s(t.values);
    }
    return w.take();
}

TokenSequence decode_tokens(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes, kModule);
    r.expect_magic(kMagic);
    if (auto v = r.u16(); v != kVersion) {
        fail(ErrorCode::BadVersion, "unsupported token file version " + std::to_string(v));
    }
    const std::uint32_t count = r.u32();
    TokenSequence seq;
    seq.dim = r.u32();
    if (count == 0) {
        fail(ErrorCode::EmptyInput, "token file holds zero tokens");
    }
    if (seq.dim == 0) {
        fail(ErrorCode::InvalidArgument, "token dim must be >= 1");
    }
    const std::uint64_t record = 9 + std::uint64_t{seq.dim} * 4;
    if (r.remaining() / record < count) {
        fail(ErrorCode::Truncated, "truncated payload: " + std::to_string(count) + " tokens declared");
    }
    seq.tokens.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Token t;
        const auto tag = r.u8();
        if (tag > 2) {
            fail(ErrorCode::InvalidArgument, "unknown token tag " + std::to_string(tag));
        }
        t.tag = static_cast<TokenTag>(tag);
        t.frame = r.u32();
        t.temporal_bin = r.u32();
        t.values.resize(seq.dim);
        r.f32s(t.values);
        seq.tokens.push_back(std::move(t));
    }
    r.expect_end();
    seq.summary = summarize(seq);
    return seq;
}

void pack(const TokenSequence& seq, const std::filesystem::path& path) {
    binary::write_file(path, encode_tokens(seq), kModule);
}

TokenSequence unpack(const std::filesystem::path& path) {
    return decode_tokens(binary::read_file(path, kModule));
}

}  // namespace keytok
