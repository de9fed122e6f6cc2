// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "keytok/assembly.hpp"
#include "keytok/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace keytok;
using namespace keytok::testing;

namespace {

KeyframePlan plan_of(const std::vector<std::uint32_t>& frames, std::uint32_t total) {
    KeyframePlan plan;
    plan.total_frames = total;
    for (auto f : frames) {
        plan.entries.push_back({f, f == 0 ? FrameKind::IFrame : FrameKind::Compensation});
    }
    return plan;
}

RankedFrames focus_on(const KeyframePlan& plan, const std::vector<std::uint32_t>& focus) {
    RankedFrames r;
    for (auto f : focus) r.order.push_back({f, 1.0});
    for (const auto& e : plan.entries) {
        if (std::find(focus.begin(), focus.end(), e.frame) == focus.end()) r.order.push_back({e.frame, 0.0});
    }
    r.focus = focus;
    std::sort(r.focus.begin(), r.focus.end());
    return r;
}

}  // namespace

TEST(Assembly, SevenTokenGoldenLayout) {
    const auto patches = read_embeddings(fixture("patch_4x4x2.kfe"));
    const auto weights = decode_weights(file_bytes(fixture("weights_4x2.kfw")));
    CondensationConfig cfg{2, 2, 4, 4};
    const auto plan = plan_of({0}, 1);
    const auto cp = build_uniform_condensation(plan, 2, cfg);
    const auto condensed = apply_condensation(patches, cp);
    const auto seq = assemble(condensed, cp, weights, 1);

    ASSERT_EQ(seq.tokens.size(), 7u);
    const std::vector<TokenTag> tags{TokenTag::Patch, TokenTag::Patch, TokenTag::IntraSeparator, TokenTag::Patch,
                                     TokenTag::Patch, TokenTag::IntraSeparator, TokenTag::InterSeparator};
    for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_EQ(seq.tokens[i].tag, tags[i]) << i;
    }
    EXPECT_EQ(seq.tokens[0].values, (std::vector<float>{2.5f, 3.0f}));
    EXPECT_EQ(seq.tokens[4].values, (std::vector<float>{12.5f, 13.0f}));
    const auto eps = weights.table.row(0);
    EXPECT_EQ(seq.tokens[2].values, std::vector<float>(eps.begin(), eps.end()));
    EXPECT_EQ(seq.tokens[6].values,
              (std::vector<float>{static_cast<float>(double(eps[1]) + 0.5), static_cast<float>(double(eps[0]) - 0.5)}));
    EXPECT_EQ(encode_tokens(seq), file_bytes(fixture("seven_tokens.kft")));
    EXPECT_EQ(seq.summary.total(), 7u);
    EXPECT_EQ(seq.summary.intra_separators, 2u);
}

TEST(Assembly, TokenCostClosedForms) {
    const std::vector<std::uint32_t> frames{0, 3, 6, 9, 12, 15, 18, 21, 24, 27};
    const auto plan = plan_of(frames, 30);
    const auto ranked = focus_on(plan, {3, 12, 27});
    const auto cp = build_condensation_plan(plan, &ranked);
    EXPECT_EQ(sequence_token_cost(cp), 366u);
    EXPECT_EQ(sequence_token_cost(build_uniform_condensation(plan, 4)), 21u * 10u);

    std::mt19937_64 rng(1);
    const auto patches = random_embeddings(rng, EmbeddingKind::PatchGrid, 30, 16, 16, 4);
    const auto seq = assemble(apply_condensation(patches, cp), cp, default_weights(0, 1000, 4), 30);
    EXPECT_EQ(seq.tokens.size(), 366u);
    EXPECT_EQ(seq.summary.patch_tokens, 304u);
    EXPECT_EQ(seq.summary.intra_separators, 3u * 8u + 7u * 4u);
    EXPECT_EQ(seq.summary.inter_separators, 10u);
    EXPECT_EQ(seq.summary.focus_frames, 3u);
}

TEST(Assembly, RandomPlansMatchLayoutFormula) {
    std::mt19937_64 rng(77);
    const std::vector<std::uint32_t> ratios{1, 2, 4, 8};
    const auto weights = default_weights(3, 1000, 2);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::uint32_t total = 1 + static_cast<std::uint32_t>(rng() % 2000);
        std::set<std::uint32_t> picks{0};
        const std::uint32_t k = static_cast<std::uint32_t>(rng() % 12);
        for (std::uint32_t i = 0; i < k; ++i) picks.insert(static_cast<std::uint32_t>(rng() % total));
        const std::vector<std::uint32_t> frames(picks.begin(), picks.end());
        const auto plan = plan_of(frames, total);

        std::uint32_t d1 = ratios[rng() % ratios.size()];
        std::uint32_t d2 = ratios[rng() % ratios.size()];
        if (d1 > d2) std::swap(d1, d2);
        CondensationConfig cfg{d1, d2, 8, 8};
        std::vector<std::uint32_t> focus;
        const auto nf = focus_size(0.3, frames.size());
        std::sample(frames.begin(), frames.end(), std::back_inserter(focus), nf, rng);
        const auto ranked = focus_on(plan, focus);
        const auto cp = build_condensation_plan(plan, &ranked, cfg);

        std::vector<std::uint32_t> ds;
        for (auto f : frames) {
            ds.push_back(std::find(focus.begin(), focus.end(), f) != focus.end() ? d1 : d2);
        }
        const auto expected = oracle::layout_tokens(ds, 8, 8);
        EXPECT_EQ(sequence_token_cost(cp), expected);

        const auto patches = random_embeddings(rng, EmbeddingKind::PatchGrid, total, 8, 8, 2);
        const auto seq = assemble(apply_condensation(patches, cp), cp, weights, total);
        ASSERT_EQ(seq.tokens.size(), expected);
        EXPECT_EQ(seq.summary.inter_separators, frames.size());
        EXPECT_EQ(seq.tokens.back().tag, TokenTag::InterSeparator);
        // Each frame's separators share one bin; bins never decrease.
        for (std::size_t i = 1; i < seq.tokens.size(); ++i) {
            EXPECT_GE(seq.tokens[i].temporal_bin, seq.tokens[i - 1].temporal_bin);
        }
        EXPECT_EQ(seq.tokens.front().temporal_bin, 0u);
        if (HasFailure()) break;
    }
}

TEST(Assembly, ZeroTableLeavesPatchesUntouched) {
    std::mt19937_64 rng(8);
    const auto patches = random_embeddings(rng, EmbeddingKind::PatchGrid, 5, 16, 16, 3);
    const auto plan = plan_of({0, 2, 4}, 5);
    const auto cp = build_uniform_condensation(plan, 4);
    const auto condensed = apply_condensation(patches, cp);
    TemporalWeights zero = default_weights(0, 1000, 3);
    std::fill(zero.table.values.begin(), zero.table.values.end(), 0.0f);
    const auto seq = assemble(condensed, cp, zero, 5);
    std::size_t frame = 0, next_patch = 0;
    for (const auto& t : seq.tokens) {
        if (t.tag == TokenTag::Patch) {
            const auto& g = condensed[frame].grid;
            const auto expected = std::vector<float>(g.data.begin() + next_patch * 3, g.data.begin() + next_patch * 3 + 3);
            EXPECT_EQ(t.values, expected);
            ++next_patch;
        } else {
            EXPECT_EQ(t.values, std::vector<float>(3, 0.0f));
            if (t.tag == TokenTag::InterSeparator) {
                ++frame;
                next_patch = 0;
            }
        }
    }
    EXPECT_EQ(frame, 3u);
}

TEST(Assembly, PackUnpackRoundTrip) {
    TempDir dir;
    std::mt19937_64 rng(4);
    const auto patches = random_embeddings(rng, EmbeddingKind::PatchGrid, 50, 16, 16, 8);
    const auto plan = plan_of({0, 10, 20, 49}, 50);
    const auto ranked = focus_on(plan, {20});
    const auto cp = build_condensation_plan(plan, &ranked);
    const auto seq = assemble(apply_condensation(patches, cp), cp, default_weights(1, 1000, 8), 50);
    pack(seq, dir / "x.kft");
    const auto back = unpack(dir / "x.kft");
    EXPECT_EQ(back.tokens, seq.tokens);
    EXPECT_EQ(back.dim, 8u);
    EXPECT_EQ(back.summary.total(), seq.summary.total());
    EXPECT_FALSE(back.summary.focus_frames.has_value());
    EXPECT_EQ(file_bytes(dir / "x.kft"), encode_tokens(back));
}

TEST(Assembly, RejectsMalformedSequences) {
    TokenSequence empty;
    empty.dim = 2;
    EXPECT_THROW(encode_tokens(empty), Error);

    auto golden = file_bytes(fixture("seven_tokens.kft"));
    auto bad_tag = golden;
    bad_tag[14] = 9;  // tag of the first token
    EXPECT_THROW(decode_tokens(bad_tag), Error);
    auto trailing = golden;
    trailing.push_back(1);
    EXPECT_THROW(decode_tokens(trailing), Error);
    auto truncated = golden;
    truncated.pop_back();
    EXPECT_THROW(decode_tokens(truncated), Error);

    auto seq = decode_tokens(golden);
    auto no_inter = seq;
    no_inter.tokens.pop_back();
    EXPECT_THROW(summarize(no_inter), Error);
    auto ragged = seq;
    ragged.tokens.erase(ragged.tokens.begin());
    EXPECT_THROW(summarize(ragged), Error);

    const auto plan = plan_of({0}, 1);
    CondensationConfig cfg{2, 2, 4, 4};
    const auto cp = build_uniform_condensation(plan, 2, cfg);
    const auto condensed = apply_condensation(read_embeddings(fixture("patch_4x4x2.kfe")), cp);
    EXPECT_THROW(assemble(condensed, cp, default_weights(0, 10, 3), 1), Error);
}
