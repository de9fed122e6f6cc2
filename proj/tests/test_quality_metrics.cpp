// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "keytok/error.hpp"
#include "keytok/quality_metrics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace keytok;
using namespace keytok::testing;

TEST(Psnr, IdenticalFramesAreInfinite) {
    std::mt19937_64 rng(3);
    const auto a = random_frame(rng, 16, 16);
    const auto p = psnr(a, a);
    EXPECT_TRUE(p.is_infinite());
    EXPECT_EQ(p.to_string(), "inf");
}

TEST(Psnr, UniformOffsetOfSixteen) {
    const auto a = constant_frame(8, 8, 100);
    const auto b = constant_frame(8, 8, 116);
    EXPECT_DOUBLE_EQ(mse(a, b), 256.0);
    const double expected = 10.0 * std::log10(255.0 * 255.0 / 256.0);
    EXPECT_NEAR(psnr(a, b).db(), expected, 1e-9);
}

TEST(Psnr, MatchesBruteForce) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_frame(rng, 64, 64);
        const auto b = random_frame(rng, 64, 64);
        EXPECT_NEAR(psnr(a, b).db(), oracle::psnr(a, b), 1e-9);
    }
}

TEST(Psnr, StrictlyDecreasesWithOffset) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> dist(0, 200);
    Frame a{16, 16, 0, std::vector<std::uint8_t>(256)};
    for (auto& v : a.luma) {
        v = static_cast<std::uint8_t>(dist(rng));
    }
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 55; ++k) {
        Frame b = a;
        for (auto& v : b.luma) {
            v = static_cast<std::uint8_t>(v + k);
        }
        const double db = psnr(a, b).db();
        EXPECT_LT(db, previous);
        previous = db;
    }
}

TEST(Ssim, IdentityIsExactlyOne) {
    std::mt19937_64 rng(1);
    for (std::uint32_t side : {8u, 13u, 64u}) {
        const auto a = random_frame(rng, side, side);
        EXPECT_EQ(ssim(a, a), 1.0);
        EXPECT_EQ(dissimilarity(a, a), 0.0);
    }
}

TEST(Ssim, ConstantBlackVsWhiteClosedForm) {
    const MetricConfig cfg;
    const auto a = constant_frame(16, 16, 0);
    const auto b = constant_frame(16, 16, 255);
    const double c1 = (0.01 * 255) * (0.01 * 255);
    const double c2 = (0.03 * 255) * (0.03 * 255);
    const double expected = (2 * 0 * 255 + c1) * c2 / ((0 + 255.0 * 255.0 + c1) * c2);
    EXPECT_NEAR(ssim(a, b, cfg), expected, 1e-15);
}

TEST(Ssim, MatchesBruteForceAcrossSizes) {
    std::mt19937_64 rng(21);
    for (std::uint32_t side : {8u, 16u, 64u}) {
        for (int i = 0; i < 20; ++i) {
            const auto a = random_frame(rng, side, side);
            const auto b = random_frame(rng, side, side);
            EXPECT_NEAR(ssim(a, b), oracle::ssim(a, b), 1e-6) << side;
        }
    }
}

TEST(Ssim, EdgeWindowsAreIncluded) {
    EXPECT_EQ(window_origins(64, 8, 4).back(), 56u);
    EXPECT_EQ(window_origins(13, 8, 4), (std::vector<std::uint32_t>{0, 4, 5}));
    EXPECT_EQ(window_origins(8, 8, 4), (std::vector<std::uint32_t>{0}));

    std::mt19937_64 rng(2);
    const auto a = random_frame(rng, 13, 11);
    const auto b = random_frame(rng, 13, 11);
    EXPECT_NEAR(ssim(a, b), oracle::ssim(a, b), 1e-9);
}

TEST(Ssim, SymmetricBitForBit) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
        const auto a = random_frame(rng, 24, 16);
        const auto b = random_frame(rng, 24, 16);
        EXPECT_EQ(ssim(a, b), ssim(b, a));
        EXPECT_EQ(dissimilarity(a, b), dissimilarity(b, a));
        EXPECT_EQ(psnr(a, b), psnr(b, a));
    }
}

TEST(Ssim, Errors) {
    const auto a = constant_frame(8, 8, 0);
    const auto b = constant_frame(16, 8, 0);
    EXPECT_THROW(ssim(a, b), Error);
    EXPECT_THROW(psnr(a, b), Error);
    MetricConfig big;
    big.window = 9;
    EXPECT_THROW(ssim(a, a, big), Error);
    MetricConfig zero;
    zero.stride = 0;
    EXPECT_THROW(ssim(a, a, zero), Error);
}

TEST(Dissimilarity, SynthCutRegression) {
    SynthSpec spec = cut_video(10, {5}, 128);
    const auto seq = synth_video(spec);
    const double d = dissimilarity(seq.frames[4], seq.frames[5]);
    // Frozen from an offline numpy evaluation; levels 32 -> 160 over the shared ramp texture.
    const double frozen = 1.0 - oracle::ssim(seq.frames[4], seq.frames[5]);
    EXPECT_GT(d, 0.2);
    EXPECT_NEAR(d, frozen, 1e-9);
    EXPECT_NEAR(d, 0.49768843202425206, 1e-9);
}

TEST(ConsecutiveMetrics, IndependentOfThreadCount) {
    std::mt19937_64 rng(8);
    FrameSequence seq;
    for (std::uint32_t t = 0; t < 40; ++t) {
        seq.frames.push_back(random_frame(rng, 32, 32, t));
    }
    setenv("KFF_THREADS", "1", 1);
    const auto serial = consecutive_metrics(seq);
    setenv("KFF_THREADS", "8", 1);
    const auto parallel = consecutive_metrics(seq);
    unsetenv("KFF_THREADS");
    ASSERT_EQ(serial.size(), 39u);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].ssim, parallel[i].ssim);
        EXPECT_EQ(serial[i].psnr, parallel[i].psnr);
        EXPECT_EQ(serial[i].ssim, ssim(seq.frames[i], seq.frames[i + 1]));
    }
}
