// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "keytok/media_io.hpp"

namespace keytok {

struct MetricConfig {
    std::uint32_t window = 8;
    std::uint32_t stride = 4;
    double dynamic_range = 255.0;

    double c1() const { return (0.01 * dynamic_range) * (0.01 * dynamic_range); }
    double c2() const { return (0.03 * dynamic_range) * (0.03 * dynamic_range); }
};

void validate(const MetricConfig& cfg);

/// PSNR in decibels with an explicit +inf state for identical inputs.
class Psnr {
public:
    static Psnr infinite() { return Psnr(0.0, true); }
    static Psnr decibels(double db) { return Psnr(db, false); }

    bool is_infinite() const noexcept { return m_infinite; }
    /// Finite value; only meaningful when !is_infinite().
    double db() const noexcept { return m_db; }

    /// "inf" or the value with 17 significant digits.
    std::string to_string() const;

    bool operator==(const Psnr&) const = default;

private:
    Psnr(double db, bool infinite) : m_db(db), m_infinite(infinite) {}

    double m_db;
    bool m_infinite;
};

/// Mean squared sample difference.
double mse(const Frame& a, const Frame& b);

Psnr psnr(const Frame& a, const Frame& b, const MetricConfig& cfg = {});

/// Mean SSIM over uniform square windows placed every `stride` pixels, plus
/// a right/bottom aligned window when the stride grid leaves the edge
/// uncovered. Statistics use population (divide-by-n) moments.
double ssim(const Frame& a, const Frame& b, const MetricConfig& cfg = {});

/// 1 - ssim(a, b); in [0, 2].
double dissimilarity(const Frame& a, const Frame& b, const MetricConfig& cfg = {});

/// Window origins along one axis of length `extent`.
std::vector<std::uint32_t> window_origins(std::uint32_t extent, std::uint32_t window, std::uint32_t stride);

struct PairMetrics {
    double ssim = 1.0;
    Psnr psnr = Psnr::infinite();
};

/// Metrics for every consecutive pair (t-1, t), t = 1..T-1, evaluated in
/// parallel. Element i describes the pair (i, i+1).
std::vector<PairMetrics> consecutive_metrics(const FrameSequence& seq, const MetricConfig& cfg = {});

}  // namespace keytok
