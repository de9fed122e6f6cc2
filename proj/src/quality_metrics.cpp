// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/quality_metrics.hpp"

#include <cmath>
#include <cstdio>

#include "keytok/error.hpp"
#include "keytok/parallel.hpp"

namespace keytok {

namespace {

const std::string kModule = "quality_metrics";

void check_pair(const Frame& a, const Frame& b) {
    if (a.width != b.width || a.height != b.height) {
        throw Error(ErrorCode::DimensionMismatch, kModule,
                    "frame dimensions differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                        std::to_string(b.width) + "x" + std::to_string(b.height));
    }
    if (a.luma.size() != std::size_t{a.width} * a.height || b.luma.size() != a.luma.size()) {
        throw Error(ErrorCode::ShapeMismatch, kModule, "luma length does not match frame dimensions");
    }
}

}  // namespace

void validate(const MetricConfig& cfg) {
    if (cfg.window == 0 || cfg.stride == 0) {
        throw Error(ErrorCode::InvalidArgument, kModule, "window and stride must be >= 1");
    }
    if (!(cfg.dynamic_range > 0.0) || !std::isfinite(cfg.dynamic_range)) {
        throw Error(ErrorCode::InvalidArgument, kModule, "dynamic range must be positive");
    }
}

std::string Psnr::to_string() const {
    if (m_infinite) {
        return "inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", m_db);
    return buf;
}

double mse(const Frame& a, const Frame& b) {
    check_pair(a, b);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < a.luma.size(); ++i) {
        const int d = static_cast<int>(a.luma[i]) - static_cast<int>(b.luma[i]);
        sum += static_cast<std::uint64_t>(d * d);
    }
    return static_cast<double>(sum) / static_cast<double>(a.luma.size());
}

Psnr psnr(const Frame& a, const Frame& b, const MetricConfig& cfg) {
    validate(cfg);
    const double err = mse(a, b);
    if (err == 0.0) {
        return Psnr::infinite();
    }
    return Psnr::decibels(10.0 * std::log10(cfg.dynamic_range * cfg.dynamic_range / err));
}

std::vector<std::uint32_t> window_origins(std::uint32_t extent, std::uint32_t window, std::uint32_t stride) {
    std::vector<std::uint32_t> origins;
    if (window > extent || stride == 0) {
        return origins;
    }
    const std::uint32_t last = extent - window;
    for (std::uint32_t o = 0; o <= last; o += stride) {
        origins.push_back(o);
    }
    if (origins.back() != last) {
        origins.push_back(last);
    }
    return origins;
}

double ssim(const Frame& a, const Frame& b, const MetricConfig& cfg) {
    validate(cfg);
    check_pair(a, b);
    if (cfg.window > a.width || cfg.window > a.height) {
        throw Error(ErrorCode::InvalidArgument, kModule,
                    "window " + std::to_string(cfg.window) + " larger than frame " + std::to_string(a.width) + "x" +
                        std::to_string(a.height));
    }

    const auto xs = window_origins(a.width, cfg.window, cfg.stride);
    const auto ys = window_origins(a.height, cfg.window, cfg.stride);
    const std::int64_t n = std::int64_t{cfg.window} * cfg.window;
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double c1 = cfg.c1();
    const double c2 = cfg.c2();

    double total = 0.0;
    for (std::uint32_t y0 : ys) {
        for (std::uint32_t x0 : xs) {
            // Integer moments are exact, so swapping a and b is bit-identical.
            std::int64_t sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (std::uint32_t y = y0; y < y0 + cfg.window; ++y) {
                for (std::uint32_t x = x0; x < x0 + cfg.window; ++x) {
                    const std::int64_t va = a.at(x, y);
                    const std::int64_t vb = b.at(x, y);
                    sa += va;
                    sb += vb;
                    saa += va * va;
                    sbb += vb * vb;
                    sab += va * vb;
                }
            }
            const double mu_a = static_cast<double>(sa) / static_cast<double>(n);
            const double mu_b = static_cast<double>(sb) / static_cast<double>(n);
            const double var_a = static_cast<double>(n * saa - sa * sa) / n2;
            const double var_b = static_cast<double>(n * sbb - sb * sb) / n2;
            const double cov = static_cast<double>(n * sab - sa * sb) / n2;

            const double num = (2.0 * (mu_a * mu_b) + c1) * (2.0 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
        }
    }
    return total / static_cast<double>(xs.size() * ys.size());
}

double dissimilarity(const Frame& a, const Frame& b, const MetricConfig& cfg) {
    return 1.0 - ssim(a, b, cfg);
}

std::vector<PairMetrics> consecutive_metrics(const FrameSequence& seq, const MetricConfig& cfg) {
    validate(cfg);
    if (seq.size() < 2) {
        return {};
    }
    std::vector<PairMetrics> out(seq.size() - 1);
    parallel_for(out.size(), [&](std::size_t i) {
        const Frame& prev = seq.frames[i];
        const Frame& cur = seq.frames[i + 1];
        out[i] = PairMetrics{ssim(prev, cur, cfg), psnr(prev, cur, cfg)};
    });
    return out;
}

}  // namespace keytok
