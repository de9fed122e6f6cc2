// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations used only by tests. Nothing here calls
// into the library's numeric paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "keytok/media_io.hpp"

namespace keytok::oracle {

inline double mse(const Frame& a, const Frame& b) {
    double acc = 0.0;
    for (std::uint32_t y = 0; y < a.height; ++y) {
        for (std::uint32_t x = 0; x < a.width; ++x) {
            const double d = double(a.luma[y * a.width + x]) - double(b.luma[y * b.width + x]);
            acc += d * d;
        }
    }
    return acc / (double(a.width) * a.height);
}

inline double psnr(const Frame& a, const Frame& b, double range = 255.0) {
    return 10.0 * std::log10(range * range / oracle::mse(a, b));
}

inline std::vector<std::uint32_t> origins(std::uint32_t extent, std::uint32_t window, std::uint32_t stride) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t o = 0; o + window <= extent; o += stride) {
        out.push_back(o);
    }
    if ((extent - window) % stride != 0) {
        out.push_back(extent - window);
    }
    return out;
}

/// Two-pass windowed SSIM in double.
inline double ssim(const Frame& a, const Frame& b, std::uint32_t window = 8, std::uint32_t stride = 4,
                   double range = 255.0) {
    const double c1 = std::pow(0.01 * range, 2);
    const double c2 = std::pow(0.03 * range, 2);
    double total = 0.0;
    int windows = 0;
    for (std::uint32_t y0 : origins(a.height, window, stride)) {
        for (std::uint32_t x0 : origins(a.width, window, stride)) {
            const double n = double(window) * window;
            double ma = 0, mb = 0;
            for (std::uint32_t y = y0; y < y0 + window; ++y) {
                for (std::uint32_t x = x0; x < x0 + window; ++x) {
                    ma += a.luma[y * a.width + x];
                    mb += b.luma[y * b.width + x];
                }
            }
            ma /= n;
            mb /= n;
            double va = 0, vb = 0, cov = 0;
            for (std::uint32_t y = y0; y < y0 + window; ++y) {
                for (std::uint32_t x = x0; x < x0 + window; ++x) {
                    const double da = a.luma[y * a.width + x] - ma;
                    const double db = b.luma[y * b.width + x] - mb;
                    va += da * da;
                    vb += db * db;
                    cov += da * db;
                }
            }
            va /= n;
            vb /= n;
            cov /= n;
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++windows;
        }
    }
    return total / windows;
}

/// Keyframe rule applied literally to a precomputed dissimilarity list.
inline std::vector<std::uint32_t> iframes(const std::vector<double>& dissim, double tau, std::uint32_t gop_max,
                                          std::uint32_t min_gap) {
    std::vector<std::uint32_t> out{0};
    for (std::uint32_t t = 1; t <= dissim.size(); ++t) {
        const std::uint32_t since = t - out.back();
        if ((dissim[t - 1] > tau && since >= min_gap) || since >= gop_max) {
            out.push_back(t);
        }
    }
    return out;
}

struct GapResult {
    std::vector<std::uint32_t> counts;          // floor(T_k / (delta T)) per gap
    std::set<std::uint32_t> compensation;       // placed, de-duplicated
};

/// Gap-by-gap placement with delta given exactly as num/den.
inline GapResult compensation(const std::vector<std::uint32_t>& ifr, std::uint32_t total, std::uint64_t delta_num,
                              std::uint64_t delta_den) {
    GapResult r;
    std::set<std::uint32_t> taken(ifr.begin(), ifr.end());
    for (std::size_t i = 0; i < ifr.size(); ++i) {
        const std::uint64_t a = ifr[i];
        const std::uint64_t b = i + 1 < ifr.size() ? ifr[i + 1] : total;
        const std::uint64_t gap = b - a;
        // T_k / (delta T) = T_k * den / (num * T)
        const std::uint64_t n = gap * delta_den / (delta_num * total);
        r.counts.push_back(static_cast<std::uint32_t>(n));
        for (std::uint64_t j = 1; j <= n; ++j) {
            const auto t = static_cast<std::uint32_t>(a + j * gap / (n + 1));
            if (!taken.count(t)) {
                taken.insert(t);
                r.compensation.insert(t);
            }
        }
    }
    return r;
}

/// Per-block mean of an r x c x C grid, accumulated in long double.
inline std::vector<double> block_means(const std::vector<float>& grid, std::uint32_t rows, std::uint32_t cols,
                                       std::uint32_t dim, std::uint32_t d) {
    std::vector<double> out;
    for (std::uint32_t R = 0; R < rows / d; ++R) {
        for (std::uint32_t C = 0; C < cols / d; ++C) {
            for (std::uint32_t ch = 0; ch < dim; ++ch) {
                long double acc = 0;
                for (std::uint32_t r = R * d; r < (R + 1) * d; ++r) {
                    for (std::uint32_t c = C * d; c < (C + 1) * d; ++c) {
                        acc += grid[(std::size_t(r) * cols + c) * dim + ch];
                    }
                }
                out.push_back(double(acc / (d * d)));
            }
        }
    }
    return out;
}

/// Closed-form sequence length for frames at ratios `ds` over an N = r x r grid.
inline std::uint64_t layout_tokens(const std::vector<std::uint32_t>& ds, std::uint32_t rows, std::uint32_t cols) {
    std::uint64_t total = 0;
    for (auto d : ds) {
        total += std::uint64_t(rows * cols) / (d * d) + rows / d + 1;
    }
    return total;
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    long double dot = 0, uu = 0, vv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += (long double)u[i] * v[i];
        uu += (long double)u[i] * u[i];
        vv += (long double)v[i] * v[i];
    }
    return double(dot / std::sqrt(uu * vv));
}

}  // namespace keytok::oracle
