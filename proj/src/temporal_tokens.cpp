// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/temporal_tokens.hpp"

#include <optional>

#include "keytok/binary.hpp"
#include "keytok/error.hpp"
#include "keytok/splitmix64.hpp"

namespace keytok {

namespace {

const std::string kModule = "temporal_tokens";
constexpr std::string_view kMagic = "KFVW";
constexpr std::uint16_t kVersion = 1;
constexpr std::uint8_t kLayerCount = 1;

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
    throw Error(code, kModule, message);
}

void check(const Projector& p) {
    if (p.weights.size() != std::size_t{p.dim} * p.dim || p.bias.size() != p.dim) {
        fail(ErrorCode::ShapeMismatch, "projector weights must be dim x dim with dim biases");
    }
}

void check(const TemporalTable& t) {
    if (t.bins == 0 || t.dim == 0) {
        fail(ErrorCode::InvalidArgument, "temporal table needs bins >= 1 and dim >= 1");
    }
    if (t.values.size() != std::size_t{t.bins} * t.dim) {
        fail(ErrorCode::ShapeMismatch, "temporal table payload does not match bins x dim");
    }
}

}  // namespace

std::span<const float> TemporalTable::row(std::uint32_t bin) const {
    if (bin >= bins) {
        fail(ErrorCode::InvalidArgument, "bin " + std::to_string(bin) + " >= " + std::to_string(bins));
    }
    return std::span<const float>(values).subspan(std::size_t{bin} * dim, dim);
}

Projector Projector::identity(ProjectorRole role, std::uint32_t dim) {
    Projector p{role, dim, std::vector<float>(std::size_t{dim} * dim, 0.0f), std::vector<float>(dim, 0.0f)};
    for (std::uint32_t i = 0; i < dim; ++i) {
        p.weights[std::size_t{i} * dim + i] = 1.0f;
    }
    return p;
}

std::uint32_t temporal_bin(std::uint32_t frame, std::uint32_t total_frames, std::uint32_t bins) {
    if (bins == 0) {
        fail(ErrorCode::InvalidArgument, "temporal bin count must be >= 1");
    }
    if (frame >= total_frames) {
        fail(ErrorCode::InvalidArgument,
             "frame " + std::to_string(frame) + " outside video of " + std::to_string(total_frames) + " frames");
    }
    return static_cast<std::uint32_t>(std::uint64_t{bins} * frame / total_frames);
}

TemporalTable init_table(std::uint64_t seed, std::uint32_t bins, std::uint32_t dim) {
    if (bins == 0 || dim == 0) {
        fail(ErrorCode::InvalidArgument, "temporal table needs bins >= 1 and dim >= 1");
    }
    TemporalTable table{bins, dim, std::vector<float>(std::size_t{bins} * dim)};
    SplitMix64 rng(seed);
    for (float& v : table.values) {
        const std::uint64_t top = rng.next() >> 40;
        v = static_cast<float>(static_cast<double>(top) / 16777216.0 * 0.04 - 0.02);
    }
    return table;
}

std::vector<float> project(const Projector& p, std::span<const float> v) {
    check(p);
    if (v.size() != p.dim) {
        fail(ErrorCode::DimensionMismatch,
             "projector dim " + std::to_string(p.dim) + " vs vector dim " + std::to_string(v.size()));
    }
    std::vector<float> out(p.dim);
    for (std::uint32_t i = 0; i < p.dim; ++i) {
        double acc = p.bias[i];
        const float* row = p.weights.data() + std::size_t{i} * p.dim;
        for (std::uint32_t j = 0; j < p.dim; ++j) {
            acc += static_cast<double>(row[j]) * v[j];
        }
        out[i] = static_cast<float>(acc);
    }
    return out;
}

TemporalWeights default_weights(std::uint64_t seed, std::uint32_t bins, std::uint32_t dim) {
    return TemporalWeights{init_table(seed, bins, dim), Projector::identity(ProjectorRole::Intra, dim),
                           Projector::identity(ProjectorRole::Inter, dim)};
}

std::vector<std::uint8_t> encode_weights(const TemporalWeights& weights) {
    check(weights.table);
    binary::Writer w;
    w.magic(kMagic);
    w.u16(kVersion);
    w.u32(weights.table.bins);
    w.u32(weights.table.dim);
    w.f32s(weights.table.values);
    for (const Projector* p : {&weights.intra, &weights.inter}) {
        check(*p);
        if (p->dim != weights.table.dim) {
            fail(ErrorCode::ShapeMismatch, "projector dim differs from table dim");
        }
        w.u8(static_cast<std::uint8_t>(p->role));
        w.u8(kLayerCount);
        w.f32s(p->weights);
        w.f32s(p->bias);
    }
    return w.take();
}

TemporalWeights decode_weights(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes, kModule);
    r.expect_magic(kMagic);
    if (auto v = r.u16(); v != kVersion) {
        fail(ErrorCode::BadVersion, "unsupported weight container version " + std::to_string(v));
    }
    TemporalWeights out;
    out.table.bins = r.u32();
    out.table.dim = r.u32();
    if (out.table.bins == 0 || out.table.dim == 0) {
        fail(ErrorCode::InvalidArgument, "weight container declares an empty table");
    }
    const std::uint64_t table_floats = std::uint64_t{out.table.bins} * out.table.dim;
    r.require(table_floats * 4, "temporal table");
    out.table.values.resize(table_floats);
    r.f32s(out.table.values);

    const std::uint32_t dim = out.table.dim;
    std::optional<Projector> intra, inter;
    for (int i = 0; i < 2; ++i) {
        const auto role = r.u8();
        if (role > 1) {
            fail(ErrorCode::InvalidArgument, "unknown projector role " + std::to_string(role));
        }
        if (auto layers = r.u8(); layers != kLayerCount) {
            fail(ErrorCode::InvalidArgument, "projector layer count " + std::to_string(layers) + " unsupported");
        }
        Projector p{static_cast<ProjectorRole>(role), dim, std::vector<float>(std::size_t{dim} * dim),
                    std::vector<float>(dim)};
        r.require((p.weights.size() + p.bias.size()) * 4, "projector payload");
        r.f32s(p.weights);
        r.f32s(p.bias);
        auto& slot = p.role == ProjectorRole::Intra ? intra : inter;
        if (slot) {
            fail(ErrorCode::InvalidArgument, "duplicate projector role");
        }
        slot = std::move(p);
    }
    r.expect_end();
    out.intra = std::move(*intra);
    out.inter = std::move(*inter);
    return out;
}

void write_weights(const TemporalWeights& weights, const std::filesystem::path& path) {
    binary::write_file(path, encode_weights(weights), kModule);
}

TemporalWeights load_weights(const std::filesystem::path& path, std::uint32_t bins, std::uint32_t dim,
                             std::uint64_t seed) {
    if (path.empty() || !std::filesystem::exists(path)) {
        return default_weights(seed, bins, dim);
    }
    auto weights = decode_weights(binary::read_file(path, kModule));
    if (weights.table.bins != bins || weights.table.dim != dim) {
        fail(ErrorCode::ShapeMismatch, "weights are " + std::to_string(weights.table.bins) + "x" +
                                           std::to_string(weights.table.dim) + ", configured " +
                                           std::to_string(bins) + "x" + std::to_string(dim));
    }
    return weights;
}

}  // namespace keytok
