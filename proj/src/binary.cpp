// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/binary.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "keytok/error.hpp"

namespace keytok::binary {

void Writer::magic(std::string_view four_cc) {
    m_buf.insert(m_buf.end(), four_cc.begin(), four_cc.end());
}

void Writer::u8(std::uint8_t v) {
    m_buf.push_back(v);
}

void Writer::u16(std::uint16_t v) {
    m_buf.push_back(static_cast<std::uint8_t>(v));
    m_buf.push_back(static_cast<std::uint8_t>(v >> 8));
}

void Writer::u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        m_buf.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void Writer::f32(float v) {
    u32(std::bit_cast<std::uint32_t>(v));
}

void Writer::f32s(std::span<const float> values) {
    m_buf.reserve(m_buf.size() + values.size() * 4);
    for (float v : values) {
        f32(v);
    }
}

void Writer::bytes(std::span<const std::uint8_t> data) {
    m_buf.insert(m_buf.end(), data.begin(), data.end());
}

Reader::Reader(std::span<const std::uint8_t> data, std::string module)
    : m_data(data),
      m_module(std::move(module)) {}

void Reader::require(std::size_t n, std::string_view what) const {
    if (remaining() < n) {
        throw Error(ErrorCode::Truncated, m_module,
                    "truncated payload reading " + std::string(what) + ": need " + std::to_string(n) +
                        " bytes, have " + std::to_string(remaining()));
    }
}

void Reader::expect_magic(std::string_view four_cc) {
    require(four_cc.size(), "magic");
    if (std::memcmp(m_data.data() + m_pos, four_cc.data(), four_cc.size()) != 0) {
        throw Error(ErrorCode::BadMagic, m_module, "bad magic, expected \"" + std::string(four_cc) + "\"");
    }
    m_pos += four_cc.size();
}

std::uint8_t Reader::u8() {
    require(1, "u8");
    return m_data[m_pos++];
}

std::uint16_t Reader::u16() {
    require(2, "u16");
    auto v = static_cast<std::uint16_t>(m_data[m_pos] | (m_data[m_pos + 1] << 8));
    m_pos += 2;
    return v;
}

std::uint32_t Reader::u32() {
    require(4, "u32");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | m_data[m_pos + static_cast<std::size_t>(i)];
    }
    m_pos += 4;
    return v;
}

float Reader::f32() {
    return std::bit_cast<float>(u32());
}

void Reader::f32s(std::span<float> out) {
    require(out.size() * 4, "f32 payload");
    for (float& v : out) {
        v = f32();
    }
}

std::span<const std::uint8_t> Reader::bytes(std::size_t n) {
    require(n, "byte payload");
    auto s = m_data.subspan(m_pos, n);
    m_pos += n;
    return s;
}

void Reader::expect_end() const {
    if (remaining() != 0) {
        throw Error(ErrorCode::TrailingData, m_module,
                    std::to_string(remaining()) + " unexpected trailing bytes");
    }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path, const std::string& module) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, module, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorCode::Io, module, "read failed: " + path.string());
    }
    return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data, const std::string& module) {
    if (path.empty()) {
        throw Error(ErrorCode::Io, module, "empty output path");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, module, "cannot open for writing: " + path.string());
    }
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw Error(ErrorCode::Io, module, "write failed: " + path.string());
    }
}

}  // namespace keytok::binary
