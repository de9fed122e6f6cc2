// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace keytok::binary {

/// Little-endian append-only byte buffer.
class Writer {
public:
    void magic(std::string_view four_cc);
    void u8(std::uint8_t v);
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void f32(float v);
    void f32s(std::span<const float> values);
    void bytes(std::span<const std::uint8_t> data);

    const std::vector<std::uint8_t>& data() const noexcept { return m_buf; }
    std::vector<std::uint8_t> take() noexcept { return std::move(m_buf); }

private:
    std::vector<std::uint8_t> m_buf;
};

/// Little-endian cursor over an immutable byte buffer. Every read is bounds
/// checked; running off the end raises ErrorCode::Truncated tagged with the
/// owning module.
class Reader {
public:
    Reader(std::span<const std::uint8_t> data, std::string module);

    void expect_magic(std::string_view four_cc);
    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    float f32();
    void f32s(std::span<float> out);
    std::span<const std::uint8_t> bytes(std::size_t n);

    std::size_t remaining() const noexcept { return m_data.size() - m_pos; }
    /// Throws ErrorCode::Truncated unless at least n bytes remain.
    void require(std::size_t n, std::string_view what) const;
    /// Throws ErrorCode::TrailingData unless the buffer is exhausted.
    void expect_end() const;

private:
    std::span<const std::uint8_t> m_data;
    std::size_t m_pos = 0;
    std::string m_module;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path, const std::string& module);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data, const std::string& module);

}  // namespace keytok::binary
