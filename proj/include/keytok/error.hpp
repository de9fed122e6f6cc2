// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace keytok {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    BadMagic,
    BadVersion,
    Truncated,
    TrailingData,
    EmptyInput,
    ShapeMismatch,
    MissingInput,
    Io,
};

/// Exception carrying a machine-checkable code plus the module that raised it.
/// what() is formatted as "[module] message".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& message);

    ErrorCode code() const noexcept { return m_code; }
    const std::string& module() const noexcept { return m_module; }

private:
    ErrorCode m_code;
    std::string m_module;
};

const char* to_string(ErrorCode code);

}  // namespace keytok
