// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#include "keytok/error.hpp"

namespace keytok {

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error("[" + module + "] " + message),
      m_code(code),
      m_module(std::move(module)) {}

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument:
        return "invalid argument";
    case ErrorCode::DimensionMismatch:
        return "dimension mismatch";
    case ErrorCode::BadMagic:
        return "bad magic";
    case ErrorCode::BadVersion:
        return "bad version";
    case ErrorCode::Truncated:
        return "truncated payload";
    case ErrorCode::TrailingData:
        return "trailing data";
    case ErrorCode::EmptyInput:
        return "empty input";
    case ErrorCode::ShapeMismatch:
        return "shape mismatch";
    case ErrorCode::MissingInput:
        return "missing input";
    case ErrorCode::Io:
        return "i/o error";
    }
    return "unknown";
}

}  // namespace keytok
