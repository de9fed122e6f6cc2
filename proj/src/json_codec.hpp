// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include "keytok/keyframing.hpp"

namespace keytok::detail {

using Json = nlohmann::ordered_json;

Json plan_to_value(const KeyframePlan& plan);
KeyframePlan plan_from_value(const Json& value);

/// Parses text, rethrowing syntax errors as keytok::Error for `module`.
Json parse_json(const std::string& text, const std::string& module);

}  // namespace keytok::detail
