// Copyright (C) 2026 The keytok Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace keytok {

/// Worker count for internal parallel loops: KFF_THREADS when set to a
/// positive integer, otherwise std::thread::hardware_concurrency().
std::size_t thread_count();

/// Runs body(i) for every i in [0, n). Each index is visited exactly once;
/// callers write results into per-index slots so output never depends on
/// scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace keytok
