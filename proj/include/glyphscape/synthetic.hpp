// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>

#include "glyphscape/dataset.hpp"

namespace glyphscape {

/// Collider-style event table: dphi, mass, eg1, eg2, eta, pt, signal (0/1).
/// Generated from a fixed-algorithm PRNG so the same seed gives the same
/// table on every platform.
Dataset synthetic_events(std::size_t rows, std::uint64_t seed = 7);

/// Writes `data` as CSV with full round-trip precision.
void write_csv(std::ostream& out, const Dataset& data);

}  // namespace glyphscape
