#pragma once

// Binary field format "PFLD": magic bytes `PFLD`, u32 version (=1), u32 dim,
// u32 per-axis sizes, u32 components, f64 period per axis, then a payload of
// little-endian f64 in component-major / row-major order.

#include <filesystem>

#include "besovflow/grid.hpp"

namespace besovflow {

void write_field(const Field& f, const std::filesystem::path& path);

// Throws BadMagicError, DimensionMismatchError, or TruncatedPayloadError on
// the corresponding malformed inputs.
Field read_field(const std::filesystem::path& path);

}  // namespace besovflow
