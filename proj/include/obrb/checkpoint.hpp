#pragma once

#include <string>

#include "obrb/state.hpp"

namespace obrb {

/// Binary state snapshot. Format: magic "OBRB0001", then little-endian 64-bit
/// header fields (nx, ny as integers; lx, ly, t as doubles; step as integer),
/// then the Theta, ux, uy arrays row-major as 64-bit floats. Round trips are
/// bit exact.
void checkpoint_write(const SimState &state, const std::string &path);

/// Reads a checkpoint; throws io_error on magic mismatch or truncation. When
/// expected is non-null the stored grid must match and a mismatch names both
/// grids.
SimState checkpoint_read(const std::string &path, const Grid *expected = nullptr);

} // namespace obrb
