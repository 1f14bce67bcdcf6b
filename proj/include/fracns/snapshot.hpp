#pragma once

#include "fracns/spectral_field.hpp"

#include <filesystem>
#include <iosfwd>

namespace fracns {

/// Field snapshot file, all integers and floats little-endian:
///
///   offset  size  content
///        0     8  magic "FRNSSNP1"
///        8     4  u32 dim
///       12     4  u32 N (resolution)
///       16     8  f64 alpha tag
///       24     8  f64 time
///       32     8  u64 entry count (= N^dim)
///       40     .  entries, each dim x i32 wavevector then dim x (f64 re, f64 im)
///
/// Entries appear in the grid's storage order. Every mode is written, so a
/// load/store round trip reproduces the coefficients bit for bit.
struct Snapshot {
  SpectralFieldd field;
  double alpha_tag = 0.0;
  double time = 0.0;
};

void write_snapshot(std::ostream& os, const Snapshot& snapshot);
Snapshot read_snapshot(std::istream& is);

void save_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace fracns
