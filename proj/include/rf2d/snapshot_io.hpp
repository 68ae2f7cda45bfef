#pragma once

#include <filesystem>
#include <string>

#include "rf2d/surface.hpp"

namespace rf2d {

// Snapshot container: "RF2D" magic, u32 LE format version, one kind byte
// (0 torus, 1 sphere), u32 LE resolution, f64 LE time stamp, then the φ
// values as f64 LE in node order.
inline constexpr std::uint32_t kSnapshotFormatVersion = 1;

void write_snapshot(const std::filesystem::path& path, const ConformalSurface& s);

// Reads a snapshot; reuses `base` when it matches the stored kind/resolution,
// otherwise constructs the base surface.
ConformalSurface read_snapshot(const std::filesystem::path& path,
                               std::shared_ptr<const BaseSurface> base = nullptr);

// File name t_<microseconds>.rf2d used inside trajectory directories.
std::string snapshot_filename(double time_stamp);

}  // namespace rf2d
