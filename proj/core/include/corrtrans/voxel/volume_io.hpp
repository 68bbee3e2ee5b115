#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "corrtrans/voxel/volume.hpp"

namespace corrtrans::voxel {

// CVOL1 layout, all little-endian:
//   0  "CVOL1"
//   5  nx, ny, nz            uint32
//  17  lo.xyz, hi.xyz        float64
//  65  "F32L"                value encoding tag
//  69  nx*ny*nz values       float32, x fastest
inline constexpr std::size_t kVolumeHeaderSize = 69;

class VolumeParseError : public std::runtime_error {
public:
  VolumeParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Values are narrowed to float32.
void write_volume(std::ostream& out, const VoxelVolume& vol);

/// Throws VolumeParseError naming the byte offset of the first problem.
VoxelVolume read_volume(std::istream& in);

}  // namespace corrtrans::voxel
