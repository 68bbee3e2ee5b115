#include "corrtrans/voxel/volume_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

namespace corrtrans::voxel {

namespace {

constexpr char kMagic[5] = {'C', 'V', 'O', 'L', '1'};
constexpr char kEncoding[4] = {'F', '3', '2', 'L'};
constexpr std::uint64_t kMaxVoxels = 1ull << 31;

template <class U>
void put_le(std::ostream& out, U v) {
  std::array<char, sizeof(U)> b;
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

template <class U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

std::string at(const std::string& what, std::size_t offset) { return what + " at byte " + std::to_string(offset); }

}  // namespace

VolumeParseError::VolumeParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(at(what, offset)), offset_(offset) {}

void write_volume(std::ostream& out, const VoxelVolume& vol) {
  out.write(kMagic, sizeof kMagic);
  for (auto n : vol.dims()) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  for (int a = 0; a < 3; ++a) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(vol.bounds().lo[a]));
  for (int a = 0; a < 3; ++a) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(vol.bounds().hi[a]));
  out.write(kEncoding, sizeof kEncoding);
  for (double v : vol.values()) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

VoxelVolume read_volume(std::istream& in) {
  std::array<unsigned char, kVolumeHeaderSize> h{};
  in.read(reinterpret_cast<char*>(h.data()), h.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  for (std::size_t i = 0; i < sizeof kMagic; ++i) {
    if (i >= got) throw VolumeParseError("truncated magic", got);
    if (h[i] != static_cast<unsigned char>(kMagic[i])) throw VolumeParseError("bad magic (expected CVOL1)", i);
  }
  if (got < kVolumeHeaderSize) throw VolumeParseError("truncated header", got);

  Dims dims{};
  std::uint64_t count = 1;
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t off = 5 + 4 * a;
    dims[a] = get_le<std::uint32_t>(h.data() + off);
    if (dims[a] == 0) throw VolumeParseError("zero dimension", off);
    count *= dims[a];
    if (count > kMaxVoxels) throw VolumeParseError("volume too large", off);
  }
  Bounds b;
  for (int a = 0; a < 3; ++a) {
    b.lo[a] = std::bit_cast<double>(get_le<std::uint64_t>(h.data() + 17 + 8 * a));
    b.hi[a] = std::bit_cast<double>(get_le<std::uint64_t>(h.data() + 41 + 8 * a));
  }
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(b.lo[a]) || !std::isfinite(b.hi[a]) || !(b.hi[a] > b.lo[a])) {
      throw VolumeParseError("invalid bounds", 17 + 8 * static_cast<std::size_t>(a));
    }
  }
  if (std::memcmp(h.data() + 65, kEncoding, sizeof kEncoding) != 0) {
    throw VolumeParseError("unsupported value encoding (expected F32L)", 65);
  }

  VoxelVolume vol(dims, b);
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  const auto data_got = static_cast<std::size_t>(in.gcount());
  if (data_got < raw.size()) throw VolumeParseError("truncated voxel data", kVolumeHeaderSize + data_got);
  auto& v = vol.values();
  for (std::size_t i = 0; i < count; ++i) {
    const double x = std::bit_cast<float>(get_le<std::uint32_t>(raw.data() + 4 * i));
    if (!std::isfinite(x) || x < 0.0) throw VolumeParseError("voxel value not finite and nonnegative", kVolumeHeaderSize + 4 * i);
    v[i] = x;
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw VolumeParseError("trailing bytes after voxel data", kVolumeHeaderSize + raw.size());
  }
  return vol;
}

}  // namespace corrtrans::voxel
