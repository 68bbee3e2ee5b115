#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "corrtrans/render/integrator.hpp"

namespace corrtrans::render {

/// Binary P6, 8 bits, clamped and encoded with gamma 2.2. Each comment line
/// is written as "# <line>" in the header.
void write_ppm(std::ostream& out, const Image& img, const std::vector<std::string>& comments = {});

/// Little-endian PFM (scale -1), rows bottom to top, linear values.
void write_pfm(std::ostream& out, const Image& img);

/// Reads what write_pfm writes (little-endian color PFM). Throws std::runtime_error.
Image read_pfm(std::istream& in);

}  // namespace corrtrans::render
