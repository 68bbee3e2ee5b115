#include "corrtrans/rng.hpp"

#include <cmath>
#include <numbers>

namespace corrtrans {

std::uint64_t Rng::uniform_index(std::uint64_t n) noexcept {
  // Lemire's multiply-shift; the residual bias is below 2^-64 * n.
  __extension__ using u128 = unsigned __int128;
  const u128 product = static_cast<u128>((*this)()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

double Rng::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace corrtrans
