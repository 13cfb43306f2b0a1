#pragma once

#include <cmath>
#include <cstddef>

namespace expertstream::detail {

// Ceil/floor that forgive sub-1e-9 float noise at integer boundaries, so
// closed-form sizes like 16384/204.8 = 80 land exactly.
inline double snap(double x) {
  const double r = std::nearbyint(x);
  return (std::abs(x - r) < 1e-9) ? r : x;
}

inline std::size_t ceil_snapped(double x) {
  return static_cast<std::size_t>(std::ceil(snap(x)));
}

inline std::size_t floor_snapped(double x) {
  return static_cast<std::size_t>(std::floor(snap(x)));
}

}  // namespace expertstream::detail
