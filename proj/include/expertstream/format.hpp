#pragma once

#include <cstdio>
#include <string>

namespace expertstream {

// Shortest round-trippable-enough float form used by every CSV writer; 9
// significant digits keeps reruns byte-identical without printing noise.
inline std::string fmt_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::string(buf);
}

}  // namespace expertstream
