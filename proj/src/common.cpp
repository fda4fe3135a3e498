#include "robustdp/common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace robustdp {

std::uint64_t seed_for(std::uint64_t module_seed) {
  if (const char* env = std::getenv("ROBUSTDP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env) {
      // Mix so distinct modules keep distinct streams under an override.
      return static_cast<std::uint64_t>(v) * 0x9e3779b97f4a7c15ULL + module_seed;
    }
  }
  return module_seed;
}

std::mt19937_64 rng_for(std::uint64_t module_seed) {
  return std::mt19937_64(seed_for(module_seed));
}

std::string fmt_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kPosInf) return "inf";
  if (v == kNegInf) return "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kPosInf) return "inf";
  if (v == kNegInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace robustdp
