#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace robustdp {

// Extended-real conventions. Payoffs live in R ∪ {-inf}; -inf is absorbing
// through sums, nonneg scaling and utility composition. IEEE -inf gives us
// exactly that, so no sentinel values anywhere.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double v) { return v == kNegInf; }

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed per-module sampling seeds (documented in the README). The environment
// variable ROBUSTDP_SEED shifts every stream at once while keeping them
// distinct from each other.
std::uint64_t seed_for(std::uint64_t module_seed);
std::mt19937_64 rng_for(std::uint64_t module_seed);

// Canonical float formatting: 17 significant digits, locale-independent.
std::string fmt_g17(double v);
// Short form for human-facing messages.
std::string fmt_short(double v);

}  // namespace robustdp
