#pragma once

#include <cstdint>
#include <cstdlib>

// Randomized checks draw from this seed; KAKEYA_SEED overrides the default 0.
inline std::uint64_t test_seed() {
  const char* s = std::getenv("KAKEYA_SEED");
  return s ? std::strtoull(s, nullptr, 10) : 0;
}
