#include "spherex/errors.hpp"

#include <cstdlib>
#include <string>

namespace spherex {

Limits Limits::defaults() {
  Limits limits;
  if (const char* env = std::getenv("SPHEREX_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || cap == 0) {
      throw InvalidArgument("SPHEREX_CAP must be a positive integer, got '" + std::string(env) + "'");
    }
    limits.max_entries = static_cast<std::size_t>(cap);
  }
  return limits;
}

void check_capacity(std::size_t requested, std::size_t cap, const std::string& what) {
  if (requested > cap) {
    throw CapacityError(what + ": " + std::to_string(requested) + " exceeds cap " +
                        std::to_string(cap));
  }
}

std::size_t checked_pow(std::size_t n, int k, std::size_t cap) {
  std::size_t out = 1;
  for (int i = 0; i < k; ++i) {
    if (n != 0 && out > cap / n) {
      throw CapacityError("n^k = " + std::to_string(n) + "^" + std::to_string(k) +
                          " exceeds cap " + std::to_string(cap));
    }
    out *= n;
  }
  return out;
}

}  // namespace spherex
