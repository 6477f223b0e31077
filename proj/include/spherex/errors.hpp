#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spherex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or input validation failed (CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A term, matrix-entry or candidate cap would be exceeded (CLI exit code 3).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The instance admits no meaningful construction, e.g. a graph without
/// 4-cliques handed to the certificate builder (CLI exit code 4).
class DegenerateInstance : public Error {
 public:
  using Error::Error;
};

/// Size caps. Work grows like n^{O(q)}, so every allocation that scales with
/// it is checked against one of these first.
struct Limits {
  std::size_t max_terms = 10'000'000;
  std::size_t max_entries = 100'000'000;
  std::size_t max_candidates = 1'000'000;

  /// Library defaults; the SPHEREX_CAP environment variable overrides
  /// max_entries.
  static Limits defaults();
};

/// Throws CapacityError when requested > cap.
void check_capacity(std::size_t requested, std::size_t cap, const std::string& what);

/// n^k, throwing CapacityError once the result passes cap.
std::size_t checked_pow(std::size_t n, int k, std::size_t cap);

}  // namespace spherex
