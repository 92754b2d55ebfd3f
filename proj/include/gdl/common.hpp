#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gdl {

/// Bit-packed column; cell i lives at bits [i*w, (i+1)*w).
using Packed = unsigned __int128;

constexpr int kMaxHeight = 32;

enum class Mode : std::uint8_t { interior, band, relaxed };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownProblem : Error { using Error::Error; };
struct CapacityExceeded : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct NotFound : Error { using Error::Error; };
struct NotPrimitive : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DimensionTooSmall : Error { using Error::Error; };
struct OutOfTable : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct InsufficientInitialValues : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };

/// Worker count used by every parallel kernel.
int num_threads();
void set_num_threads(int n);

/// Upper limit on enumerated states / stored entries.
struct Budget {
  std::size_t max_states = 40'000'000;
  std::size_t max_entries = 400'000'000;
  std::size_t max_dense_dim = 6000;
};
Budget& budget();

}  // namespace gdl
