#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gdl/problem.hpp"

namespace gdl {

using Cells = std::array<std::uint8_t, kMaxHeight>;

Packed pack(const std::uint8_t* v, int h, int bits);
void unpack(Packed s, int h, int bits, std::uint8_t* out);
Packed reflect(Packed s, int h, int bits);
inline Packed canonical(Packed s, int h, int bits) {
  Packed r = reflect(s, h, bits);
  return r < s ? r : s;
}

/// One column, bit-packed.
struct ColumnState {
  int height = 0;
  Packed packed = 0;
};

ColumnState make_state(const Problem& p, const std::vector<std::string>& labels);
std::vector<std::string> state_labels(const Problem& p, const ColumnState& s);

/// Valid column states in canonical (ascending packed) order.
class StateSet {
 public:
  StateSet() = default;
  StateSet(ProblemPtr problem, int height, Mode mode, bool pruned, std::vector<Packed> states);

  const Problem& problem() const { return *problem_; }
  const ProblemPtr& problem_ptr() const { return problem_; }
  int height() const { return height_; }
  Mode mode() const { return mode_; }
  bool pruned() const { return pruned_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Packed>& states() const { return states_; }
  Packed operator[](std::size_t i) const { return states_[i]; }
  /// Dense index, or -1.
  long long index_of(Packed s) const;
  void decode(std::size_t i, std::uint8_t* out) const;

  /// States grouped by history-in pattern; built on first use.
  const std::vector<std::uint32_t>& history_group(Packed pattern) const;

 private:
  ProblemPtr problem_;
  int height_ = 0;
  Mode mode_ = Mode::interior;
  bool pruned_ = false;
  std::vector<Packed> states_;
  mutable std::once_flag history_once_;
  mutable std::map<Packed, std::vector<std::uint32_t>> history_;
};

using StateSetPtr = std::shared_ptr<const StateSet>;

bool is_valid(const Problem& p, const std::uint8_t* col, int h, Mode m);
bool is_compatible(const Problem& p, const std::uint8_t* s, const std::uint8_t* s2, int h, Mode m);
bool is_first(const Problem& p, const std::uint8_t* col, int h, Mode m = Mode::interior);
bool is_end(const Problem& p, const std::uint8_t* col, int h, Mode m = Mode::interior);

bool is_compatible(const Problem& p, const ColumnState& s, const ColumnState& s2,
                   Mode m = Mode::interior);
bool is_first(const Problem& p, const ColumnState& s, Mode m = Mode::interior);
bool is_end(const Problem& p, const ColumnState& s, Mode m = Mode::interior);
ColumnState reflect(const Problem& p, const ColumnState& s);
ColumnState canonical(const Problem& p, const ColumnState& s);

/// Incremental DFS enumeration; parallel over search-tree roots.
StateSetPtr enumerate_states(const ProblemPtr& p, int h, Mode m, bool prune_symmetry);
/// Full product enumeration without prefix pruning (reference, small h only).
std::vector<Packed> enumerate_states_naive(const Problem& p, int h, Mode m);

/// Calls fn(col) for every column that may follow `prev` (constructive DFS).
void for_each_successor(const Problem& p, const std::uint8_t* prev, int h, Mode m,
                        const std::function<void(const std::uint8_t*)>& fn);

/// Sorted successor indices of state i (reflected onto representatives when pruned).
std::vector<std::uint32_t> successors(const StateSet& set, std::size_t i);

/// Prefilter superset of successors: history-shift match, or every state.
std::vector<std::uint32_t> successor_candidates(const StateSet& set, std::size_t i);
/// Reference successor list: candidates filtered by is_compatible.
std::vector<std::uint32_t> reference_successors(const StateSet& set, std::size_t i);

/// Directory for GDL1 state-cache files; empty disables the cache.
void set_state_cache_dir(const std::string& dir);
const std::string& state_cache_dir();
void write_state_cache(const std::string& path, const StateSet& set);
std::optional<std::vector<Packed>> read_state_cache(const std::string& path, const Problem& p,
                                                    int h, Mode m, bool pruned);
std::string state_cache_path(const std::string& dir, const Problem& p, int h, Mode m,
                             bool pruned);

}  // namespace gdl
