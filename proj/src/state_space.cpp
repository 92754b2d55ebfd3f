#include "gdl/state_space.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gdl {

Packed pack(const std::uint8_t* v, int h, int bits) {
  Packed s = 0;
  for (int i = h - 1; i >= 0; --i) s = (s << bits) | v[i];
  return s;
}

void unpack(Packed s, int h, int bits, std::uint8_t* out) {
  const Packed mask = (Packed(1) << bits) - 1;
  for (int i = 0; i < h; ++i) {
    out[i] = static_cast<std::uint8_t>(s & mask);
    s >>= bits;
  }
}

Packed reflect(Packed s, int h, int bits) {
  const Packed mask = (Packed(1) << bits) - 1;
  Packed r = 0;
  for (int i = 0; i < h; ++i) {
    r = (r << bits) | (s & mask);
    s >>= bits;
  }
  return r;
}

ColumnState make_state(const Problem& p, const std::vector<std::string>& labels) {
  Cells c{};
  int h = static_cast<int>(labels.size());
  if (h < 1 || h > kMaxHeight) throw CapacityExceeded("height out of range");
  for (int i = 0; i < h; ++i) {
    int id = p.value_id(labels[i]);
    if (id < 0) throw Error("unknown cell value " + labels[i]);
    c[i] = static_cast<std::uint8_t>(id);
  }
  return {h, pack(c.data(), h, p.bits())};
}

std::vector<std::string> state_labels(const Problem& p, const ColumnState& s) {
  Cells c{};
  unpack(s.packed, s.height, p.bits(), c.data());
  std::vector<std::string> out;
  for (int i = 0; i < s.height; ++i) out.push_back(p.all_labels()[c[i]]);
  return out;
}

StateSet::StateSet(ProblemPtr problem, int height, Mode mode, bool pruned,
                   std::vector<Packed> states)
    : problem_(std::move(problem)),
      height_(height),
      mode_(mode),
      pruned_(pruned),
      states_(std::move(states)) {}

long long StateSet::index_of(Packed s) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return -1;
  return it - states_.begin();
}

void StateSet::decode(std::size_t i, std::uint8_t* out) const {
  unpack(states_[i], height_, problem_->bits(), out);
}

namespace {

Packed history_pattern(const Problem& p, const std::uint8_t* col, int h, bool out) {
  Packed key = 0;
  for (int i = h - 1; i >= 0; --i)
    key = (key << p.history_bits()) | (out ? p.history_out(col[i]) : p.history_in(col[i]));
  return key;
}

}  // namespace

const std::vector<std::uint32_t>& StateSet::history_group(Packed pattern) const {
  std::call_once(history_once_, [this] {
    Cells c{};
    for (std::size_t i = 0; i < states_.size(); ++i) {
      decode(i, c.data());
      history_[history_pattern(*problem_, c.data(), height_, false)].push_back(
          static_cast<std::uint32_t>(i));
    }
  });
  static const std::vector<std::uint32_t> empty;
  auto it = history_.find(pattern);
  return it == history_.end() ? empty : it->second;
}

bool is_valid(const Problem& p, const std::uint8_t* col, int h, Mode m) {
  for (int i = 0; i < h; ++i) {
    if (col[i] >= p.value_count(m)) return false;
    if (!p.cell_valid(col, h, i, m)) return false;
  }
  return true;
}

bool is_compatible(const Problem& p, const std::uint8_t* s, const std::uint8_t* s2, int h,
                   Mode m) {
  for (int i = 0; i < h; ++i)
    if (!p.cell_compat(s, s2, h, i, m)) return false;
  return is_valid(p, s2, h, m);
}

bool is_first(const Problem& p, const std::uint8_t* col, int h, Mode m) {
  for (int i = 0; i < h; ++i)
    if (!p.cell_first(col, h, i, m)) return false;
  return true;
}

bool is_end(const Problem& p, const std::uint8_t* col, int h, Mode m) {
  for (int i = 0; i < h; ++i)
    if (!p.cell_end(col, h, i, m)) return false;
  return true;
}

bool is_compatible(const Problem& p, const ColumnState& s, const ColumnState& s2, Mode m) {
  if (s.height != s2.height) return false;
  Cells a{}, b{};
  unpack(s.packed, s.height, p.bits(), a.data());
  unpack(s2.packed, s2.height, p.bits(), b.data());
  return is_valid(p, a.data(), s.height, m) && is_compatible(p, a.data(), b.data(), s.height, m);
}

bool is_first(const Problem& p, const ColumnState& s, Mode m) {
  Cells a{};
  unpack(s.packed, s.height, p.bits(), a.data());
  return is_valid(p, a.data(), s.height, m) && is_first(p, a.data(), s.height, m);
}

bool is_end(const Problem& p, const ColumnState& s, Mode m) {
  Cells a{};
  unpack(s.packed, s.height, p.bits(), a.data());
  return is_valid(p, a.data(), s.height, m) && is_end(p, a.data(), s.height, m);
}

ColumnState reflect(const Problem& p, const ColumnState& s) {
  return {s.height, reflect(s.packed, s.height, p.bits())};
}

ColumnState canonical(const Problem& p, const ColumnState& s) {
  return {s.height, canonical(s.packed, s.height, p.bits())};
}

namespace {

struct Enumerator {
  const Problem& p;
  int h;
  Mode mode;
  bool prune;
  int values;
  int radius;
  std::vector<Packed>* out;
  std::atomic<std::size_t>* total;
  Cells col{};

  void run(int k) {
    if (k == h) {
      for (int i = std::max(0, h - radius); i < h; ++i)
        if (!p.cell_valid(col.data(), h, i, mode)) return;
      Packed s = pack(col.data(), h, p.bits());
      if (prune && reflect(s, h, p.bits()) < s) return;
      out->push_back(s);
      if (total->fetch_add(1, std::memory_order_relaxed) + 1 > budget().max_states)
        throw CapacityExceeded("state budget exceeded");
      return;
    }
    for (int v = 0; v < values; ++v) {
      col[k] = static_cast<std::uint8_t>(v);
      if (k - radius >= 0 && !p.cell_valid(col.data(), h, k - radius, mode)) continue;
      run(k + 1);
    }
  }
};

std::vector<Packed> enumerate_raw(const Problem& p, int h, Mode m, bool prune) {
  const int values = p.value_count(m);
  // Roots: every assignment of the first `depth` cells.
  int depth = 0;
  long long roots = 1;
  while (depth < h && roots < 64) {
    roots *= values;
    ++depth;
  }
  std::vector<std::vector<Packed>> parts(static_cast<std::size_t>(roots));
  std::atomic<std::size_t> total{0};
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 1) num_threads(num_threads())
  for (long long r = 0; r < roots; ++r) {
    Enumerator e{p, h, m, prune, values, p.radius(), &parts[r], &total};
    long long x = r;
    bool ok = true;
    for (int k = 0; k < depth; ++k) {
      e.col[k] = static_cast<std::uint8_t>(x % values);
      x /= values;
    }
    for (int k = 0; k < depth && ok; ++k)
      if (k - p.radius() >= 0 && !p.cell_valid(e.col.data(), h, k - p.radius(), m)) ok = false;
    if (!ok) continue;
    try {
      e.run(depth);
    } catch (const CapacityExceeded&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw CapacityExceeded("state budget exceeded for height " + std::to_string(h));
  std::vector<Packed> all;
  all.reserve(total.load());
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::string g_cache_dir;

}  // namespace

std::vector<Packed> enumerate_states_naive(const Problem& p, int h, Mode m) {
  const int values = p.value_count(m);
  std::vector<Packed> out;
  Cells col{};
  long long total = 1;
  for (int i = 0; i < h; ++i) total *= values;
  for (long long x = 0; x < total; ++x) {
    long long y = x;
    for (int i = 0; i < h; ++i) {
      col[i] = static_cast<std::uint8_t>(y % values);
      y /= values;
    }
    if (is_valid(p, col.data(), h, m)) out.push_back(pack(col.data(), h, p.bits()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

StateSetPtr enumerate_states(const ProblemPtr& p, int h, Mode m, bool prune_symmetry) {
  if (h < 1) throw Error("height must be positive");
  if (h * p->bits() > 128 || h > kMaxHeight) throw CapacityExceeded("height exceeds packing");
  if (!p->supports(m)) throw Unsupported(p->name() + " does not support mode " + mode_name(m));
  if (m == Mode::band) prune_symmetry = false;
  std::vector<Packed> states;
  std::string path;
  if (!g_cache_dir.empty()) {
    path = state_cache_path(g_cache_dir, *p, h, m, prune_symmetry);
    if (auto cached = read_state_cache(path, *p, h, m, prune_symmetry)) {
      return std::make_shared<StateSet>(p, h, m, prune_symmetry, std::move(*cached));
    }
  }
  states = enumerate_raw(*p, h, m, prune_symmetry);
  auto set = std::make_shared<StateSet>(p, h, m, prune_symmetry, std::move(states));
  if (!path.empty()) write_state_cache(path, *set);
  return set;
}

void for_each_successor(const Problem& p, const std::uint8_t* prev, int h, Mode m,
                        const std::function<void(const std::uint8_t*)>& fn) {
  const int values = p.value_count(m);
  const int radius = p.radius();
  Cells col{};
  // iterative DFS keeps the hot path free of recursion overhead
  int k = 0;
  col[0] = 0;
  std::array<int, kMaxHeight + 1> next{};
  next[0] = 0;
  while (k >= 0) {
    if (next[k] >= values) {
      --k;
      continue;
    }
    col[k] = static_cast<std::uint8_t>(next[k]++);
    if (!p.cell_early(prev, col.data(), k, m)) continue;
    if (k - radius >= 0 && !p.cell_compat(prev, col.data(), h, k - radius, m)) continue;
    if (k + 1 == h) {
      bool ok = true;
      for (int i = std::max(0, h - radius); i < h && ok; ++i)
        ok = p.cell_compat(prev, col.data(), h, i, m);
      if (ok) fn(col.data());
      continue;
    }
    ++k;
    next[k] = 0;
  }
}

std::vector<std::uint32_t> successors(const StateSet& set, std::size_t i) {
  const Problem& p = set.problem();
  const int h = set.height();
  Cells prev{};
  set.decode(i, prev.data());
  std::vector<std::uint32_t> out;
  for_each_successor(p, prev.data(), h, set.mode(), [&](const std::uint8_t* col) {
    Packed s = pack(col, h, p.bits());
    if (set.pruned()) s = canonical(s, h, p.bits());
    long long idx = set.index_of(s);
    if (idx >= 0) out.push_back(static_cast<std::uint32_t>(idx));
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint32_t> successor_candidates(const StateSet& set, std::size_t i) {
  const Problem& p = set.problem();
  std::vector<std::uint32_t> out;
  if (!p.has_history()) {
    out.resize(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) out[k] = static_cast<std::uint32_t>(k);
    return out;
  }
  Cells prev{};
  set.decode(i, prev.data());
  Packed key = history_pattern(p, prev.data(), set.height(), true);
  out = set.history_group(key);
  if (set.pruned()) {
    Packed rkey = reflect(key, set.height(), p.history_bits());
    if (rkey != key) {
      const auto& more = set.history_group(rkey);
      out.insert(out.end(), more.begin(), more.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  return out;
}

std::vector<std::uint32_t> reference_successors(const StateSet& set, std::size_t i) {
  const Problem& p = set.problem();
  const int h = set.height();
  Cells prev{}, cand{}, refl{};
  set.decode(i, prev.data());
  std::vector<std::uint32_t> out;
  for (std::uint32_t c : successor_candidates(set, i)) {
    set.decode(c, cand.data());
    bool ok = is_compatible(p, prev.data(), cand.data(), h, set.mode());
    if (!ok && set.pruned()) {
      for (int k = 0; k < h; ++k) refl[k] = cand[h - 1 - k];
      ok = is_compatible(p, prev.data(), refl.data(), h, set.mode());
    }
    if (ok) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// GDL1 cache

void set_state_cache_dir(const std::string& dir) { g_cache_dir = dir; }
const std::string& state_cache_dir() { return g_cache_dir; }

namespace {

std::string u128_to_string(Packed v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace

std::string state_cache_path(const std::string& dir, const Problem& p, int h, Mode m,
                             bool pruned) {
  std::string name = p.name();
  for (char& c : name)
    if (c == ':' || c == ',') c = '_';
  return (std::filesystem::path(dir) /
          (name + "_h" + std::to_string(h) + "_" + mode_name(m) + (pruned ? "_p" : "_f") +
           ".gdl"))
      .string();
}

void write_state_cache(const std::string& path, const StateSet& set) {
  std::string body;
  for (Packed s : set.states()) {
    body += u128_to_string(s);
    body.push_back('\n');
  }
  uLongf bound = compressBound(body.size());
  std::vector<Bytef> buf(bound);
  if (compress2(buf.data(), &bound, reinterpret_cast<const Bytef*>(body.data()), body.size(),
                6) != Z_OK)
    return;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << "GDL1\n"
        << "problem " << set.problem().name() << "\n"
        << "height " << set.height() << "\n"
        << "mode " << mode_name(set.mode()) << "\n"
        << "flags pruned=" << (set.pruned() ? 1 : 0) << "\n"
        << "count " << set.size() << "\n"
        << "raw " << body.size() << "\n"
        << "zlib " << bound << "\n";
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(bound));
    if (!out) return;
  }
  std::filesystem::rename(tmp, path);
}

std::optional<std::vector<Packed>> read_state_cache(const std::string& path, const Problem& p,
                                                    int h, Mode m, bool pruned) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string magic, key, name, mode, flags;
  int height = 0;
  std::size_t count = 0, raw = 0, zsize = 0;
  std::getline(in, magic);
  if (magic != "GDL1") return std::nullopt;
  in >> key >> name >> key >> height >> key >> mode >> key >> flags >> key >> count >> key >>
      raw >> key >> zsize;
  in.get();
  if (!in || name != p.name() || height != h || mode != mode_name(m) ||
      flags != std::string("pruned=") + (pruned ? "1" : "0"))
    return std::nullopt;
  std::vector<Bytef> z(zsize);
  in.read(reinterpret_cast<char*>(z.data()), static_cast<std::streamsize>(zsize));
  if (!in) return std::nullopt;
  std::string body(raw, '\0');
  uLongf out_len = raw;
  if (uncompress(reinterpret_cast<Bytef*>(body.data()), &out_len, z.data(), zsize) != Z_OK ||
      out_len != raw)
    return std::nullopt;
  std::vector<Packed> states;
  states.reserve(count);
  Packed v = 0;
  for (char c : body) {
    if (c == '\n') {
      states.push_back(v);
      v = 0;
    } else {
      v = v * 10 + static_cast<unsigned>(c - '0');
    }
  }
  if (states.size() != count || !std::is_sorted(states.begin(), states.end()))
    return std::nullopt;
  return states;
}

}  // namespace gdl
