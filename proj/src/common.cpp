#include "gdl/common.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gdl {

namespace {
int initial_threads() {
  if (const char* env = std::getenv("GDL_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}
int g_threads = initial_threads();
Budget g_budget;
}  // namespace

int num_threads() { return g_threads; }
void set_num_threads(int n) { g_threads = n > 0 ? n : 1; }
Budget& budget() { return g_budget; }

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::interior: return "interior";
    case Mode::band: return "band";
    case Mode::relaxed: return "relaxed";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "interior") return Mode::interior;
  if (s == "band") return Mode::band;
  if (s == "relaxed") return Mode::relaxed;
  throw Error("unknown mode " + s);
}

}  // namespace gdl
