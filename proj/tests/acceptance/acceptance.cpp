// Acceptance checks, one line per criterion.  Usage: acceptance [k ...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../helpers.hpp"
#include "gdl/cli.hpp"
#include "gdl/counting.hpp"
#include "gdl/loss.hpp"
#include "gdl/oracle.hpp"
#include "gdl/rauzy.hpp"
#include "gdl/solver.hpp"

using namespace gdl;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string dims(int n, int m) { return std::to_string(n) + "x" + std::to_string(m); }

// 1. transfer route equals brute force
Verdict oracle_equivalence() {
  Verdict v;
  long long checked = 0;
  struct Case {
    const char* name;
    int cap;
  };
  for (Case c : {Case{"dom", 18}, {"2dom", 18}, {"ab:1,1", 18}, {"dist2", 18}, {"roman", 12}}) {
    auto p = get_problem(c.name);
    for (int n = 1; n <= c.cap; ++n)
      for (int m = n; n * m <= c.cap; ++m, ++checked)
        if (gamma(p, n, m) != brute_min_cost(*p, n, m))
          v.fail(std::string(c.name) + " gamma " + dims(n, m));
  }
  for (const char* name : {"dom", "total", "minimal-dom", "minimal-total"}) {
    auto p = get_problem(name);
    for (int n = 1; n <= 16; ++n)
      for (int m = n; n * m <= 16; ++m, ++checked)
        if (count_sets(p, n, m).count != brute_count(*p, n, m))
          v.fail(std::string(name) + " count " + dims(n, m));
  }
  if (v.pass) v.detail = std::to_string(checked) + " instances agree";
  return v;
}

// 2. solver against the tabulated closed formulas, m up to 60
Verdict formula_regression() {
  Verdict v;
  long long checked = 0, skipped = 0, bad = 0;
  struct Row {
    const char* name;
    int max_n;
  };
  for (Row r : {Row{"2dom", 12}, {"roman", 8}, {"total", 10}, {"dist2", 8}}) {
    auto p = get_problem(r.name);
    for (int n = 1; n <= r.max_n; ++n) {
      auto vals = gamma_sequence(*cached_system(p, n, true), 60);
      for (int m = n; m <= 60; ++m) {
        if (!reference_available(r.name, n, m)) {
          ++skipped;
          continue;
        }
        ++checked;
        if (vals[m] != reference_formula(r.name, n, m)) {
          ++bad;
          v.fail(std::string(r.name) + " " + dims(n, m));
        }
      }
      clear_system_cache();
    }
  }
  v.detail = std::to_string(checked) + " checked, " + std::to_string(bad) + " mismatches, " +
             std::to_string(skipped) + " without a table entry" + (v.pass ? "" : ": " + v.detail);
  return v;
}

// 3. the twelve fixed-height 2dom relations
Verdict recurrences() {
  Verdict v;
  struct Expect {
    int n, start, period, increment;
  };
  const Expect table[] = {{1, 3, 2, 1},    {2, 3, 1, 1},    {3, 5, 3, 4},    {4, 8, 4, 7},
                          {5, 14, 7, 15},  {6, 20, 11, 28}, {7, 31, 18, 53}, {8, 16, 3, 10},
                          {9, 17, 3, 11},  {10, 14, 1, 4},  {11, 16, 3, 13}, {12, 17, 3, 14}};
  auto p = get_problem("2dom");
  std::string starts;
  double t12 = 0;
  for (const Expect& e : table) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = find_recurrence(p, e.n);
    if (e.n == 12) t12 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    starts += (starts.empty() ? "" : ",") + std::to_string(r.start);
    if (r.period != e.period || r.increment != e.increment || r.start > e.start)
      v.fail("n=" + std::to_string(e.n) + " got (r=" + std::to_string(r.period) +
             ", p=" + std::to_string(r.increment) + ", from " + std::to_string(r.start) + ")");
    clear_system_cache();
  }
  if (v.pass)
    v.detail = "12/12 match, starts " + starts + ", n=12 in " + fmt("%.1f", t12) + " s on " +
               std::to_string(num_threads()) + " worker(s)";
  return v;
}

// 4. 2dom band at h=6
Verdict loss_two_dom() {
  Verdict v;
  auto p = get_problem("2dom");
  auto band = cached_band(p, 6);
  if (!replay_recurrence(band->band(), Recurrence{20, 3, 6}, 20, 60)) v.fail("T_a^(r+3) != T_a^r + 6 somewhere in [20,60]");
  auto rec = band_recurrence(*band);
  int sample = 0;
  for (int n : {13, 18, 24, 30, 36})
    for (int m : {13, 19, 25, 31, 36}) {
      ++sample;
      long long b = lower_bound(p, n, m, 6).bound;
      if (b != (n + 2) * (m + 2) / 3 - 6) v.fail("bound " + dims(n, m) + " = " + std::to_string(b));
    }
  long long ext = extended_lower_bound(p, 100, 100, 6).bound;
  if (ext != 3462) v.fail("extended 100x100 = " + std::to_string(ext));
  if (v.pass)
    v.detail = std::to_string(band->size()) + " band states, detected (from " +
               std::to_string(rec.start) + ", r=" + std::to_string(rec.period) + ", p=" +
               std::to_string(rec.increment) + "), " + std::to_string(sample) +
               " bounds exact, 100x100 -> 3462";
  return v;
}

// 5. Roman band sweep over h = 5..8
Verdict loss_roman() {
  Verdict v;
  auto p = get_problem("roman");
  const int scale = p->loss_model()->scale;
  std::string sweep;
  bool reproduced = false;
  const auto saved = budget().max_dense_dim;
  budget().max_dense_dim = 8000;
  for (int h = 5; h <= 8; ++h) {
    auto band = build_band(p, h);
    auto rec = band_recurrence(*band, 400);
    sweep += (sweep.empty() ? "" : ", ") + std::string("h=") + std::to_string(h) + " (" +
             std::to_string(band->size()) + " states) from " + std::to_string(rec.start) +
             " r=" + std::to_string(rec.period) + " p=" + std::to_string(rec.increment);
    if (rec.period == 5 && rec.increment == 5 * scale && rec.start <= 12) reproduced = true;
  }
  budget().max_dense_dim = saved;
  long long checked = 0;
  std::string bad;
  for (int n = 13; n <= 25; ++n)
    for (int m = n; m <= 25; ++m, ++checked) {
      long long b = lower_bound(p, n, m, 6).bound;
      if (b != reference_formula("roman", n, m)) bad += " " + dims(n, m);
    }
  std::string bounds = bad.empty() ? std::to_string(checked) + " bounds at h=6 equal the table"
                                   : "bounds differ at" + bad;
  if (!reproduced) v.fail("no h in [5,8] gives r=5, p=" + std::to_string(5 * scale) + " from <= 12");
  if (!bad.empty()) v.fail(bounds);
  v.detail += " [" + sweep + "; " + bounds + "]";
  return v;
}

// 6. total: soundness and replay for h <= 7
Verdict loss_total() {
  Verdict v;
  auto p = get_problem("total");
  long long checked = 0;
  for (int n = 3; n <= 18; ++n)
    for (int m = n; n * m <= 18; ++m)
      for (int h = 1; 2 * h < n && h <= 7; ++h, ++checked)
        if (lower_bound(p, n, m, h).bound > *brute_min_cost(*p, n, m))
          v.fail("above oracle at " + dims(n, m));
  for (int n = 3; n <= 10; ++n)
    for (int m = n; m <= 40; ++m)
      for (int h = 1; 2 * h < n && h <= 7; ++h, ++checked)
        if (lower_bound(p, n, m, h).bound > reference_formula("total", n, m))
          v.fail("above table at " + dims(n, m) + " h=" + std::to_string(h));
  std::string recs;
  for (int h = 1; h <= 7; ++h) {
    auto band = cached_band(p, h);
    auto rec = band_recurrence(*band, 400);
    if (!replay_recurrence(band->band(), rec, rec.start, rec.start + 3 * rec.period))
      v.fail("replay h=" + std::to_string(h));
    recs += (recs.empty() ? "" : ", ") + std::string("h=") + std::to_string(h) + ":(" +
            std::to_string(rec.start) + "," + std::to_string(rec.period) + "," +
            std::to_string(rec.increment) + ")";
    clear_band_cache();
  }
  if (v.pass)
    v.detail = std::to_string(checked) + " bounds sound; replayed " + recs;
  return v;
}

// 7. Rauzy growth rates
Verdict rauzy_rates() {
  Verdict v;
  struct Expect {
    const char* name;
    double rate;
  };
  std::string seen;
  for (Expect e : {Expect{"2dom", 2.485584}, {"total", 2.618034}, {"roman", 2.956295}}) {
    auto s = rauzy_sweep(get_problem(e.name), 8);
    seen += std::string(e.name) + " " + fmt("%.6f", s.rate) + " at order " + std::to_string(s.stable_order) + ", ";
    if (s.stable_order == 0 || std::fabs(s.rate - e.rate) > 1e-4) v.fail(std::string(e.name) + " rate " + fmt("%.6f", s.rate));
  }
  auto d = rauzy_sweep(get_problem("dist2"), 3);
  std::string lam;
  bool monotone = true;
  for (std::size_t k = 0; k < d.lambdas.size(); ++k) {
    lam += (k ? "," : "") + fmt("%.4f", d.lambdas[k]);
    if (k && d.lambdas[k] > d.lambdas[k - 1] + 1e-9) monotone = false;
  }
  double gap = d.lambdas.size() > 1 ? std::fabs(d.lambdas.back() - d.lambdas[d.lambdas.size() - 2]) : 1.0;
  // factor graphs of higher order admit fewer words, so the sequence can only fall
  if (!monotone) v.fail("dist2 lambdas not monotone");
  if (gap >= 1e-2) v.fail("dist2 final gap " + fmt("%.4f", gap));
  seen += "dist2 nonincreasing [" + lam + "] final gap " + fmt("%.1e", gap) + "; stretch value " +
          (std::fabs(d.rate - 2.958770) < 1e-3 ? "met" : "not met (" + fmt("%.4f", d.rate) + ")");
  v.detail = seen + (v.pass ? "" : " | " + v.detail);
  return v;
}

// 8. counting growth brackets
Verdict growth() {
  Verdict v;
  auto dom = growth_bounds(get_problem("dom"), 10);
  if (!(dom.lower <= 1.959201684)) v.fail("dom lower(10) " + fmt("%.9f", dom.lower));
  if (!(dom.upper >= 1.950022198)) v.fail("dom upper(10) " + fmt("%.9f", dom.upper));
  if (std::fabs(*dom.ratio - 1.954751) > 2e-3) v.fail("dom ratio " + fmt("%.9f", *dom.ratio));
  clear_system_cache();
  auto tot = growth_bounds(get_problem("total"), 9);
  if (std::fabs(*tot.ratio - 1.915316) > 2e-3) v.fail("total ratio " + fmt("%.9f", *tot.ratio));
  struct Caps {
    const char* name;
    double lo, hi;
    int max_n;
  };
  std::string minimal;
  for (Caps c : {Caps{"minimal-dom", 1.315870482, 1.550332154, 6},
                 {"minimal-total", 1.275805204, 1.524476040, 5}}) {
    for (int n = 3; n <= c.max_n; ++n) {
      auto g = growth_bounds(get_problem(c.name), n, false);
      if (!(g.lower <= g.upper) || g.lower > c.hi || g.upper < c.lo)
        v.fail(std::string(c.name) + " n=" + std::to_string(n) + " [" + fmt("%.6f", g.lower) + ", " +
               fmt("%.6f", g.upper) + "]");
      if (n == c.max_n)
        minimal += std::string(", ") + c.name + " n=" + std::to_string(n) + " [" +
                   fmt("%.6f", g.lower) + ", " + fmt("%.6f", g.upper) + "]";
    }
  }
  if (v.pass)
    v.detail = "dom n=10 [" + fmt("%.9f", dom.lower) + ", " + fmt("%.9f", dom.upper) + "] ratio " +
               fmt("%.9f", *dom.ratio) + ", total n=9 ratio " + fmt("%.9f", *tot.ratio) + minimal;
  return v;
}

std::string cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  clear_system_cache();
  clear_band_cache();
  if (cli::run(args, out, err) != 0) return "error: " + err.str();
  return out.str();
}

// 9. standalone property checks
Verdict properties() {
  Verdict v;
  auto two = get_problem("2dom");
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> dim(1, 16);
  for (int t = 0; t < 1000; ++t) {
    int n = dim(rng), m = dim(rng);
    auto x = test::random_two_dominating(rng, n, m);
    long long size = std::count(x.begin(), x.end(), 1);
    if (test::local_loss_sum(*two, n, m, x) != 4 * size - 2 * (n * m - size)) {
      v.fail("local loss identity at " + dims(n, m));
      break;
    }
  }
  for (const char* name : {"dom", "2dom", "total", "roman", "dist2"}) {
    auto p = get_problem(name);
    std::vector<std::vector<std::optional<long long>>> seq(8);
    for (int n = 1; n <= 7; ++n) {
      seq[n] = gamma_sequence(*cached_system(p, n, true), 30);
      if (seq[n] != gamma_sequence(*cached_system(p, n, false), 30)) v.fail(std::string(name) + " pruning n=" + std::to_string(n));
      for (int a = 1; a < 30; ++a)
        for (int b = 1; a + b <= 30; ++b)
          if (seq[n][a] && seq[n][b] && !(seq[n][a + b] && *seq[n][a + b] <= *seq[n][a] + *seq[n][b]))
            v.fail(std::string(name) + " subadditivity n=" + std::to_string(n));
      auto rec = find_recurrence(p, n);
      for (long long m = rec.start; m + rec.period <= 30; ++m)
        if (*seq[n][m + rec.period] != *seq[n][m] + rec.increment) v.fail(std::string(name) + " replay n=" + std::to_string(n));
    }
    for (int n = 1; n <= 7; ++n)
      for (int m = 1; m <= 7; ++m)
        if (seq[n][m] != seq[m][n]) v.fail(std::string(name) + " transpose " + dims(n, m));
    clear_system_cache();
  }
  const std::vector<std::vector<std::string>> cmds = {
      {"solve", "--problem", "roman", "-n", "7", "-m", "23"},
      {"formula", "--problem", "2dom", "-n", "9"},
      {"loss-bound", "--problem", "2dom", "-n", "40", "-m", "52"},
      {"count", "--problem", "minimal-total", "-n", "5", "-m", "8"},
      {"growth", "--problem", "dom", "-n", "7"},
      {"rauzy", "--problem", "total"},
      {"verify", "--problem", "total", "--max-n", "6", "--max-m", "30"},
  };
  int saved = num_threads();
  for (const auto& cmd : cmds) {
    std::vector<std::string> outs;
    for (const char* w : {"1", "2", "8"}) {
      auto args = cmd;
      args.insert(args.end(), {"--threads", w});
      outs.push_back(cli(args));
    }
    if (outs[0] != outs[1] || outs[0] != outs[2] || outs[0].rfind("error", 0) == 0)
      v.fail("CLI output differs across workers for " + cmd[0]);
  }
  set_num_threads(saved);
  if (v.pass)
    v.detail = "loss identity on 1000 random sets, transpose, subadditivity, pruning, replay, "
               "bit-identical JSON for 1/2/8 workers";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"closed-formula regression", formula_regression},
      {"2dom recurrences", recurrences},
      {"loss method 2dom", loss_two_dom},
      {"loss method roman", loss_roman},
      {"loss method total", loss_total},
      {"rauzy growth rates", rauzy_rates},
      {"counting growth brackets", growth},
      {"property suites", properties},
  };
  std::vector<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.push_back(std::stoi(argv[i]));
  if (chosen.empty())
    for (int k = 1; k <= 9; ++k) chosen.push_back(k);

  int failed = 0;
  for (int k : chosen) {
    if (k < 1 || k > 9) {
      std::cerr << "no criterion " << k << "\n";
      return 2;
    }
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k - 1].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::cout << "criterion " << k << " " << (v.pass ? "PASS" : "FAIL") << " (" << criteria[k - 1].first
              << ", " << fmt("%.1f", secs) << " s): " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
